import math
import random

import pytest

from polytract.catalog import _negated_circuit_bytes, build_catalog
from polytract.encoding import PolylogBound
from polytract.errors import ConfigError, InsufficientData
from polytract.harness import (
    SuiteConfig,
    config_echo,
    fit_runtime,
    load_config,
    parse_config,
    run_composition_checks,
    run_hardness_check,
    run_reduction_check,
    run_short_query_checks,
    time_interleaved_ns,
)
from polytract.problems import cvp


def test_parse_config_full():
    cfg = parse_config(
        """
        # comment line
        seed = 9
        ladder = 64, 128, 256, 512
        random_budget = 17
        slope_slack = 0.25
        lexicon = In, ON, under
        gate_weights = 1, 1, 1
        inject = identity-preprocessing:bds-verdict-bit
        exhaustive_cap.bds = 2
        bound.wordstats-count-digest = 4, 1, 9   # trailing comment
        """
    )
    assert cfg.seed == 9
    assert cfg.ladder == (64, 128, 256, 512)
    assert cfg.random_budget == 17
    assert cfg.slope_slack == 0.25
    assert cfg.lexicon == ("in", "on", "under")
    assert cfg.gate_weights == (1, 1, 1)
    assert cfg.inject == ("identity-preprocessing:bds-verdict-bit",)
    assert cfg.exhaustive_caps["bds"] == 2
    assert cfg.bounds["wordstats-count-digest"] == PolylogBound(4.0, 1, 9.0)


def test_parse_config_rejects_unknown_and_malformed():
    with pytest.raises(ConfigError):
        parse_config("nonsense = 1\n")
    with pytest.raises(ConfigError):
        parse_config("just words\n")
    with pytest.raises(ConfigError):
        parse_config("seed = not-a-number\n")
    with pytest.raises(ConfigError):
        parse_config("gate_weights = 1, 2\n")


def test_parse_config_does_not_mutate_base():
    base = SuiteConfig()
    parse_config("exhaustive_cap.bds = 1\nbound.qbds-query = 1,1,1\n", base)
    assert base.exhaustive_caps["bds"] != 1 or "qbds-query" not in base.bounds or \
        base.bounds["qbds-query"] != PolylogBound(1.0, 1, 1.0)


def test_load_config_overrides(tmp_path):
    p = tmp_path / "suite.cfg"
    p.write_text("seed = 5\nrandom_budget = 99\n")
    cfg = load_config(str(p), {"seed": 123, "random_budget": None})
    assert cfg.seed == 123          # explicit override wins
    assert cfg.random_budget == 99  # None override leaves the file value


def test_config_echo_is_json_friendly():
    import json
    echo = config_echo(SuiteConfig())
    json.dumps(echo)
    assert echo["seed"] == 42
    assert echo["bounds"]["cvp-verdict-bit"] == "0.0*log2(n)^0+1.0"


def test_fit_runtime_recovers_quadratic():
    points = [(n, 3 * n * n) for n in (64, 256, 1024, 4096, 16384)]
    fit = fit_runtime(points, "poly-n")
    assert fit.exponent == pytest.approx(2.0, abs=1e-6)
    assert fit.residual < 1e-9


def test_fit_runtime_recovers_cubic_in_log():
    points = [(n, int(5 * math.log2(n) ** 3)) for n in (2**10, 2**12, 2**15, 2**18, 2**20)]
    fit = fit_runtime(points, "poly-log-n")
    assert fit.exponent == pytest.approx(3.0, abs=0.05)


def test_fit_runtime_constant_series():
    fit = fit_runtime([(n, 500) for n in (8, 16, 32, 64)], "poly-n")
    assert fit.exponent == 0.0


def test_fit_runtime_needs_enough_increasing_points():
    with pytest.raises(InsufficientData):
        fit_runtime([(8, 1), (16, 2), (32, 3)], "poly-n")
    with pytest.raises(InsufficientData):
        fit_runtime([(8, 1), (16, 2), (16, 3), (32, 4)], "poly-n")
    with pytest.raises(ValueError):
        fit_runtime([(8, 1), (16, 2), (32, 3), (64, 4)], "exp-n")


def test_fit_runtime_tolerates_noise():
    rng = random.Random(6)
    points = [(n, int(n * n * rng.uniform(0.9, 1.1))) for n in (64, 256, 1024, 4096)]
    fit = fit_runtime(points, "poly-n")
    assert abs(fit.exponent - 2.0) < 0.15


def test_time_interleaved_ns_orders_costs():
    def cheap():
        pass

    def costly():
        sum(range(400))

    floors = time_interleaved_ns([(cheap, [()] * 50), (costly, [()] * 50)])
    assert len(floors) == 2
    assert 0 < floors[0] < floors[1]


def test_negated_circuit_bytes_matches_structural_rewrite():
    rng = random.Random(71)
    for _ in range(50):
        data = cvp.circuit_to_bytes(cvp.random_circuit(rng.randrange(2, 20), rng))
        expected = cvp.circuit_to_bytes(cvp.negate_output(cvp.parse_circuit(data)))
        assert _negated_circuit_bytes(data) == expected


def test_cvp_latency_probes_cover_both_verdicts():
    cfg = SuiteConfig()
    cat = build_catalog(cfg)
    entry = cat.witnesses["cvp-verdict-bit"]
    for size in (16, 64, 256):
        probes = entry.latency_probes(size, cfg.seed)
        digests = {entry.witness.preprocess(x) for x in probes}
        assert digests == {b"0", b"1"}


SMALL = SuiteConfig(random_budget=25, witness_samples=10)


def test_reduction_checks_small_budget():
    cat = build_catalog(SMALL)
    for name in ("bds-identity", "qbds-to-bds", "cvp-double-negation"):
        assert run_reduction_check(cat, SMALL, name).passed


def test_composition_checks_small_budget():
    cat = build_catalog(SMALL)
    rep = run_composition_checks(cat, SMALL)
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert any(n.startswith("constants:") for n in names)


def test_hardness_check_small_budget():
    cat = build_catalog(SMALL)
    assert run_hardness_check(cat, SMALL).passed


def test_short_query_checks_small_budget():
    cat = build_catalog(SMALL)
    assert run_short_query_checks(cat, SMALL).passed
