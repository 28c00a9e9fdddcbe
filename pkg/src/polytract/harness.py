"""Suite configuration, runtime fitting, and the consolidated check runner.

Configuration files are plain key = value text (see the README for the
grammar). All randomness flows from one seed through stable string-keyed
substreams, so a report is reproducible byte for byte once the volatile
timing fields are stripped.

Runtime growth is judged by least-squares fits in log space: a polynomial
claim t ~ n^e fits log t against log n, a polylog claim t ~ log(n)^e fits
log t against log log n. The slope estimates the exponent.
"""
from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass, field, replace

from . import catalog as catalog_mod
from .encoding import (
    LanguageOfPairs,
    Pair,
    PolylogBound,
    check_short_query,
    parse_bound,
)
from .errors import ConfigError, InsufficientData
from .factorization import check_prop1, verify_factorization
from .preprocessing import digest_size_ladder, verify_witness
from .problems import bds
from .reductions import (
    compose_fcr,
    pullback_witness_f,
    transfer_witness,
    verify_f_reduction,
    verify_fcr_reduction,
    hardness_pack,
)
from .report import SCHEMA_VERSION, CheckResult, Report, dump_json
from .separation import separation_report

DEFAULT_LADDER = (1024, 4096, 16384, 65536)


@dataclass
class SuiteConfig:
    seed: int = 42
    ladder: tuple[int, ...] = DEFAULT_LADDER
    random_budget: int = 200
    witness_samples: int = 60
    slope_slack: float = 0.5
    ptime_max_degree: int = 3
    fit_residual_max: float = 1.0
    query_reps: int = 300
    edge_prob: float = 0.3
    gate_weights: tuple[int, int, int] = (1, 2, 2)
    preposition_rate: float = 0.35
    lexicon: tuple[str, ...] = catalog_mod.wordstats.DEFAULT_LEXICON
    exhaustive_caps: dict = field(default_factory=lambda: {
        "bds": 3, "qbds": 3, "separation": 5, "all_graphs": 4,
    })
    separation_max_n: int = 20
    bounds: dict = field(default_factory=lambda: dict(catalog_mod.DEFAULT_BOUNDS))
    inject: tuple[str, ...] = ()
    output_path: str | None = None


_SCALARS = {
    "seed": int,
    "random_budget": int,
    "witness_samples": int,
    "slope_slack": float,
    "ptime_max_degree": int,
    "fit_residual_max": float,
    "query_reps": int,
    "edge_prob": float,
    "preposition_rate": float,
    "separation_max_n": int,
    "output_path": str,
}


def parse_config(text: str, base: SuiteConfig | None = None) -> SuiteConfig:
    """Parse key = value lines; '#' starts a comment, blank lines ignored."""
    cfg = replace(base) if base else SuiteConfig()
    cfg.exhaustive_caps = dict(cfg.exhaustive_caps)
    cfg.bounds = dict(cfg.bounds)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            _apply_key(cfg, key, value)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return cfg


def _apply_key(cfg: SuiteConfig, key: str, value: str) -> None:
    if key in _SCALARS:
        setattr(cfg, key, _SCALARS[key](value))
    elif key == "ladder":
        cfg.ladder = tuple(int(v.strip()) for v in value.split(",") if v.strip())
    elif key == "lexicon":
        cfg.lexicon = tuple(w.strip().lower() for w in value.split(",") if w.strip())
    elif key == "gate_weights":
        parts = [int(v.strip()) for v in value.split(",")]
        if len(parts) != 3:
            raise ConfigError("gate_weights needs three integers")
        cfg.gate_weights = tuple(parts)
    elif key == "inject":
        cfg.inject = tuple(v.strip() for v in value.split(",") if v.strip())
    elif key.startswith("exhaustive_cap."):
        cfg.exhaustive_caps[key.split(".", 1)[1]] = int(value)
    elif key.startswith("bound."):
        cfg.bounds[key.split(".", 1)[1]] = parse_bound(value)
    else:
        raise ConfigError(f"unknown key {key!r}")


def load_config(path: str | None, overrides: dict | None = None) -> SuiteConfig:
    cfg = SuiteConfig()
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = parse_config(fh.read(), cfg)
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def config_echo(cfg: SuiteConfig) -> dict:
    return {
        "seed": cfg.seed,
        "ladder": list(cfg.ladder),
        "random_budget": cfg.random_budget,
        "witness_samples": cfg.witness_samples,
        "slope_slack": cfg.slope_slack,
        "ptime_max_degree": cfg.ptime_max_degree,
        "fit_residual_max": cfg.fit_residual_max,
        "query_reps": cfg.query_reps,
        "edge_prob": cfg.edge_prob,
        "gate_weights": list(cfg.gate_weights),
        "preposition_rate": cfg.preposition_rate,
        "lexicon": list(cfg.lexicon),
        "exhaustive_caps": dict(cfg.exhaustive_caps),
        "separation_max_n": cfg.separation_max_n,
        "bounds": {k: v.describe() for k, v in sorted(cfg.bounds.items())},
        "inject": list(cfg.inject),
    }


# ------------------------------------------------------------------ timing


def time_call_ns(fn, *args, warmups: int = 3, reps: int = 5) -> int:
    """Median of reps wall-clock samples after a few warm-up calls."""
    for _ in range(warmups):
        fn(*args)
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn(*args)
        samples.append(time.perf_counter_ns() - t0)
    return int(statistics.median(samples))


def time_interleaved_ns(tasks, rounds: int = 7) -> list[float]:
    """Per-call floor for each (fn, calls) task, interleaving the tasks.

    The first sweep warms everything up untimed; each later sweep times
    every task once and each task keeps its fastest sweep. Sweeping the
    tasks together makes slow drift (frequency scaling, competing load)
    land on all of them alike instead of biasing whichever ran last, which
    matters when the tasks are rungs of one growth curve.
    """
    best = [math.inf] * len(tasks)
    for sweep in range(rounds + 1):
        for i, (fn, calls) in enumerate(tasks):
            t0 = time.perf_counter_ns()
            for args in calls:
                fn(*args)
            per_call = (time.perf_counter_ns() - t0) / max(len(calls), 1)
            if sweep and per_call < best[i]:
                best[i] = per_call
    return best


@dataclass(frozen=True)
class FitResult:
    model: str
    exponent: float
    intercept: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "exponent": round(self.exponent, 4),
            "intercept": round(self.intercept, 4),
            "residual": round(self.residual, 4),
        }


def fit_runtime(measurements, model: str = "poly-n") -> FitResult:
    """Least-squares exponent estimate from (size, nanoseconds) points.

    model 'poly-n' fits t ~ n^e; 'poly-log-n' fits t ~ log2(n)^e. Needs at
    least four measurements at strictly increasing sizes.
    """
    points = sorted(measurements)
    if len(points) < 4:
        raise InsufficientData("need at least 4 measurements to fit")
    sizes = [p[0] for p in points]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InsufficientData("measurement sizes must be strictly increasing")
    if model == "poly-n":
        xs = [math.log(n) for n in sizes]
    elif model == "poly-log-n":
        xs = [math.log(math.log2(max(n, 4))) for n in sizes]
    else:
        raise ValueError(f"unknown model {model!r}")
    ys = [math.log(max(t, 1)) for _, t in points]
    if len(set(ys)) == 1:
        slope, intercept = 0.0, ys[0]
    else:
        reg = statistics.linear_regression(xs, ys)
        slope, intercept = reg.slope, reg.intercept
    residual = math.sqrt(
        sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys)) / len(xs)
    )
    return FitResult(model, slope, intercept, residual)


# ------------------------------------------------------- check runners


def _member_instances(entry, sampler, cap, budget, seed):
    return [x for x in sampler(seed, cap, budget) if entry.base(x)]


def run_factorization_check(cat, config: SuiteConfig, name: str) -> Report:
    fl = catalog_mod._lookup(cat.factored, name, "factored language")
    cap = config.exhaustive_caps.get("bds", 3)
    sampler = catalog_mod._bds_samplers(config.edge_prob)
    if name.startswith("qbds"):
        raw = sampler(config.seed, cap, config.random_budget)
        raw = [_to_qbds(x) for x in raw]
    elif name.startswith("cvp"):
        raw = _cvp_instances(config)
    else:
        raw = sampler(config.seed, cap, config.random_budget)
    members = [x for x in raw if fl.base(x)]
    rep = verify_factorization(fl, members)
    rep.extend(check_prop1(fl, members))
    return rep


def _to_qbds(x):
    try:
        block, tail = bds.split_block_tail(x)
    except Exception:
        return x
    return block + b"#" + tail


def _cvp_instances(config: SuiteConfig):
    rng = random.Random(f"{config.seed}:cvp-instances")
    out = [catalog_mod.cvp.circuit_to_bytes(c)
           for c in catalog_mod.cvp.enumerate_circuits(1)]
    for _ in range(config.random_budget):
        c = catalog_mod.cvp.random_circuit(
            rng.randrange(2, 14), rng, config.gate_weights)
        out.append(catalog_mod.cvp.circuit_to_bytes(c))
    return out


def run_witness_check(cat, config: SuiteConfig, name: str) -> Report:
    entry = catalog_mod._lookup(cat.witnesses, name, "witness")
    pos, neg = entry.sample_pairs(config.seed, config.witness_samples)
    rep = verify_witness(entry.language, entry.witness, pos, neg)
    ladder = digest_size_ladder(
        entry.witness,
        lambda size: entry.ladder_gen(size, config.seed),
        config.ladder,
        slope_slack=config.slope_slack,
    )
    rep.add(f"ladder:{name}", ladder.passed,
            measured=round(ladder.slope, 4), bound=ladder.exponent_cap,
            detail="slope of log digest vs log log input; bound checked per rung",
            timings={"rungs": [r.to_dict() for r in ladder.rungs]})
    return rep


def run_reduction_check(cat, config: SuiteConfig, name: str) -> Report:
    if name in cat.fcr_reductions:
        entry = cat.fcr_reductions[name]
        cap = config.exhaustive_caps.get("bds", 3)
        pairs = entry.sample_pairs(config.seed, cap, config.random_budget)
        return verify_fcr_reduction(
            entry.reduction, entry.source_member, entry.target_member, pairs)
    entry = catalog_mod._lookup(cat.f_reductions, name, "reduction")
    pairs = entry.sample_pairs(config.seed, config.random_budget)
    return verify_f_reduction(entry.reduction, entry.source, entry.target, pairs)


def run_composition_checks(cat, config: SuiteConfig) -> Report:
    """Build three compositions and verify each, constants included."""
    rep = Report("compositions")
    cap = config.exhaustive_caps.get("bds", 3)
    budget = max(40, config.random_budget // 4)
    cases = [
        ("bds-identity", "bds-identity"),
        ("qbds-to-bds", "bds-identity"),
        ("qbds-identity", "qbds-to-bds"),
    ]
    for first_name, second_name in cases:
        first = cat.fcr_reductions[first_name]
        second = cat.fcr_reductions[second_name]
        probes = [x for x in
                  catalog_mod._bds_samplers(config.edge_prob)(config.seed, 2, 20)
                  if first.target_member(x)]
        if first.reduction.target_fact.name.startswith("qbds"):
            probes = [_to_qbds(x) for x in probes]
            probes = [y for y in probes if first.target_member(y)]
        composed = compose_fcr(
            first.reduction, second.reduction,
            (first.reduction.target_fact, second.reduction.source_fact),
            first.target_member, probes)
        label = composed.name
        ok_c = (
            composed.source_fact.redundancy == first.reduction.source_fact.redundancy + 1
            and composed.target_fact.redundancy == second.reduction.target_fact.redundancy + 1
        )
        rep.add(f"constants:{label}", ok_c,
                measured=(composed.source_fact.redundancy,
                          composed.target_fact.redundancy),
                bound=(first.reduction.source_fact.redundancy + 1,
                       second.reduction.target_fact.redundancy + 1))
        pairs = [
            Pair(composed.source_fact.data_part(raw), b"")
            for raw in _composition_raws(first_name, config, cap, budget)
        ]
        sub = verify_fcr_reduction(
            composed, first.source_member, second.target_member, pairs)
        for check in sub.checks:
            rep.checks.append(CheckResult(
                f"{label}.{check.name}", check.passed, check.measured,
                check.bound, check.detail))
        beta_id = all(
            composed.map_query(q) == q
            for q in (b"", b"probe", b"1 2", b"\\h#\\a")
        )
        rep.add(f"identity-query-map:{label}", beta_id,
                detail="composed query map is the identity on every probe")
    return rep


def _composition_raws(first_name: str, config: SuiteConfig, cap: int, budget: int):
    raw = catalog_mod._bds_samplers(config.edge_prob)(config.seed, cap, budget)
    if first_name.startswith("qbds"):
        return [_to_qbds(x) for x in raw]
    return raw


def run_transfer_check(cat, config: SuiteConfig) -> Report:
    """Pull the verdict-bit witness back through the re-splitting reduction."""
    rep = Report("witness-transfer")
    entry = cat.fcr_reductions["qbds-to-bds"]
    wentry = cat.witnesses["bds-verdict-bit"]
    new_fact, new_witness = transfer_witness(
        entry.reduction, wentry.witness, entry.reduction.target_fact)
    rep.add("packed-redundancy", new_fact.redundancy ==
            entry.reduction.source_fact.redundancy + 1,
            measured=new_fact.redundancy,
            bound=entry.reduction.source_fact.redundancy + 1)

    cap = config.exhaustive_caps.get("bds", 3)
    sampler = catalog_mod._bds_samplers(config.edge_prob)
    raw = [_to_qbds(x) for x in sampler(config.seed, cap, config.random_budget)]
    induced = LanguageOfPairs(
        name="pairs(packed qbds)",
        membership=lambda d, q: entry.source_member(new_fact.restore(d, q)),
        short_query_bound=new_fact.query_bound,
    )
    positives, negatives = [], []
    for y in raw:
        pair = Pair(new_fact.data_part(y), new_fact.query_part(y))
        (positives if entry.source_member(y) else negatives).append(pair)
    sub = verify_witness(induced, new_witness, positives, negatives)
    rep.extend(sub)

    def ladder_gen(size):
        rng = random.Random(f"{config.seed}:transfer-ladder:{size}")
        out = []
        for _ in range(2):
            x = bds.random_sparse_instance(max(4, size), rng)
            out.append(new_fact.data_part(_to_qbds(x)))
        return out

    ladder = digest_size_ladder(new_witness, ladder_gen, config.ladder,
                                slope_slack=config.slope_slack)
    rep.add("ladder:transferred", ladder.passed,
            measured=round(ladder.slope, 4), bound=ladder.exponent_cap,
            timings={"rungs": [r.to_dict() for r in ladder.rungs]})
    return rep


def run_hardness_check(cat, config: SuiteConfig) -> Report:
    """Wrap the join-dropping map into a reduction onto visit-order search."""
    rep = Report("hardness-pack")
    entry_bds = cat.factored["bds-all-data"]
    qbds_member = cat.factored["qbds-absorb"].base
    absorb = cat.factored["qbds-absorb"].fact

    cap = config.exhaustive_caps.get("bds", 3)
    sampler = catalog_mod._bds_samplers(config.edge_prob)
    ys = [_to_qbds(x) for x in sampler(config.seed, cap, config.random_budget)]
    packed = hardness_pack(
        qbds_member, absorb.data_part, entry_bds.fact, entry_bds.base,
        samples=ys[: min(len(ys), 500)])
    rep.add("target-redundancy", packed.target_fact.redundancy ==
            entry_bds.fact.redundancy + 1,
            measured=packed.target_fact.redundancy,
            bound=entry_bds.fact.redundancy + 1)
    pairs = [Pair(y, b"") for y in ys]
    sub = verify_fcr_reduction(packed, qbds_member, entry_bds.base, pairs)
    rep.extend(sub)
    return rep


def run_pullback_check(cat, config: SuiteConfig) -> Report:
    """Pull the circuit verdict witness back along double negation."""
    rep = Report("witness-pullback")
    fentry = cat.f_reductions["cvp-double-negation"]
    wentry = cat.witnesses["cvp-verdict-bit"]
    pulled = pullback_witness_f(fentry.reduction, wentry.witness, growth_pad=40)
    pos, neg = wentry.sample_pairs(config.seed + 1, config.witness_samples)
    sub = verify_witness(fentry.source, pulled, pos, neg)
    rep.extend(sub)
    return rep


def run_short_query_checks(cat, config: SuiteConfig) -> Report:
    rep = Report("short-query")
    wentry = cat.witnesses["wordstats-count-digest"]
    pos, _ = wentry.sample_pairs(config.seed + 2, 40)
    rep.extend(check_short_query(cat.pair_languages["wordstats-pairs"], pos))

    rng = random.Random(f"{config.seed}:sq-qbds")
    pairs = []
    for _ in range(40):
        x = bds.random_instance(rng.randrange(2, 24), rng, config.edge_prob)
        if not bds.bds_member(x):
            x = bds.swap_query(x)
        block, tail = bds.split_block_tail(x)
        pairs.append(Pair(block, tail))
    rep.extend(check_short_query(cat.pair_languages["qbds-pairs"], pairs))
    return rep


def run_separation_check(config: SuiteConfig) -> Report:
    rep = Report("separation")
    cap = config.exhaustive_caps.get("separation", 5)
    bound = config.bounds.get("separation", PolylogBound(1.0, 2, 0.0))
    sep = separation_report(
        range(1, config.separation_max_n + 1), bound, enumerate_max=cap)
    rep.add("factorial-beats-2^n-from-4", sep.factorial_beats_power_from_4,
            detail=f"checked n up to {config.separation_max_n} exactly")
    for row in sep.rows:
        if row["realizable"] is not None:
            rep.add(f"realizable-orders:n={row['n']}",
                    row["realizable"] == row["factorial"],
                    measured=row["realizable"], bound=row["factorial"],
                    detail="edgeless family realizes every numbering order")
    rep.add("truncation-collision-found", sep.collision is not None,
            detail="two distinct visit orders share a truncated digest")
    return rep


def run_fit_checks(cat, config: SuiteConfig) -> Report:
    """Preprocessing stays polynomial; post-digest queries stay polylog."""
    rep = Report("runtime-fits")
    wentry = cat.witnesses["wordstats-count-digest"]
    centry = cat.witnesses["cvp-verdict-bit"]

    pre_points = []
    for size in config.ladder:
        corpus = wentry.ladder_gen(size, config.seed)[0]
        pre_points.append(
            (len(corpus), time_call_ns(wentry.witness.preprocess, corpus)))
    fit = fit_runtime(pre_points, "poly-n")
    rep.add("preprocess-poly-degree:wordstats",
            fit.exponent <= config.ptime_max_degree + config.slope_slack
            and fit.residual <= config.fit_residual_max,
            bound=config.ptime_max_degree + config.slope_slack,
            detail="degree and residual of the log-log fit",
            timings={"fit": fit.to_dict()})

    wquery = catalog_mod.wordstats.query_bytes(config.lexicon[0], 1)
    for name, entry, query in (("wordstats", wentry, wquery),
                               ("cvp", centry, b"")):
        post = entry.witness.post_language.membership
        gen = entry.latency_probes or entry.ladder_gen
        sizes, tasks = [], []
        for size in config.ladder:
            instances = gen(size, config.seed)
            calls = [(entry.witness.preprocess(x), query) for x in instances]
            sizes.append(len(instances[0]))
            tasks.append((post, calls * max(1, config.query_reps // len(calls))))
        floors = time_interleaved_ns(tasks)
        cap_k = entry.witness.output_bound.k
        qfit = fit_runtime(list(zip(sizes, floors)), "poly-log-n")
        rep.add(f"query-latency-polylog:{name}",
                qfit.exponent <= cap_k + config.slope_slack,
                bound=cap_k + config.slope_slack,
                detail="post-digest decision latency vs log input size",
                timings={"fit": qfit.to_dict()})
    return rep


# ------------------------------------------------------------- the suite


@dataclass
class SuiteReport:
    verdict: bool
    environment: dict
    reports: list[Report]
    timings: dict

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": "pass" if self.verdict else "fail",
            "environment": self.environment,
            "checks": [r.to_dict() for r in self.reports],
            "timings": self.timings,
        }

    def to_json(self, path=None) -> str:
        return dump_json(self.to_dict(), path)


def run_suite(config: SuiteConfig) -> SuiteReport:
    """Run every registered check with the configured budgets."""
    if len(config.ladder) < 4:
        raise InsufficientData("suite ladder needs at least 4 rungs")
    cat = catalog_mod.build_catalog(config)
    reports: list[Report] = []
    timings: dict[str, int] = {}

    def staged(name, fn, *args):
        t0 = time.perf_counter_ns()
        rep = fn(*args)
        timings[name] = time.perf_counter_ns() - t0
        reports.append(rep)

    staged("short-query", run_short_query_checks, cat, config)
    for fname in ("bds-all-data", "qbds-absorb"):
        staged(f"factorization:{fname}", run_factorization_check, cat, config, fname)
    for wname in ("bds-verdict-bit", "cvp-verdict-bit", "wordstats-count-digest"):
        staged(f"witness:{wname}", run_witness_check, cat, config, wname)
    for rname in ("bds-identity", "qbds-identity", "qbds-to-bds",
                  "cvp-identity", "cvp-double-negation"):
        staged(f"reduction:{rname}", run_reduction_check, cat, config, rname)
    staged("compositions", run_composition_checks, cat, config)
    staged("witness-transfer", run_transfer_check, cat, config)
    staged("hardness-pack", run_hardness_check, cat, config)
    staged("witness-pullback", run_pullback_check, cat, config)
    staged("separation", run_separation_check, config)
    staged("runtime-fits", run_fit_checks, cat, config)

    verdict = all(r.passed for r in reports)
    return SuiteReport(
        verdict=verdict,
        environment={"seed": config.seed, "config": config_echo(config)},
        reports=reports,
        timings=timings,
    )
