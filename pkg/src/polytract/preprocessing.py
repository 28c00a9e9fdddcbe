"""Preprocessing witnesses and the checks that keep them honest.

A witness for a language of pairs S is a preprocessing map together with
a post language S' and an output size bound, claiming

    <D, Q> in S  <=>  <preprocess(D), Q> in S'      (both directions)
    |preprocess(D)| <= output_bound(|D|)            (for every tested D)

verify_witness probes the equivalence two-sidedly; digest_size_ladder
measures digest growth along a geometric size ladder and regresses
log(digest) against log(log(input)) so a polylog claim with exponent k
shows up as a slope of at most k (plus slack).
"""
from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .encoding import Instance, LanguageOfPairs, Pair, PolylogBound
from .errors import GeneratorExhausted, InsufficientData, MislabeledSample
from .factorization import FactoredLanguage
from .report import Report


@dataclass(frozen=True)
class PreprocessingWitness:
    name: str
    preprocess: Callable[[Instance], Instance]
    post_language: LanguageOfPairs
    output_bound: PolylogBound


def verify_witness(
    language: LanguageOfPairs,
    witness: PreprocessingWitness,
    positives: Iterable[Pair],
    negatives: Iterable[Pair],
) -> Report:
    """Two-sided equivalence and size check on labeled samples.

    Raises MislabeledSample when the reference oracle disagrees with a
    label; that is a broken test harness, not a failed verification.
    """
    rep = Report(f"witness:{witness.name}")
    failures: list[tuple[int, str, str]] = []
    counts = {"positive": 0, "negative": 0}
    size_excess = None

    def run_side(pairs, expected, label):
        nonlocal size_excess
        for idx, pair in enumerate(pairs):
            if language.member(pair) != expected:
                raise MislabeledSample(
                    f"{label} sample {idx} mislabeled for {language.name}"
                )
            counts[label] += 1
            digest = witness.preprocess(pair.data)
            excess = len(digest) - witness.output_bound(len(pair.data))
            if size_excess is None or excess > size_excess:
                size_excess = excess
            if excess > 0:
                failures.append(
                    (idx, f"{label}-output-bound",
                     f"|digest|={len(digest)} exceeds bound by {excess:.2f}")
                )
                continue
            got = witness.post_language.membership(digest, pair.query)
            if got != expected:
                failures.append(
                    (idx, f"{label}-iff",
                     f"mapped membership {got}, want {expected}")
                )

    run_side(positives, True, "positive")
    run_side(negatives, False, "negative")
    rep.add("positive-iff",
            not any("positive-iff" in f[1] for f in failures),
            measured=counts["positive"], detail="members carried over")
    rep.add("negative-iff",
            not any("negative-iff" in f[1] for f in failures),
            measured=counts["negative"], detail="non-members stay out")
    rep.add("output-bound",
            not any("output-bound" in f[1] for f in failures),
            measured=None if size_excess is None else round(size_excess, 3),
            bound=witness.output_bound.describe(),
            detail="max |digest| - bound(|data|) over both sides")
    rep.itemize("sample", failures)
    return rep


@dataclass(frozen=True)
class LadderRung:
    input_size: int
    max_digest_size: int
    wall_time_ns: int

    def to_dict(self) -> dict:
        return {
            "input_size": self.input_size,
            "max_digest_size": self.max_digest_size,
            "wall_time_ns": self.wall_time_ns,
        }


@dataclass(frozen=True)
class LadderReport:
    witness_name: str
    rungs: tuple[LadderRung, ...]
    slope: float
    exponent_cap: float
    bound_ok: bool

    @property
    def passed(self) -> bool:
        return self.bound_ok and self.slope <= self.exponent_cap

    def to_dict(self) -> dict:
        return {
            "witness": self.witness_name,
            "rungs": [r.to_dict() for r in self.rungs],
            "slope": round(self.slope, 6),
            "exponent_cap": self.exponent_cap,
            "bound_ok": self.bound_ok,
            "verdict": "pass" if self.passed else "fail",
        }


def digest_size_ladder(
    witness: PreprocessingWitness,
    gen: Callable[[int], Iterable[Instance]],
    sizes: Sequence[int],
    slope_slack: float = 0.5,
) -> LadderReport:
    """Measure digest sizes along a geometric ladder of input sizes.

    Passes iff every digest obeys the declared bound pointwise and the
    fitted slope of log(max digest) vs log(log(max input)) stays within
    output_bound.k + slope_slack.
    """
    if len(sizes) < 4 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InsufficientData(
            "need at least 4 strictly increasing ladder rungs"
        )
    rungs = []
    bound_ok = True
    xs, ys = [], []
    for size in sizes:
        instances = list(gen(size))
        if not instances:
            raise GeneratorExhausted(f"no instances generated at size {size}")
        t0 = time.perf_counter_ns()
        digests = [witness.preprocess(x) for x in instances]
        elapsed = time.perf_counter_ns() - t0
        max_input = max(len(x) for x in instances)
        max_digest = max(len(d) for d in digests)
        for x, d in zip(instances, digests):
            if len(d) > witness.output_bound(len(x)):
                bound_ok = False
        rungs.append(LadderRung(max_input, max_digest, elapsed))
        xs.append(math.log(math.log2(max(max_input, 4))))
        ys.append(math.log(max(max_digest, 1)))
    if len(set(ys)) == 1:
        slope = 0.0  # constant digests; regression would be degenerate
    else:
        slope = statistics.linear_regression(xs, ys).slope
    return LadderReport(
        witness_name=witness.name,
        rungs=tuple(rungs),
        slope=slope,
        exponent_cap=witness.output_bound.k + slope_slack,
        bound_ok=bound_ok,
    )


def made_tractable_witness(
    fl: FactoredLanguage,
    witness: PreprocessingWitness,
    members: Sequence[Instance],
    nonmembers: Sequence[Instance],
) -> Report:
    """Verify a witness against the pair language induced by a factorization.

    Samples are whole instances; each is split by the factorization and
    the resulting pair labeled through the restore-then-decide oracle.
    """
    induced = fl.induced_pairs_language()
    positives = [fl.pair_of(x) for x in members]
    negatives = [fl.pair_of(x) for x in nonmembers]
    rep = verify_witness(induced, witness, positives, negatives)
    rep.name = f"made-tractable:{fl.name}"
    return rep
