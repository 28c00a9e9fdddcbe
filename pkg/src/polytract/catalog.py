"""Named registry wiring the concrete problems into the generic machinery.

Everything the CLI can address by name is built here from a configuration
object: membership oracles, factored languages, preprocessing witnesses,
and reductions. Names describe what each entry does:

  problems      bds, qbds, cvp, wordstats
  factored      bds-all-data, qbds-all-data, qbds-absorb, cvp-all-data
  witnesses     bds-verdict-bit, cvp-verdict-bit, wordstats-count-digest
  reductions    bds-identity, qbds-identity, qbds-to-bds (factored);
                cvp-identity, cvp-double-negation (pair-to-pair)

"all-data" factorizations put the whole instance in the data part with an
empty query. "qbds-absorb" drops the single joining '#' of a data#query
instance instead, which is why its redundancy constant is -1: the two
parts together are one byte shorter than the instance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .encoding import (
    Instance,
    LanguageOfPairs,
    Pair,
    PolylogBound,
    ZERO_BOUND,
    decode_pair,
    encode_pair,
)
from .errors import MalformedInstance, UnknownProblem
from .factorization import CrFactorization, FactoredLanguage, identity_factorization
from .preprocessing import PreprocessingWitness
from .reductions import FcrReduction, FReduction
from .problems import bds, cvp, wordstats

DEFAULT_BOUNDS = {
    "bds-verdict-bit": PolylogBound(0.0, 0, 1.0),
    "cvp-verdict-bit": PolylogBound(0.0, 0, 1.0),
    "wordstats-count-digest": PolylogBound(3.0, 1, 8.0),
    "qbds-query": PolylogBound(0.0, 0, 32.0),
    "wordstats-query": PolylogBound(0.0, 0, 32.0),
    "cvp-query": ZERO_BOUND,
}


def qbds_instance_bytes(g: bds.NumberedGraph, u: int, v: int) -> Instance:
    """Graph block and query joined by '#'; payloads never need escaping."""
    return encode_pair(Pair(bds.graph_to_bytes(g), f"{u} {v}".encode("ascii")))


def qbds_member(y: Instance) -> bool:
    try:
        pair = decode_pair(y)
        g = bds.parse_graph(pair.data)
        fields = pair.query.split()
        if len(fields) != 2:
            return False
        return bds.bds_decide(g, int(fields[0]), int(fields[1]))
    except (MalformedInstance, bds.SameNode, bds.UnknownNode, ValueError):
        return False


def absorb_factorization() -> CrFactorization:
    """Drop the joining '#': data part is graph block + query tail, one byte
    shorter than the instance; restore re-inserts the byte at the parse
    boundary, byte-exactly."""

    def data_part(y: Instance) -> Instance:
        try:
            pair = decode_pair(y)
        except MalformedInstance:
            return y
        return pair.data + pair.query

    def restore(d: Instance, q: Instance) -> Instance:
        try:
            block, tail = bds.split_block_tail(d)
        except MalformedInstance:
            return d
        return block + b"#" + tail

    return CrFactorization(
        name="qbds-absorb",
        data_part=data_part,
        query_part=lambda y: b"",
        restore=restore,
        redundancy=-1,
        query_bound=ZERO_BOUND,
        notes="one delimiter dropped and re-inserted; linear scans only",
    )


def _negated_circuit_bytes(data: Instance) -> Instance:
    """Bytes of the verdict-flipped sibling of an encoded circuit.

    Generated circuits keep the output on the last line, so the flip is
    plain line surgery; anything else takes the parse-and-rebuild route.
    """
    try:
        body, last = data.rstrip(b"\n").rsplit(b"\n", 1)
        idx, kind, ref = last.split()
        if kind == b"output":
            return (body + b"\n" + idx + b" not " + ref + b"\n"
                    + str(int(idx) + 1).encode() + b" output " + idx + b"\n")
    except ValueError:
        pass
    return cvp.circuit_to_bytes(cvp.negate_output(cvp.parse_circuit(data)))


def one_bit_true_language() -> LanguageOfPairs:
    """Accepts exactly the pair <'1', empty>."""
    return LanguageOfPairs(
        name="one-bit-true",
        membership=lambda d, q: d == b"1" and q == b"",
        short_query_bound=ZERO_BOUND,
    )


@dataclass(frozen=True)
class ProblemEntry:
    name: str
    member: Callable[[Instance], bool]
    generate: Callable[[int, random.Random], Instance]
    describe: str


@dataclass(frozen=True)
class WitnessEntry:
    language: LanguageOfPairs
    witness: PreprocessingWitness
    # (seed, count) -> (positives, negatives); labels already oracle-true
    sample_pairs: Callable[[int, int], tuple[list[Pair], list[Pair]]]
    # size -> instances for the digest ladder (data parts)
    ladder_gen: Callable[[int, int], list[Instance]]  # (size, seed)
    # optional (size, seed) -> instances whose digests make a fair latency
    # batch; None means the ladder instances are already fair
    latency_probes: Callable[[int, int], list[Instance]] | None = None


@dataclass(frozen=True)
class FcrEntry:
    reduction: FcrReduction
    source_member: Callable[[Instance], bool]
    target_member: Callable[[Instance], bool]
    # (seed, cap, budget) -> factored pairs to probe
    sample_pairs: Callable[[int, int, int], list[Pair]]


@dataclass(frozen=True)
class FEntry:
    reduction: FReduction
    source: LanguageOfPairs
    target: LanguageOfPairs
    sample_pairs: Callable[[int, int], list[Pair]]


@dataclass
class Catalog:
    problems: dict[str, ProblemEntry] = field(default_factory=dict)
    pair_languages: dict[str, LanguageOfPairs] = field(default_factory=dict)
    factored: dict[str, FactoredLanguage] = field(default_factory=dict)
    witnesses: dict[str, WitnessEntry] = field(default_factory=dict)
    fcr_reductions: dict[str, FcrEntry] = field(default_factory=dict)
    f_reductions: dict[str, FEntry] = field(default_factory=dict)

    def problem(self, name: str) -> ProblemEntry:
        return _lookup(self.problems, name, "problem")

    def generate(self, problem: str, size: int, seed: int) -> Instance:
        rng = random.Random(f"{seed}:{problem}:{size}")
        return self.problem(problem).generate(size, rng)


def _lookup(table: dict, name: str, what: str):
    try:
        return table[name]
    except KeyError:
        known = ", ".join(sorted(table))
        raise UnknownProblem(f"unknown {what} {name!r}; known: {known}") from None


# ---------------------------------------------------------------- builders


def _bds_samplers(edge_prob: float):
    def instances(seed: int, cap: int, budget: int, max_n: int = 30) -> list[Instance]:
        """Exhaustive small instances plus random larger ones, members or not."""
        out = list(bds.enumerate_instances(cap))
        rng = random.Random(f"{seed}:bds-random")
        for _ in range(budget):
            n = rng.randrange(5, max_n + 1)
            out.append(bds.random_instance(n, rng, edge_prob))
        # A few malformed strays keep the oracles honest about totality.
        out.extend([b"", b"not a graph", b"2 1\n1 2\n", b"1 0\n1\n0 0"])
        return out

    return instances


def _build_problems(cat: Catalog, config) -> None:
    edge_prob = config.edge_prob

    def gen_bds(size: int, rng: random.Random) -> Instance:
        n = max(2, size)
        if n <= 512:
            return bds.random_instance(n, rng, edge_prob)
        return bds.random_sparse_instance(n, rng)

    def gen_qbds(size: int, rng: random.Random) -> Instance:
        x = gen_bds(size, rng)
        block, tail = bds.split_block_tail(x)
        return block + b"#" + tail

    def gen_cvp(size: int, rng: random.Random) -> Instance:
        return cvp.circuit_to_bytes(cvp.random_circuit(max(2, size), rng, config.gate_weights))

    def gen_wordstats(size: int, rng: random.Random) -> Instance:
        return wordstats.random_corpus_text(
            max(1, size), rng, config.lexicon, config.preposition_rate
        )

    cat.problems["bds"] = ProblemEntry(
        "bds", bds.bds_member, gen_bds,
        "numbered graph with a visit-order query riding behind the block")
    cat.problems["qbds"] = ProblemEntry(
        "qbds", qbds_member, gen_qbds,
        "the same instances with the query joined by '#'")
    cat.problems["cvp"] = ProblemEntry(
        "cvp", cvp.cvp_member, gen_cvp,
        "boolean circuit accepted iff it evaluates to true")
    cat.problems["wordstats"] = ProblemEntry(
        "wordstats", lambda x: False, gen_wordstats,
        "corpus text; meaningful only as the data part of count queries")


def _build_factored(cat: Catalog, config) -> None:
    bounds = config.bounds
    cat.factored["bds-all-data"] = FactoredLanguage(
        "bds-all-data", bds.bds_member, identity_factorization("bds-all-data"))
    cat.factored["qbds-all-data"] = FactoredLanguage(
        "qbds-all-data", qbds_member, identity_factorization("qbds-all-data"))
    cat.factored["qbds-absorb"] = FactoredLanguage(
        "qbds-absorb", qbds_member, absorb_factorization())
    cat.factored["cvp-all-data"] = FactoredLanguage(
        "cvp-all-data", cvp.cvp_member, identity_factorization("cvp-all-data"))

    lexicon = config.lexicon
    cat.pair_languages["qbds-pairs"] = LanguageOfPairs(
        name="qbds-pairs",
        membership=_qbds_pair_member,
        short_query_bound=bounds["qbds-query"],
    )
    cat.pair_languages["cvp-pairs"] = LanguageOfPairs(
        name="cvp-pairs",
        membership=lambda d, q: q == b"" and cvp.cvp_member(d),
        short_query_bound=bounds["cvp-query"],
    )
    cat.pair_languages["wordstats-pairs"] = LanguageOfPairs(
        name="wordstats-pairs",
        membership=lambda d, q: wordstats.pair_member(d, q, lexicon),
        short_query_bound=bounds["wordstats-query"],
    )
    for name in ("bds-all-data", "qbds-absorb", "cvp-all-data"):
        fl = cat.factored[name]
        cat.pair_languages[f"pairs({name})"] = fl.induced_pairs_language()


def _qbds_pair_member(d: Instance, q: Instance) -> bool:
    try:
        g = bds.parse_graph(d)
        fields = q.split()
        if len(fields) != 2:
            return False
        return bds.bds_decide(g, int(fields[0]), int(fields[1]))
    except (MalformedInstance, bds.SameNode, bds.UnknownNode, ValueError):
        return False


def _verdict_bit(member: Callable[[Instance], bool]) -> Callable[[Instance], Instance]:
    return lambda x: b"1" if member(x) else b"0"


def _build_witnesses(cat: Catalog, config) -> None:
    bounds = config.bounds
    injected = set(getattr(config, "inject", ()))

    def maybe_inject(name: str, pre):
        if f"identity-preprocessing:{name}" in injected:
            return lambda x: x
        return pre

    # Verdict-bit witness for visit-order instances.
    bds_fl = cat.factored["bds-all-data"]
    bds_witness = PreprocessingWitness(
        name="bds-verdict-bit",
        preprocess=maybe_inject("bds-verdict-bit", _verdict_bit(bds.bds_member)),
        post_language=one_bit_true_language(),
        output_bound=bounds["bds-verdict-bit"],
    )

    def bds_samples(seed: int, count: int):
        rng = random.Random(f"{seed}:bds-witness")
        pos, neg = [], []
        while len(pos) < count or len(neg) < count:
            x = bds.random_instance(rng.randrange(2, 16), rng, config.edge_prob)
            if bds.bds_member(x):
                if len(pos) < count:
                    pos.append(Pair(x, b""))
                elif len(neg) < count:
                    neg.append(Pair(bds.swap_query(x), b""))
            elif len(neg) < count:
                neg.append(Pair(x, b""))
        return pos, neg

    def bds_ladder(size: int, seed: int) -> list[Instance]:
        rng = random.Random(f"{seed}:bds-ladder:{size}")
        n = max(4, size)
        return [bds.random_sparse_instance(n, rng) for _ in range(2)]

    cat.witnesses["bds-verdict-bit"] = WitnessEntry(
        language=bds_fl.induced_pairs_language(),
        witness=bds_witness,
        sample_pairs=bds_samples,
        ladder_gen=bds_ladder,
    )

    # Verdict-bit witness for circuit evaluation.
    cvp_witness = PreprocessingWitness(
        name="cvp-verdict-bit",
        preprocess=maybe_inject("cvp-verdict-bit", _verdict_bit(cvp.cvp_member)),
        post_language=one_bit_true_language(),
        output_bound=bounds["cvp-verdict-bit"],
    )

    def cvp_samples(seed: int, count: int):
        rng = random.Random(f"{seed}:cvp-witness")
        pos, neg = [], []
        while len(pos) < count or len(neg) < count:
            c = cvp.random_circuit(rng.randrange(2, 14), rng, config.gate_weights)
            x = cvp.circuit_to_bytes(c)
            if cvp.cvp_eval(c):
                if len(pos) < count:
                    pos.append(Pair(x, b""))
            elif len(neg) < count:
                neg.append(Pair(x, b""))
        return pos, neg

    def cvp_ladder(size: int, seed: int) -> list[Instance]:
        rng = random.Random(f"{seed}:cvp-ladder:{size}")
        n = max(4, size)
        return [
            cvp.circuit_to_bytes(cvp.random_circuit(n, rng, config.gate_weights))
            for _ in range(2)
        ]

    def cvp_latency_probes(size: int, seed: int) -> list[Instance]:
        # The digest here is a single verdict byte, and the post check is
        # cheaper on one byte value than the other. Pairing every circuit
        # with its negated sibling keeps the verdict mix at exactly half
        # and half on every rung, so branch cost cannot pose as growth.
        rng = random.Random(f"{seed}:cvp-latency:{size}")
        data = cvp.circuit_to_bytes(
            cvp.random_circuit(max(4, size), rng, config.gate_weights))
        return [data, _negated_circuit_bytes(data)]

    cat.witnesses["cvp-verdict-bit"] = WitnessEntry(
        language=cat.pair_languages["cvp-pairs"],
        witness=cvp_witness,
        sample_pairs=cvp_samples,
        ladder_gen=cvp_ladder,
        latency_probes=cvp_latency_probes,
    )

    # Count-vector digest for word statistics.
    lexicon = config.lexicon
    m = len(lexicon)

    def count_digest(d: Instance) -> Instance:
        try:
            corpus = wordstats.corpus_from_text(d, lexicon)
        except MalformedInstance:
            corpus = wordstats.Corpus((), lexicon)
        counts = wordstats.preposition_digest(corpus)
        return wordstats.digest_instance(counts, len(corpus.words))

    def digest_pair_member(d: Instance, q: Instance) -> bool:
        try:
            counts = wordstats.parse_digest_instance(d, m)
            word, k = wordstats.parse_query(q)
        except MalformedInstance:
            return False
        if word not in lexicon:
            return False
        return counts[lexicon.index(word)] >= k

    ws_witness = PreprocessingWitness(
        name="wordstats-count-digest",
        preprocess=maybe_inject("wordstats-count-digest", count_digest),
        post_language=LanguageOfPairs(
            name="counts-at-least",
            membership=digest_pair_member,
            short_query_bound=bounds["wordstats-query"],
        ),
        output_bound=bounds["wordstats-count-digest"],
    )

    def ws_samples(seed: int, count: int):
        rng = random.Random(f"{seed}:wordstats-witness")
        pos, neg = [], []
        per_corpus = 8
        while len(pos) < count or len(neg) < count:
            text = wordstats.random_corpus_text(
                rng.randrange(20, 2000), rng, lexicon, config.preposition_rate)
            corpus = wordstats.corpus_from_text(text, lexicon)
            counts = wordstats.preposition_digest(corpus)
            for _ in range(per_corpus):
                word = rng.choice(lexicon)
                have = counts[lexicon.index(word)]
                if rng.random() < 0.5 and len(pos) < count:
                    pos.append(Pair(text, wordstats.query_bytes(word, rng.randint(0, have))))
                elif len(neg) < count:
                    if rng.random() < 0.2:
                        neg.append(Pair(text, wordstats.query_bytes("zzz", 1)))
                    else:
                        neg.append(Pair(
                            text,
                            wordstats.query_bytes(word, have + 1 + rng.randrange(3))))
        return pos, neg

    def ws_ladder(size: int, seed: int) -> list[Instance]:
        rng = random.Random(f"{seed}:wordstats-ladder:{size}")
        return [
            wordstats.random_corpus_text(max(1, size), rng, lexicon,
                                         config.preposition_rate)
            for _ in range(2)
        ]

    cat.witnesses["wordstats-count-digest"] = WitnessEntry(
        language=cat.pair_languages["wordstats-pairs"],
        witness=ws_witness,
        sample_pairs=ws_samples,
        ladder_gen=ws_ladder,
    )


def _build_reductions(cat: Catalog, config) -> None:
    bds_fl = cat.factored["bds-all-data"]
    absorb_fl = cat.factored["qbds-absorb"]
    instances = _bds_samplers(config.edge_prob)

    def factored_pairs(fl: FactoredLanguage, to_instance):
        def sample(seed: int, cap: int, budget: int) -> list[Pair]:
            return [fl.pair_of(to_instance(x)) for x in instances(seed, cap, budget)]
        return sample

    def as_qbds(x: Instance) -> Instance:
        try:
            block, tail = bds.split_block_tail(x)
        except MalformedInstance:
            return x
        return block + b"#" + tail

    def identity_map(z: Instance) -> Instance:
        return z

    cat.fcr_reductions["bds-identity"] = FcrEntry(
        reduction=FcrReduction(
            name="bds-identity",
            source_fact=bds_fl.fact,
            target_fact=bds_fl.fact,
            map_data=identity_map,
            map_query=identity_map,
        ),
        source_member=bds_fl.base,
        target_member=bds_fl.base,
        sample_pairs=factored_pairs(bds_fl, lambda x: x),
    )
    cat.fcr_reductions["qbds-identity"] = FcrEntry(
        reduction=FcrReduction(
            name="qbds-identity",
            source_fact=absorb_fl.fact,
            target_fact=absorb_fl.fact,
            map_data=identity_map,
            map_query=identity_map,
        ),
        source_member=absorb_fl.base,
        target_member=absorb_fl.base,
        sample_pairs=factored_pairs(absorb_fl, as_qbds),
    )
    # Re-splitting reduction: the absorbed data part of a joined instance
    # is literally a visit-order instance, so both maps are identities.
    cat.fcr_reductions["qbds-to-bds"] = FcrEntry(
        reduction=FcrReduction(
            name="qbds-to-bds",
            source_fact=absorb_fl.fact,
            target_fact=bds_fl.fact,
            map_data=identity_map,
            map_query=identity_map,
        ),
        source_member=absorb_fl.base,
        target_member=bds_fl.base,
        sample_pairs=factored_pairs(absorb_fl, as_qbds),
    )

    # Pair-to-pair reductions over circuit evaluation.
    cvp_lang = cat.pair_languages["cvp-pairs"]

    def doubled(d: Instance) -> Instance:
        try:
            return cvp.circuit_to_bytes(cvp.double_negate_output(cvp.parse_circuit(d)))
        except MalformedInstance:
            return d

    def cvp_pairs(seed: int, budget: int) -> list[Pair]:
        rng = random.Random(f"{seed}:cvp-pairs")
        out = [Pair(cvp.circuit_to_bytes(c), b"") for c in cvp.enumerate_circuits(1)]
        for _ in range(budget):
            c = cvp.random_circuit(rng.randrange(2, 14), rng, config.gate_weights)
            out.append(Pair(cvp.circuit_to_bytes(c), b""))
        out.append(Pair(b"junk", b""))
        out.append(Pair(b"", b"stray-query"))
        return out

    cat.f_reductions["cvp-identity"] = FEntry(
        reduction=FReduction("cvp-identity", identity_map, identity_map),
        source=cvp_lang, target=cvp_lang,
        sample_pairs=cvp_pairs,
    )
    cat.f_reductions["cvp-double-negation"] = FEntry(
        reduction=FReduction("cvp-double-negation", doubled, identity_map),
        source=cvp_lang, target=cvp_lang,
        sample_pairs=cvp_pairs,
    )


def build_catalog(config) -> Catalog:
    cat = Catalog()
    _build_problems(cat, config)
    _build_factored(cat, config)
    _build_witnesses(cat, config)
    _build_reductions(cat, config)
    return cat
