import pytest

from polytract.encoding import LanguageOfPairs, Pair, PolylogBound, split_packed
from polytract.errors import FactorizationMismatch, InvalidManyOneMap
from polytract.factorization import (
    CrFactorization,
    FactoredLanguage,
    identity_factorization,
)
from polytract.preprocessing import PreprocessingWitness, verify_witness
from polytract.reductions import (
    FcrReduction,
    FReduction,
    compose_f,
    compose_fcr,
    hardness_pack,
    pullback_witness_f,
    transfer_witness,
    verify_f_reduction,
    verify_fcr_reduction,
)

# Source problem: strings of 'a' of even length. Target problem: strings
# of 'b' of even length. The letter swap is a correct reduction on inputs
# that mix 'a' with non-'b' bytes only; sample domains below stay there.


def even_a(x: bytes) -> bool:
    return len(x) % 2 == 0 and all(c == 0x61 for c in x)


def even_b(x: bytes) -> bool:
    return len(x) % 2 == 0 and all(c == 0x62 for c in x)


def a_to_b(x: bytes) -> bytes:
    return x.replace(b"a", b"b")


def id_fact(name):
    return identity_factorization(name)


SWAP = FcrReduction(
    name="a-to-b",
    source_fact=id_fact("src"),
    target_fact=id_fact("dst"),
    map_data=a_to_b,
    map_query=lambda q: q,
)

PAIRS = [Pair(b"", b""), Pair(b"aa", b""), Pair(b"aaa", b""), Pair(b"xy", b"")]


def test_verify_fcr_reduction_passes_and_fails():
    assert verify_fcr_reduction(SWAP, even_a, even_b, PAIRS).passed
    broken = FcrReduction(
        name="keeps-a",
        source_fact=SWAP.source_fact,
        target_fact=SWAP.target_fact,
        map_data=lambda x: x,
        map_query=lambda q: q,
    )
    rep = verify_fcr_reduction(broken, even_a, even_b, PAIRS)
    assert not rep.passed


def test_compose_fcr_identity_pair():
    ident = FcrReduction(
        name="id",
        source_fact=id_fact("f"),
        target_fact=id_fact("f"),
        map_data=lambda x: x,
        map_query=lambda q: q,
    )
    composed = compose_fcr(
        ident, ident, (ident.target_fact, ident.source_fact),
        even_a, probes=[b"aa", b"aaaa"])
    assert composed.source_fact.redundancy == 1
    assert composed.target_fact.redundancy == 1
    pairs = [Pair(composed.source_fact.data_part(x), b"")
             for x in (b"", b"aa", b"aaa", b"aaaa")]
    assert verify_fcr_reduction(composed, even_a, even_a, pairs).passed
    assert composed.map_query(b"anything") == b"anything"


def test_compose_fcr_requires_matching_middles():
    other = id_fact("different")
    with pytest.raises(FactorizationMismatch):
        compose_fcr(SWAP, SWAP, (other, SWAP.source_fact), even_b)
    with pytest.raises(FactorizationMismatch):
        compose_fcr(SWAP, SWAP, (SWAP.target_fact, other), even_b)


def test_compose_fcr_probe_detects_broken_middle():
    bad_mid = CrFactorization(
        name="lossy",
        data_part=lambda x: x[: len(x) // 2],
        query_part=lambda x: b"",
        restore=lambda d, q: d,
        redundancy=0,
        query_bound=PolylogBound(0.0, 0, 0.0),
    )
    second = FcrReduction(
        name="from-lossy",
        source_fact=bad_mid,
        target_fact=id_fact("dst2"),
        map_data=lambda x: x,
        map_query=lambda q: q,
    )
    first = FcrReduction(
        name="to-lossy",
        source_fact=id_fact("src2"),
        target_fact=bad_mid,
        map_data=lambda x: x,
        map_query=lambda q: q,
    )
    with pytest.raises(FactorizationMismatch):
        compose_fcr(first, second, (bad_mid, bad_mid), even_a, probes=[b"aaaa"])


def test_transfer_witness_shape_and_bound():
    target_witness = PreprocessingWitness(
        name="parity-bit",
        preprocess=lambda d: b"1" if even_b(d) else b"0",
        post_language=LanguageOfPairs(
            name="bit",
            membership=lambda d, q: d == b"1" and q == b"",
            short_query_bound=PolylogBound(0.0, 0, 0.0),
        ),
        output_bound=PolylogBound(0.0, 0, 1.0),
    )
    new_fact, new_witness = transfer_witness(SWAP, target_witness, SWAP.target_fact)
    assert new_fact.redundancy == SWAP.source_fact.redundancy + 1
    # bound template: a' = (0+0)*2^0 = 0, k' = 0, b' = 1 + 0 + 1 = 2
    assert new_witness.output_bound == PolylogBound(0.0, 0, 2.0)

    induced = LanguageOfPairs(
        name="packed-even-a",
        membership=lambda d, q: even_a(new_fact.restore(d, q)),
        short_query_bound=new_fact.query_bound,
    )
    positives = [Pair(new_fact.data_part(x), b"") for x in (b"", b"aa", b"aaaa")]
    negatives = [Pair(new_fact.data_part(x), b"") for x in (b"a", b"xy", b"aaa")]
    assert verify_witness(induced, new_witness, positives, negatives).passed


def test_hardness_pack_builds_valid_reduction():
    # Membership-preserving map into the target problem, then packing.
    packed = hardness_pack(
        even_a, a_to_b, id_fact("search"), even_b,
        samples=[b"", b"a", b"aa", b"xy"])
    assert packed.target_fact.redundancy == 1
    pairs = [Pair(x, b"") for x in (b"", b"a", b"aa", b"aaa", b"xy")]
    assert verify_fcr_reduction(packed, even_a, even_b, pairs).passed
    assert split_packed(packed.map_data(b"aa")) == (b"bb", b"")


def test_hardness_pack_rejects_bad_map():
    with pytest.raises(InvalidManyOneMap):
        hardness_pack(even_a, lambda x: x + b"b", id_fact("search"), even_b,
                      samples=[b"aa"])


# Direct pair-language reductions.

SRC_LANG = LanguageOfPairs(
    name="has-byte",
    membership=lambda d, q: len(q) == 1 and q in d,
    short_query_bound=PolylogBound(0.0, 0, 1.0),
)
DST_LANG = LanguageOfPairs(
    name="has-upper-byte",
    membership=lambda d, q: len(q) == 1 and q.upper() in d,
    short_query_bound=PolylogBound(0.0, 0, 1.0),
)

UPPER = FReduction(
    name="uppercase",
    map_data=lambda d: d.upper(),
    map_query=lambda q: q,
)

F_PAIRS = [Pair(b"abc", b"b"), Pair(b"abc", b"z"), Pair(b"", b"a"), Pair(b"q", b"")]


def test_verify_f_reduction():
    assert verify_f_reduction(UPPER, SRC_LANG, DST_LANG, F_PAIRS).passed


def test_compose_f_is_plain_composition():
    ident = FReduction("id", lambda d: d, lambda q: q)
    composed = compose_f(UPPER, ident)
    assert verify_f_reduction(composed, SRC_LANG, DST_LANG, F_PAIRS).passed
    assert composed.map_data(b"ab") == b"AB"
    assert composed.map_query(b"x") == b"x"


def test_pullback_witness_f():
    target_witness = PreprocessingWitness(
        name="upper-byte-set",
        preprocess=lambda d: bytes(sorted(set(d))),
        post_language=LanguageOfPairs(
            name="post",
            membership=lambda d, q: len(q) == 1 and q.upper() in d,
            short_query_bound=PolylogBound(0.0, 0, 1.0),
        ),
        output_bound=PolylogBound(0.0, 0, 256.0),
    )
    pulled = pullback_witness_f(UPPER, target_witness, growth_pad=0)
    pos = [Pair(b"abc", b"b")]
    neg = [Pair(b"abc", b"z"), Pair(b"", b"a")]
    assert verify_witness(SRC_LANG, pulled, pos, neg).passed
