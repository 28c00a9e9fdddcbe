import pytest

from polytract.encoding import LanguageOfPairs, Pair, PolylogBound, ZERO_BOUND
from polytract.errors import (
    GeneratorExhausted,
    InsufficientData,
    MislabeledSample,
)
from polytract.preprocessing import (
    PreprocessingWitness,
    digest_size_ladder,
    verify_witness,
)

# Toy language: <D, Q> is in iff Q appears in D as a substring of length 1.
TOY = LanguageOfPairs(
    name="byte-present",
    membership=lambda d, q: len(q) == 1 and q in d,
    short_query_bound=PolylogBound(0.0, 0, 1.0),
)


def byte_set_digest(d: bytes) -> bytes:
    return bytes(sorted(set(d)))


GOOD_WITNESS = PreprocessingWitness(
    name="byte-set",
    preprocess=byte_set_digest,
    post_language=LanguageOfPairs(
        name="byte-present-post",
        membership=lambda d, q: len(q) == 1 and q in d,
        short_query_bound=PolylogBound(0.0, 0, 1.0),
    ),
    output_bound=PolylogBound(0.0, 0, 256.0),
)


def test_verify_witness_passes_good_witness():
    pos = [Pair(b"abcabc", b"a"), Pair(b"xyz", b"z")]
    neg = [Pair(b"abc", b"q"), Pair(b"", b"a"), Pair(b"abc", b"ab")]
    rep = verify_witness(TOY, GOOD_WITNESS, pos, neg)
    assert rep.passed


def test_verify_witness_raises_on_mislabeled_samples():
    with pytest.raises(MislabeledSample):
        verify_witness(TOY, GOOD_WITNESS, [Pair(b"abc", b"q")], [])
    with pytest.raises(MislabeledSample):
        verify_witness(TOY, GOOD_WITNESS, [], [Pair(b"abc", b"a")])


def test_verify_witness_flags_wrong_mapping():
    broken = PreprocessingWitness(
        name="drops-everything",
        preprocess=lambda d: b"",
        post_language=GOOD_WITNESS.post_language,
        output_bound=GOOD_WITNESS.output_bound,
    )
    rep = verify_witness(TOY, broken, [Pair(b"abc", b"a")], [])
    assert not rep.passed
    assert any(c.name == "positive-iff" and not c.passed for c in rep.checks)


def test_verify_witness_flags_oversized_digest():
    bloated = PreprocessingWitness(
        name="identity",
        preprocess=lambda d: d,
        post_language=GOOD_WITNESS.post_language,
        output_bound=PolylogBound(0.0, 0, 4.0),
    )
    rep = verify_witness(TOY, bloated, [Pair(b"abcde", b"a")], [])
    assert not rep.passed
    assert any(c.name == "output-bound" and not c.passed for c in rep.checks)


def _gen(size):
    # two inputs per rung, sizes exactly as requested
    return [bytes((i + j) % 7 + 97 for i in range(size)) for j in range(2)]


def test_ladder_constant_digest_has_zero_slope():
    rep = digest_size_ladder(GOOD_WITNESS, _gen, (64, 256, 1024, 4096))
    assert rep.slope == 0.0
    assert rep.passed
    assert [r.input_size for r in rep.rungs] == [64, 256, 1024, 4096]


def test_ladder_linear_digest_fails():
    identity = PreprocessingWitness(
        name="identity",
        preprocess=lambda d: d,
        post_language=GOOD_WITNESS.post_language,
        output_bound=PolylogBound(1.0, 1, 8.0),
    )
    rep = digest_size_ladder(identity, _gen, (64, 256, 1024, 4096))
    assert not rep.passed
    assert rep.slope > rep.exponent_cap
    assert not rep.bound_ok


def test_ladder_rejects_thin_or_unsorted_sizes():
    with pytest.raises(InsufficientData):
        digest_size_ladder(GOOD_WITNESS, _gen, (64, 256, 1024))
    with pytest.raises(InsufficientData):
        digest_size_ladder(GOOD_WITNESS, _gen, (64, 256, 256, 1024))


def test_ladder_empty_generator():
    with pytest.raises(GeneratorExhausted):
        digest_size_ladder(GOOD_WITNESS, lambda size: [], (8, 16, 32, 64))
