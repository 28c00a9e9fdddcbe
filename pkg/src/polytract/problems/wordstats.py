"""Occurrence counting over a fixed word lexicon, with bit-packed digests.

A corpus is plain UTF-8 text; words are its whitespace-separated tokens,
lowercase-normalized. The digest of a corpus is the vector of occurrence
counts for the m lexicon words. Each count is at most the token count n,
so a fixed width of ceil(log2(n+1)) bits per count packs the whole vector
into exactly m * ceil(log2(n+1)) bits. The self-contained instance form
prepends one byte holding that width so a decider needs nothing else.

A query 'p k' asks whether word p occurs at least k times; answering it
from the digest touches only the m unpacked counts.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from ..encoding import Instance
from ..errors import MalformedInstance, UnknownPreposition

DEFAULT_LEXICON = (
    "about", "against", "among", "at", "between", "by", "during", "for",
    "from", "in", "into", "of", "on", "onto", "over", "through", "to",
    "under", "upon", "with",
)

# Filler vocabulary for synthetic corpora; deliberately disjoint from the
# default lexicon.
FILLER_WORDS = (
    "cat", "dog", "house", "dark", "light", "runs", "walks", "sleeps",
    "river", "stone", "tree", "bird", "cloud", "storm", "quiet", "loud",
    "old", "new", "small", "large", "red", "blue", "green", "grey",
    "city", "field", "road", "door", "window", "roof", "floor", "wall",
    "hand", "eye", "voice", "step", "night", "day", "rain", "snow",
)


@dataclass(frozen=True)
class Corpus:
    words: tuple[str, ...]
    lexicon: tuple[str, ...]


def corpus_from_text(text: Instance, lexicon=DEFAULT_LEXICON) -> Corpus:
    try:
        decoded = text.decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedInstance("corpus is not valid UTF-8") from None
    return Corpus(tuple(w.lower() for w in decoded.split()), tuple(lexicon))


def corpus_to_bytes(corpus: Corpus) -> Instance:
    return " ".join(corpus.words).encode("utf-8")


def preposition_digest(corpus: Corpus) -> tuple[int, ...]:
    """Occurrence count of every lexicon word, in lexicon order."""
    counts = Counter(corpus.words)
    return tuple(counts.get(word, 0) for word in corpus.lexicon)


def preposition_decide(counts, lexicon, word: str, k: int) -> bool:
    """Does `word` occur at least k times, judging only by the counts?"""
    try:
        idx = lexicon.index(word)
    except ValueError:
        raise UnknownPreposition(f"{word!r} is not in the lexicon") from None
    return counts[idx] >= k


def count_width(n: int) -> int:
    """Bits needed for one count in a corpus of n tokens: ceil(log2(n+1))."""
    return n.bit_length()


def pack_counts(counts, n: int) -> tuple[bytes, int]:
    """Fixed-width packing; returns (payload, exact bit length m*width)."""
    w = count_width(n)
    total_bits = w * len(counts)
    acc = 0
    for c in counts:
        if not (0 <= c <= n):
            raise ValueError(f"count {c} outside [0, {n}]")
        acc = (acc << w) | c
    payload = acc.to_bytes((total_bits + 7) // 8, "big") if total_bits else b""
    return payload, total_bits


def unpack_counts(payload: bytes, n: int, m: int) -> tuple[int, ...]:
    w = count_width(n)
    total_bits = w * m
    if len(payload) != (total_bits + 7) // 8:
        raise MalformedInstance("packed digest has the wrong length")
    if total_bits == 0:
        return (0,) * m
    acc = int.from_bytes(payload, "big")
    if acc >> total_bits:
        raise MalformedInstance("packed digest has nonzero padding bits")
    mask = (1 << w) - 1
    out = []
    for i in range(m):
        shift = (m - 1 - i) * w
        out.append(acc >> shift & mask)
    return tuple(out)


def digest_instance(counts, n: int) -> Instance:
    """Self-contained digest: one width byte, then the packed counts."""
    w = count_width(n)
    if w > 255:
        raise ValueError("corpus too large for a one-byte width header")
    payload, _ = pack_counts(counts, n)
    return bytes([w]) + payload


def parse_digest_instance(data: Instance, m: int) -> tuple[int, ...]:
    if not data:
        raise MalformedInstance("empty digest")
    w = data[0]
    payload = data[1:]
    total_bits = w * m
    if len(payload) != (total_bits + 7) // 8:
        raise MalformedInstance("digest payload has the wrong length")
    if total_bits == 0:
        return (0,) * m
    acc = int.from_bytes(payload, "big")
    if acc >> total_bits:
        raise MalformedInstance("digest payload has nonzero padding bits")
    mask = (1 << w) - 1
    return tuple(acc >> (m - 1 - i) * w & mask for i in range(m))


def query_bytes(word: str, k: int) -> Instance:
    return f"{word} {k}".encode("utf-8")


def parse_query(q: Instance) -> tuple[str, int]:
    parts = q.decode("utf-8").split()
    if len(parts) != 2:
        raise MalformedInstance("query must be '<word> <count>'")
    try:
        k = int(parts[1])
    except ValueError:
        raise MalformedInstance("query count must be an integer") from None
    if k < 0:
        raise MalformedInstance("query count must be nonnegative")
    return parts[0], k


def pair_member(data: Instance, query: Instance, lexicon=DEFAULT_LEXICON) -> bool:
    """Reference oracle: scan the corpus and compare against the threshold."""
    try:
        word, k = parse_query(query)
        corpus = corpus_from_text(data, lexicon)
    except MalformedInstance:
        return False
    if word not in lexicon:
        return False
    return sum(1 for w in corpus.words if w == word) >= k


def random_corpus_text(
    n_tokens: int,
    rng: random.Random,
    lexicon=DEFAULT_LEXICON,
    preposition_rate: float = 0.35,
) -> Instance:
    m, f = len(lexicon), len(FILLER_WORDS)
    vocab = list(lexicon) + list(FILLER_WORDS)
    weights = [preposition_rate / m] * m + [(1 - preposition_rate) / f] * f
    words = rng.choices(vocab, weights=weights, k=n_tokens)
    return " ".join(words).encode("utf-8")
