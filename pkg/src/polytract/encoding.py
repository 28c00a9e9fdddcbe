"""Byte-level instance encoding: delimiters, escaping, pairs, size bounds.

An instance is a plain byte string. Two byte values act as structural
delimiters when they appear unescaped: '#' joins a data part to a query
part and '@' joins the two halves of a packed value. Payload bytes that
collide with a delimiter (or with the escape byte itself) are rewritten
with a backslash escape:

    '#'  ->  \\h        '@'  ->  \\a        '\\'  ->  \\\\

so arbitrary payloads survive a round trip bit-exactly. Joining two clean
payloads therefore costs exactly one extra byte; each delimiter or escape
byte inside a payload costs one more.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import MalformedInstance, NonMemberSample
from .report import Report

Instance = bytes

HASH = 0x23    # '#'
AT = 0x40      # '@'
ESCAPE = 0x5C  # '\'

_SPECIALS = frozenset((HASH, AT, ESCAPE))
_UNESCAPES = {ord("h"): 0x23, ord("a"): 0x40, ord("\\"): 0x5C}


def escape_payload(payload: Instance) -> Instance:
    # Escape byte first or it would re-escape the substitutions.
    return (
        payload.replace(b"\\", b"\\\\").replace(b"#", b"\\h").replace(b"@", b"\\a")
    )


def unescape_payload(escaped: Instance) -> Instance:
    """Invert escape_payload; rejects raw delimiters and bad escapes."""
    if not any(b in _SPECIALS for b in escaped):
        return escaped
    out = bytearray()
    i, n = 0, len(escaped)
    while i < n:
        b = escaped[i]
        if b == ESCAPE:
            if i + 1 >= n:
                raise MalformedInstance("dangling escape byte at end of payload")
            try:
                out.append(_UNESCAPES[escaped[i + 1]])
            except KeyError:
                raise MalformedInstance(
                    f"unknown escape sequence at offset {i}"
                ) from None
            i += 2
        elif b in (HASH, AT):
            raise MalformedInstance(f"unescaped delimiter at offset {i}")
        else:
            out.append(b)
            i += 1
    return bytes(out)


def escape_overhead(payload: Instance) -> int:
    """Extra bytes escaping adds: one per delimiter or escape occurrence."""
    return sum(1 for b in payload if b in _SPECIALS)


def _unescaped_positions(x: Instance, delim: int) -> list[int]:
    # A delimiter is structural iff an even number of escape bytes
    # immediately precede it.
    positions = []
    run = 0
    for i, b in enumerate(x):
        if b == delim and run % 2 == 0:
            positions.append(i)
        run = run + 1 if b == ESCAPE else 0
    return positions


def _split_once(x: Instance, delim: int, what: str) -> tuple[Instance, Instance]:
    positions = _unescaped_positions(x, delim)
    if len(positions) != 1:
        raise MalformedInstance(
            f"expected exactly one unescaped {what}, found {len(positions)}"
        )
    p = positions[0]
    return x[:p], x[p + 1:]


@dataclass(frozen=True)
class Pair:
    """A data part joined with a query part."""

    data: Instance
    query: Instance


def encode_pair(pair: Pair) -> Instance:
    return escape_payload(pair.data) + b"#" + escape_payload(pair.query)


def decode_pair(x: Instance) -> Pair:
    left, right = _split_once(x, HASH, "'#'")
    return Pair(unescape_payload(left), unescape_payload(right))


def pack_at(x1: Instance, x2: Instance) -> Instance:
    """Join two instances into one, recoverable with front/back."""
    return escape_payload(x1) + b"@" + escape_payload(x2)


def front(z: Instance) -> Instance:
    left, _ = _split_once(z, AT, "'@'")
    return unescape_payload(left)


def back(z: Instance) -> Instance:
    _, right = _split_once(z, AT, "'@'")
    return unescape_payload(right)


def split_packed(z: Instance) -> tuple[Instance, Instance]:
    left, right = _split_once(z, AT, "'@'")
    return unescape_payload(left), unescape_payload(right)


@dataclass(frozen=True)
class PolylogBound:
    """Finite-scale stand-in for a polylog size bound: a*log2(n)^k + b.

    Sizes below 2 are clamped to 2 before the logarithm so the bound is
    total and monotone. a and b must be nonnegative, k a nonnegative int.
    """

    a: float
    k: int
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("coefficients must be nonnegative")
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError("exponent must be a nonnegative integer")

    def __call__(self, n) -> float:
        return self.a * math.log2(max(n, 2)) ** self.k + self.b

    def describe(self) -> str:
        return f"{self.a}*log2(n)^{self.k}+{self.b}"


ZERO_BOUND = PolylogBound(0.0, 0, 0.0)


def parse_bound(text: str) -> PolylogBound:
    """Parse the 'a,k,b' form used on the command line and in config files."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 'a,k,b', got {text!r}")
    return PolylogBound(float(parts[0]), int(parts[1]), float(parts[2]))


def shifted_bound(bound: PolylogBound, pad: int) -> PolylogBound:
    """A bound dominating n -> bound(n + pad), valid once n >= max(pad, 2).

    Uses log2(n + pad) <= log2(2n) = log2(n) + 1 <= 2*log2(n) for n >= 2,
    so inflating the coefficient by 2^k suffices.
    """
    if pad < 0:
        raise ValueError("pad must be nonnegative")
    if pad == 0:
        return bound
    return PolylogBound(bound.a * 2 ** bound.k, bound.k, bound.b)


@dataclass(frozen=True)
class LanguageOfPairs:
    """A set of data/query pairs given by a total membership predicate.

    short_query_bound caps |query| as a function of |data| for members;
    check_short_query probes it on samples.
    """

    name: str
    membership: Callable[[Instance, Instance], bool]
    short_query_bound: PolylogBound

    def member(self, pair: Pair) -> bool:
        return self.membership(pair.data, pair.query)


def check_short_query(language: LanguageOfPairs, samples: Iterable[Pair]) -> Report:
    """Check |query| <= bound(|data|) on member samples.

    Raises NonMemberSample if any sample fails the membership oracle; an
    empty sample set passes vacuously.
    """
    rep = Report(f"short-query:{language.name}")
    bound = language.short_query_bound
    failures = []
    worst = None
    total = 0
    for idx, pair in enumerate(samples):
        if not language.member(pair):
            raise NonMemberSample(
                f"sample {idx} is not a member of {language.name}"
            )
        total += 1
        limit = bound(len(pair.data))
        if worst is None or len(pair.query) > worst[0]:
            worst = (len(pair.query), limit)
        if len(pair.query) > limit:
            failures.append(
                (idx, "short-query", f"|Q|={len(pair.query)} > {limit:.2f}")
            )
    rep.add(
        "short-query",
        not failures,
        measured=None if worst is None else worst[0],
        bound=bound.describe(),
        detail=f"{total} member samples",
    )
    rep.itemize("sample", failures)
    return rep
