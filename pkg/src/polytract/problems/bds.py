"""Stack-driven breadth-depth traversal of numbered graphs.

The traversal starts at the node with the smallest number and records it.
The current node then has all of its unvisited neighbors recorded in
ascending number order and pushed on a stack in the reverse of that
order, so the smallest-numbered child sits on top. The next current node
is popped from the stack; it was already recorded when pushed and is not
recorded again, only expanded. When the stack runs dry with unvisited
nodes remaining, the traversal restarts at the smallest-numbered
unvisited node. The start node of each restart is recorded immediately
and never pushed.

The decision problem asks whether node u is recorded strictly before
node v.

Text form of an instance, all ASCII digits, spaces, and newlines:

    n m\n
    number(1) ... number(n)\n      the i-th entry numbers node i
    u v\n                          one line per edge, m lines
    u v                            trailing visit-order query, no newline

The header makes the graph block self-delimiting, so the query can ride
directly behind it with no separator byte.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator

from ..encoding import Instance
from ..errors import MalformedGraph, SameNode, UnknownNode


@dataclass(frozen=True)
class NumberedGraph:
    """Undirected graph on nodes 1..n with a bijective numbering.

    numbering[i] is the number of node i+1; edges hold (u, v) with u < v,
    no self-loops, no duplicates. Use make_graph to get validation.
    """

    n: int
    numbering: tuple[int, ...]
    edges: frozenset[tuple[int, int]]


def make_graph(n: int, numbering, edges) -> NumberedGraph:
    if n < 1:
        raise MalformedGraph("graph needs at least one node")
    numbering = tuple(numbering)
    if sorted(numbering) != list(range(1, n + 1)):
        raise MalformedGraph("numbering is not a bijection onto 1..n")
    canon = set()
    for u, v in edges:
        if u == v:
            raise MalformedGraph(f"self-loop at node {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise MalformedGraph(f"edge ({u}, {v}) leaves the node range")
        e = (u, v) if u < v else (v, u)
        if e in canon:
            raise MalformedGraph(f"duplicate edge ({e[0]}, {e[1]})")
        canon.add(e)
    return NumberedGraph(n, numbering, frozenset(canon))


def graph_to_bytes(g: NumberedGraph) -> bytes:
    lines = [f"{g.n} {len(g.edges)}", " ".join(str(x) for x in g.numbering)]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return ("\n".join(lines) + "\n").encode("ascii")


def _int_fields(line: bytes, lineno: int, want: int) -> list[int]:
    parts = line.split()
    if len(parts) != want:
        raise MalformedGraph(f"line {lineno}: expected {want} fields, got {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise MalformedGraph(f"line {lineno}: non-integer field") from None


def split_block_tail(data: bytes) -> tuple[bytes, bytes]:
    """Slice a graph block off the front of data, byte-exactly.

    The header says how many newline-terminated lines the block spans, so
    the split point is determined without reserializing anything and the
    tail comes back raw.
    """
    first_nl = data.find(b"\n")
    if first_nl < 0:
        raise MalformedGraph("line 1: missing newline after header")
    n, m = _int_fields(data[:first_nl], 1, 2)
    if n < 1:
        raise MalformedGraph("line 1: node count must be positive")
    if m < 0:
        raise MalformedGraph("line 1: negative edge count")
    pos = first_nl + 1
    for lineno in range(2, 2 + m + 1):
        nl = data.find(b"\n", pos)
        if nl < 0:
            raise MalformedGraph(f"line {lineno}: truncated block")
        pos = nl + 1
    return data[:pos], data[pos:]


def parse_graph_block(data: bytes) -> tuple[NumberedGraph, bytes]:
    """Parse a graph block off the front of data; return it and the rest."""
    block, rest = split_block_tail(data)
    lines = block.split(b"\n")  # header, numbering, m edges, trailing ""
    n, m = _int_fields(lines[0], 1, 2)
    numbering = _int_fields(lines[1], 2, n)
    edges = []
    for j in range(m):
        u, v = _int_fields(lines[2 + j], 3 + j, 2)
        edges.append((u, v))
    return make_graph(n, numbering, edges), rest


def parse_graph(data: bytes) -> NumberedGraph:
    g, rest = parse_graph_block(data)
    if rest:
        raise MalformedGraph("trailing bytes after edge lines")
    return g


def instance_bytes(g: NumberedGraph, u: int, v: int) -> Instance:
    """Graph block with the query pair riding directly behind it."""
    return graph_to_bytes(g) + f"{u} {v}".encode("ascii")


def parse_instance(data: Instance) -> tuple[NumberedGraph, int, int]:
    g, rest = parse_graph_block(data)
    fields = rest.split()
    if len(fields) != 2:
        raise MalformedGraph("query tail must be exactly two node ids")
    try:
        u, v = int(fields[0]), int(fields[1])
    except ValueError:
        raise MalformedGraph("query tail must be integers") from None
    return g, u, v


@lru_cache(maxsize=1_000_000)
def bds_order(g: NumberedGraph) -> tuple[int, ...]:
    """Visit order of the breadth-depth traversal described above."""
    n = g.n
    number = g.numbering
    nbrs: list[list[int]] = [[] for _ in range(n + 1)]
    for u, v in g.edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for lst in nbrs:
        lst.sort(key=lambda w: number[w - 1])
    by_number = sorted(range(1, n + 1), key=lambda w: number[w - 1])
    visited = [False] * (n + 1)
    order: list[int] = []
    stack: list[int] = []
    restart = 0
    while len(order) < n:
        if stack:
            cur = stack.pop()
        else:
            while visited[by_number[restart]]:
                restart += 1
            cur = by_number[restart]
            visited[cur] = True
            order.append(cur)
        children = [w for w in nbrs[cur] if not visited[w]]
        for w in children:
            visited[w] = True
            order.append(w)
        stack.extend(reversed(children))
    return tuple(order)


def bds_decide(g: NumberedGraph, u: int, v: int) -> bool:
    """True iff u is recorded strictly before v."""
    if not (1 <= u <= g.n):
        raise UnknownNode(f"node {u} is not in the graph")
    if not (1 <= v <= g.n):
        raise UnknownNode(f"node {v} is not in the graph")
    if u == v:
        raise SameNode(f"query names node {u} twice")
    order = bds_order(g)
    return order.index(u) < order.index(v)


def bds_member(x: Instance) -> bool:
    """Total membership oracle over raw bytes; malformed input is out."""
    try:
        g, u, v = parse_instance(x)
        return bds_decide(g, u, v)
    except (MalformedGraph, SameNode, UnknownNode, UnicodeDecodeError):
        return False


def swap_query(x: Instance) -> Instance:
    """Swap the trailing query pair; flips membership of valid instances."""
    g, u, v = parse_instance(x)
    return instance_bytes(g, v, u)


def random_graph(n: int, rng: random.Random, edge_prob: float = 0.3) -> NumberedGraph:
    numbering = list(range(1, n + 1))
    rng.shuffle(numbering)
    edges = [
        (u, v) for u, v in combinations(range(1, n + 1), 2)
        if rng.random() < edge_prob
    ]
    return make_graph(n, numbering, edges)


def random_instance(n: int, rng: random.Random, edge_prob: float = 0.3) -> Instance:
    g = random_graph(n, rng, edge_prob)
    u, v = rng.sample(range(1, n + 1), 2)
    return instance_bytes(g, u, v)


def random_sparse_graph(n: int, rng: random.Random, avg_degree: float = 4.0) -> NumberedGraph:
    """Random graph drawn edge by edge; usable for large n where the
    quadratic edge sweep of random_graph would be wasteful."""
    numbering = list(range(1, n + 1))
    rng.shuffle(numbering)
    target = min(int(avg_degree * n / 2), n * (n - 1) // 2)
    edges = set()
    while len(edges) < target:
        u, v = rng.sample(range(1, n + 1), 2)
        edges.add((u, v) if u < v else (v, u))
    return NumberedGraph(n, tuple(numbering), frozenset(edges))


def random_sparse_instance(n: int, rng: random.Random, avg_degree: float = 4.0) -> Instance:
    g = random_sparse_graph(n, rng, avg_degree)
    u, v = rng.sample(range(1, n + 1), 2)
    return instance_bytes(g, u, v)


def enumerate_graphs(n: int) -> Iterator[NumberedGraph]:
    """All numberings crossed with all edge subsets for a fixed n."""
    slots = list(combinations(range(1, n + 1), 2))
    for numbering in permutations(range(1, n + 1)):
        for mask in range(1 << len(slots)):
            edges = frozenset(
                slots[i] for i in range(len(slots)) if mask >> i & 1
            )
            yield NumberedGraph(n, numbering, edges)


def enumerate_instances(max_n: int) -> Iterator[Instance]:
    """Every graph up to max_n nodes with every ordered query pair."""
    for n in range(1, max_n + 1):
        for g in enumerate_graphs(n):
            block = graph_to_bytes(g)
            for u in range(1, n + 1):
                for v in range(1, n + 1):
                    if u != v:
                        yield block + f"{u} {v}".encode("ascii")
