import random

import pytest

from polytract.errors import MalformedGraph, SameNode, UnknownNode
from polytract.problems import bds

from oracles import bds_order_oracle


def test_order_two_children_then_pop():
    g = bds.make_graph(3, (1, 2, 3), [(1, 2), (1, 3)])
    assert bds.bds_order(g) == (1, 2, 3)


def test_order_edgeless_is_ascending():
    g = bds.make_graph(3, (1, 2, 3), [])
    assert bds.bds_order(g) == (1, 2, 3)
    g5 = bds.make_graph(5, (5, 4, 3, 2, 1), [])
    # node numbered 1 is node 5, and so on back up
    assert bds.bds_order(g5) == (5, 4, 3, 2, 1)


def test_order_path_follows_stack():
    g = bds.make_graph(3, (1, 2, 3), [(1, 3), (3, 2)])
    assert bds.bds_order(g) == (1, 3, 2)


def test_order_matches_oracle_on_random_graphs():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randrange(1, 9)
        g = bds.random_graph(n, rng, 0.4)
        assert bds.bds_order(g) == bds_order_oracle(g.n, g.numbering, g.edges)


def test_decide_and_member():
    g = bds.make_graph(3, (1, 2, 3), [(1, 3), (3, 2)])
    assert bds.bds_decide(g, 3, 2)
    assert not bds.bds_decide(g, 2, 3)
    x = bds.instance_bytes(g, 3, 2)
    assert bds.bds_member(x)
    assert not bds.bds_member(bds.swap_query(x))
    with pytest.raises(SameNode):
        bds.bds_decide(g, 2, 2)
    with pytest.raises(UnknownNode):
        bds.bds_decide(g, 0, 2)


def test_member_is_total_on_garbage():
    for junk in (b"", b"hello", b"2 1\n1 2\n1 2\n", b"1 0\n1\n", b"\xff\xff"):
        assert bds.bds_member(junk) is False


def test_make_graph_validation():
    with pytest.raises(MalformedGraph):
        bds.make_graph(2, (1, 1), [])
    with pytest.raises(MalformedGraph):
        bds.make_graph(2, (1, 2), [(1, 1)])
    with pytest.raises(MalformedGraph):
        bds.make_graph(2, (1, 2), [(1, 3)])
    with pytest.raises(MalformedGraph):
        bds.make_graph(2, (1, 2), [(1, 2), (2, 1)])


def test_block_split_is_byte_exact():
    g = bds.make_graph(3, (2, 1, 3), [(1, 2)])
    x = bds.instance_bytes(g, 1, 3)
    block, tail = bds.split_block_tail(x)
    assert block + tail == x
    assert tail == b"1 3"
    # non-canonical spacing in the tail must survive the split untouched
    weird = bds.graph_to_bytes(g) + b" 1   3"
    block2, tail2 = bds.split_block_tail(weird)
    assert block2 + tail2 == weird
    assert tail2 == b" 1   3"


def test_graph_text_roundtrip():
    rng = random.Random(5)
    for _ in range(200):
        g = bds.random_graph(rng.randrange(1, 10), rng)
        assert bds.parse_graph(bds.graph_to_bytes(g)) == g


def test_parse_instance_roundtrip():
    g = bds.make_graph(4, (2, 4, 1, 3), [(1, 2), (3, 4)])
    g2, u, v = bds.parse_instance(bds.instance_bytes(g, 4, 2))
    assert (g2, u, v) == (g, 4, 2)


def test_parse_rejects_malformed_blocks():
    for bad in (
        b"2\n1 2\n",              # header too short
        b"2 1\n1 2\n",            # missing edge line
        b"0 0\n\n",               # no nodes
        b"2 -1\n1 2\n",           # negative edge count
        b"2 0\n1 2\nleftover\n",  # trailing bytes in parse_graph
    ):
        with pytest.raises(MalformedGraph):
            bds.parse_graph(bad)


def test_enumeration_counts():
    # numberings factorial(n) times 2^(n choose 2) edge subsets
    assert sum(1 for _ in bds.enumerate_graphs(1)) == 1
    assert sum(1 for _ in bds.enumerate_graphs(2)) == 2 * 2
    assert sum(1 for _ in bds.enumerate_graphs(3)) == 6 * 8
    assert sum(1 for _ in bds.enumerate_graphs(4)) == 24 * 64


def test_sparse_generator_shape():
    rng = random.Random(3)
    g = bds.random_sparse_graph(200, rng, avg_degree=4.0)
    assert g.n == 200
    assert len(g.edges) == 400
    x = bds.random_sparse_instance(64, rng)
    bds.parse_instance(x)
