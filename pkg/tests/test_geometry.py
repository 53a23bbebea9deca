import math

import pytest
from hypothesis import given, strategies as st

from sinrsched import Link, Node, UnknownNodeError, ValidationError, distance, is_covered, partition_link_classes, verify_ruling
from sinrsched.geometry import link_diversity

from conftest import line_instance


def test_distance_examples():
    assert distance(Node(0, 0, 0), Node(1, 0, 0)) == 0
    assert distance(Node(0, 0, 0), Node(1, 3, 4)) == 5
    assert distance(Node(0, 1, 1), Node(1, 4, 5)) == 5


def test_distance_unknown_node(far_pair):
    with pytest.raises(UnknownNodeError):
        far_pair.distance(0, 99)
    with pytest.raises(KeyError):
        far_pair.node(99)


coord = st.floats(-1e3, 1e3, allow_nan=False)


@given(coord, coord, coord, coord)
def test_distance_symmetric_and_zero_iff_same(x1, y1, x2, y2):
    u, v = Node(0, x1, y1), Node(1, x2, y2)
    assert distance(u, v) == distance(v, u)
    assert (distance(u, v) == 0) == ((x1, y1) == (x2, y2))


def test_node_and_link_validation():
    with pytest.raises(ValidationError):
        Node(0, math.inf, 0)
    with pytest.raises(ValidationError):
        Link(0, 3, 3)


def test_partition_power_of_two_bounds():
    lc = partition_link_classes({0: 1.0, 1: 3.0, 2: 7.0}, 1, 8)
    assert lc.g == 3
    assert [lc.class_of[i] for i in (0, 1, 2)] == [1, 2, 3]
    assert lc.members(2) == {1}


def test_partition_degenerate_single_class():
    lc = partition_link_classes({0: 1.0}, 1, 1)
    assert link_diversity(1, 1) == 0
    assert lc.g == 1 and lc.class_of[0] == 1


def test_partition_fractional_bounds():
    lc = partition_link_classes({0: 0.5, 1: 0.9, 2: 2.0}, 0.5, 6)
    assert lc.g == 4  # ceil(log2 12)
    assert lc.class_of == {0: 1, 1: 1, 2: 3}


def test_partition_boundaries():
    # exactly 2^k d_min opens class k+1; exactly d_max goes to the top class
    lc = partition_link_classes({0: 2.0, 1: 4.0, 2: 8.0}, 1, 8)
    assert lc.class_of == {0: 2, 1: 3, 2: 3}
    assert lc.bound(3) == 8
    with pytest.raises(IndexError):
        lc.bound(4)


def test_partition_rejects_out_of_range_naming_link():
    with pytest.raises(ValidationError, match="link 7"):
        partition_link_classes({7: 9.0}, 1, 8)
    with pytest.raises(ValidationError):
        partition_link_classes({}, 2, 1)


lengths = st.dictionaries(st.integers(0, 50), st.floats(1.0, 100.0), min_size=1, max_size=20)


@given(lengths)
def test_partition_order_independent_and_idempotent(ls):
    a = partition_link_classes(ls, 1.0, 100.0)
    b = partition_link_classes(dict(reversed(list(ls.items()))), 1.0, 100.0)
    assert a.classes == b.classes
    again = partition_link_classes({k: ls[k] for c in a.classes for k in c}, 1.0, 100.0)
    assert again.classes == a.classes
    assert sum(len(c) for c in a.classes) == len(ls)
    for lid, d in ls.items():
        i = a.class_of[lid]
        assert a.bound(i) / 2 <= d <= a.bound(i)
        assert d < a.bound(i) or i == a.g


def test_is_covered_examples():
    v = Node(0, 0, 0)
    assert is_covered(v, [v], 0)
    assert not is_covered(v, [], 10)
    assert is_covered(v, [Node(1, 3, 4)], 5)
    assert not is_covered(v, [Node(1, 3, 4)], 4.9)


def test_verify_ruling_examples():
    a, b = Node(0, 0, 0), Node(1, 3, 0)
    assert verify_ruling([a], [a], 1, 2).ok
    bad = verify_ruling([a, b], [a, b], 4, 5)
    assert not bad.ok
    assert [(x.kind, x.nodes, x.distance) for x in bad.violations] == [("separation", (0, 1), 3.0)]
    assert verify_ruling([a], [a, b], 2, 4)
    assert verify_ruling([b], [a, b], 2, 4)


def test_verify_ruling_reports_subset_and_coverage():
    a, b, c = Node(0, 0, 0), Node(1, 10, 0), Node(2, 50, 0)
    v = verify_ruling([c], [a, b], 1, 5)
    kinds = sorted(x.kind for x in v.violations)
    assert kinds == ["coverage", "coverage", "not-subset"]
    assert verify_ruling([], [a], 1, 2).violations[0].nodes == (0, -1)


pts = st.lists(st.tuples(st.floats(0, 20), st.floats(0, 20)), min_size=1, max_size=12, unique=True)


@given(pts, st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0, 1), st.floats(0, 3))
def test_verify_ruling_monotone(points, w1, gap, shrink, grow):
    W = [Node(i, x, y) for i, (x, y) in enumerate(points)]
    w2 = w1 + gap
    R = [v for i, v in enumerate(W) if i % 2 == 0]
    if verify_ruling(R, W, w1, w2).ok:
        assert verify_ruling(R, W, w1 * shrink, w2 + grow).ok


def test_instance_validation():
    with pytest.raises(ValidationError, match="coincide"):
        line_instance([((0, 0), (1, 0)), ((0, 0), (0, 1))])
    with pytest.raises(ValidationError, match="both sender and receiver"):
        from sinrsched import Instance
        from conftest import P4
        Instance([Node(0, 0, 0), Node(1, 1, 0), Node(2, 1, 1)], [Link(0, 0, 1), Link(1, 1, 2)], P4)
    with pytest.raises(ValidationError, match="cannot support"):
        line_instance([((0, 0), (2, 0))])
