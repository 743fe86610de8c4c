import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedytree.degseq import enumerate_tree_sequences, family_ab, parse_sequence
from greedytree.errors import LengthMismatch
from greedytree.metrics import (
    Majorization,
    chi,
    distance_matrix,
    matrix_to_csv,
    terminal_distance_matrix,
    terminal_wiener,
    tvwwi,
    vwwi,
    vwwi_directed,
    weak_majorizes,
    wiener,
)
from greedytree.tree import (
    GeneratingTuple,
    Tree,
    WeightedTree,
    build_bfs_tree,
    build_huffman,
    enumerate_trees,
    root_at,
)
from oracles import bfs_distances, random_tree_edges


def path(n):
    return Tree(n, tuple((i, i + 1) for i in range(n - 1)))


def star(k):
    return Tree(k + 1, tuple((0, i) for i in range(1, k + 1)))


SPIDER_211 = Tree(5, ((0, 3), (3, 4), (1, 4), (2, 4)))


# --- distance matrices --------------------------------------------------------


def test_distance_p3():
    assert distance_matrix(path(3)).entries.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]


def test_distance_star():
    m = distance_matrix(star(3)).entries
    assert m[0].tolist() == [0, 1, 1, 1]
    assert m[1].tolist() == [1, 0, 2, 2]


def test_distance_figure_tree_row_sums():
    t = build_bfs_tree(parse_sequence("1^10,2,3,4,4,5"))
    dm = distance_matrix(t)
    ref = bfs_distances(t.order, t.edges)
    assert np.array_equal(dm.entries, ref)
    assert int(dm.row_sums().sum()) == 2 * wiener(t)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_distance_matches_bfs_oracle(n, seed):
    rng = np.random.default_rng(seed)
    edges = random_tree_edges(rng, n)
    t = Tree(n, tuple(edges))
    m = distance_matrix(t).entries
    assert np.array_equal(m, bfs_distances(n, edges))
    assert np.array_equal(m, m.T)
    assert (np.diag(m) == 0).all()


def test_distance_matrix_read_only():
    m = distance_matrix(path(3)).entries
    with pytest.raises(ValueError):
        m[0, 0] = 5


def test_terminal_p4():
    rd = terminal_distance_matrix(path(4))
    assert rd.leaf_index == (0, 3)
    assert rd.entries.tolist() == [[0, 3], [3, 0]]


def test_terminal_ab_blocks():
    a, b = 3, 4
    t = build_bfs_tree(family_ab(a, b))
    rd = terminal_distance_matrix(t)
    depth = distance_matrix(t).entries[0]
    deep = [i for i, v in enumerate(rd.leaf_index) if depth[v] == 2]
    shallow = [i for i, v in enumerate(rd.leaf_index) if depth[v] == 1]
    assert (len(deep), len(shallow)) == (a, b)
    m = rd.entries
    for i in deep:
        for j in deep:
            assert m[i, j] == (0 if i == j else 4)
        for j in shallow:
            assert m[i, j] == 3
    for i in shallow:
        for j in shallow:
            assert m[i, j] == (0 if i == j else 2)


def test_terminal_star():
    m = terminal_distance_matrix(star(5)).entries
    assert np.array_equal(m, 2 * (np.ones((5, 5)) - np.eye(5)))


def test_terminal_offdiag_at_least_two():
    for n in range(3, 10):
        for s in enumerate_tree_sequences(n):
            for t in enumerate_trees(s):
                m = terminal_distance_matrix(t).entries
                off = m[~np.eye(len(m), dtype=bool)]
                assert (off >= 2).all()


# --- indices ------------------------------------------------------------------


def test_wiener_examples():
    assert wiener(path(4)) == 10
    assert wiener(star(4)) == 16
    assert wiener(path(2)) == 1


def test_terminal_wiener_examples():
    assert terminal_wiener(path(4)) == 3
    for k in range(2, 8):
        assert terminal_wiener(star(k)) == k * (k - 1)
    assert terminal_wiener(SPIDER_211) == 8


def test_vwwi_examples():
    t = build_bfs_tree(parse_sequence("1^10,2,3,4,4,5"))
    assert vwwi(WeightedTree.unit(t)) == wiener(t)
    assert vwwi(WeightedTree(t, (0,) * t.order)) == 0
    assert vwwi(WeightedTree(path(3), (2, 0, 1))) == 4


def test_vwwi_integer_path_is_exact():
    v = vwwi(WeightedTree(path(3), (10**12, 0, 10**12)))
    assert isinstance(v, int)
    assert v == 2 * 10**24


def test_tvwwi_examples():
    t = SPIDER_211
    assert tvwwi(WeightedTree.unit_leaves(t)) == terminal_wiener(t)
    r = 1 / math.sqrt(2)
    assert tvwwi(WeightedTree(path(4), (r, 5.0, 7.0, r))) == pytest.approx(1.5, abs=1e-15)
    w = WeightedTree(t, (0, 1, 1, 9, 9))
    # leaf 0 carries no weight: only the pair (1, 2) at distance 2 remains
    assert tvwwi(w) == 2


def test_unit_weight_reductions_all_small_trees():
    for n in range(2, 10):
        for s in enumerate_tree_sequences(n):
            for t in enumerate_trees(s):
                assert vwwi(WeightedTree.unit(t)) == wiener(t)
                assert tvwwi(WeightedTree.unit_leaves(t)) == terminal_wiener(t)


def test_vwwi_directed_examples():
    assert vwwi_directed(root_at(WeightedTree.unit(path(3)), 1)) == 4 == wiener(path(3))
    for k in range(2, 8):
        rt = root_at(WeightedTree.unit(star(k)), 0)
        assert vwwi_directed(rt) == k * k == wiener(star(k))
    assert vwwi_directed(root_at(WeightedTree(star(3), (0, 0, 0, 0)), 0)) == 0


def test_chi():
    assert chi(1, 3) == 2
    assert chi(0, 3) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 20), st.integers(0, 2**32 - 1))
def test_directed_decomposition_root_independent(n, seed):
    rng = np.random.default_rng(seed)
    t = Tree(n, tuple(random_tree_edges(rng, n)))
    wt = WeightedTree(t, tuple(rng.uniform(0, 3, n).tolist()))
    ref = vwwi(wt)
    for r in t.internal:
        got = vwwi_directed(root_at(wt, r))
        assert math.isclose(got, ref, rel_tol=1e-9, abs_tol=1e-12)


def test_huffman_minimizes_vwwi_small():
    # degree-monotone weights: the Huffman tree is a minimizer over all labeled trees
    rng = np.random.default_rng(3)
    for n in range(4, 9):
        for s in enumerate_tree_sequences(n):
            trees = list(enumerate_trees(s, "labeled"))
            for _ in range(3):
                leaf = rng.uniform(0.05, 1, s.leaf_count).tolist()
                gt = GeneratingTuple.from_leaf_weights(s, leaf)
                h = vwwi(build_huffman(gt))
                best = min(vwwi(WeightedTree(t, gt.weights)) for t in trees)
                assert h <= best + 1e-9


# --- weak majorization ----------------------------------------------------------


def test_weak_majorization_examples():
    assert weak_majorizes((1, 2, 3), (1, 2, 3)) is Majorization.WEAK
    assert weak_majorizes((1, 1, 4), (2, 2, 2)) is Majorization.STRICT
    assert weak_majorizes((1, 3), (2, 1)) is Majorization.NONE


def test_weak_majorization_sorts_inputs():
    assert weak_majorizes((4, 1, 1), (2, 2, 2)) is Majorization.STRICT
    assert weak_majorizes((3, 2, 1), (1, 2, 3)) is Majorization.WEAK


def test_weak_majorization_length_mismatch():
    with pytest.raises(LengthMismatch):
        weak_majorizes((1, 2), (1, 2, 3))


def test_weak_majorization_tolerance():
    assert weak_majorizes((1.0 + 1e-12, 2.0), (1.0, 2.0)) is Majorization.NONE
    assert weak_majorizes((1.0 + 1e-12, 2.0), (1.0, 2.0), tol=1e-9) is Majorization.WEAK


def _transfer(y, k, l, delta):
    # move ``delta`` from the k-th to the l-th smallest entry (k <= l)
    ys = sorted(y)
    ys[k] -= delta
    ys[l] += delta
    return ys


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(0.5, 10), min_size=2, max_size=8),
    st.data(),
)
def test_transfer_gives_strict_majorization(y, data):
    # spreading an ascending pair apart makes the early prefixes smaller
    p = len(y)
    k = data.draw(st.integers(0, p - 2))
    l = data.draw(st.integers(k + 1, p - 1))
    ys = sorted(y)
    delta = data.draw(st.floats(1e-3, 0.49)) * ys[k]
    x = _transfer(ys, k, l, delta)
    assert weak_majorizes(x, ys, 1e-9) is Majorization.STRICT


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_concatenation_preserves_majorization(data):
    def pair():
        y = data.draw(st.lists(st.floats(0, 10), min_size=1, max_size=6))
        cut = data.draw(st.lists(st.floats(0, 1), min_size=len(y), max_size=len(y)))
        # x = y with its sorted prefix lowered: x weakly majorizes y
        ys = sorted(y)
        x = [v - c * v for v, c in zip(ys, cut)]
        return x, ys

    x1, y1 = pair()
    x2, y2 = pair()
    assert weak_majorizes(x1, y1, 1e-9) is not Majorization.NONE
    assert weak_majorizes(x2, y2, 1e-9) is not Majorization.NONE
    assert weak_majorizes(x1 + x2, y1 + y2, 1e-9) is not Majorization.NONE


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_chi_sum_respects_majorization_on_lower_half(data):
    total = data.draw(st.floats(1, 100))
    p = data.draw(st.integers(1, 7))
    y = sorted(data.draw(st.lists(st.floats(0, total / 2), min_size=p, max_size=p)))
    shrink = data.draw(st.lists(st.floats(0, 1), min_size=p, max_size=p))
    x = [v * (1 - s) for v, s in zip(y, shrink)]
    assert weak_majorizes(x, y, 1e-12) is not Majorization.NONE
    # chi is increasing and concave on [0, total/2]
    assert sum(chi(v, total) for v in x) <= sum(chi(v, total) for v in y) + 1e-9 * total * total


def test_matrix_csv():
    text = matrix_to_csv(terminal_distance_matrix(path(4)))
    assert text == "0,3\n0,3\n3,0\n"
    full = matrix_to_csv(distance_matrix(path(3)))
    assert full.splitlines()[0] == "0,1,2"
    assert full.splitlines()[3] == "2,1,0"
