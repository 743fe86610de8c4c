"""Distance matrices, Wiener-type indices and weak majorization."""

from __future__ import annotations

import enum
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .tree import RootedTree, Tree, WeightedTree, subordinate_weights

__all__ = [
    "DistanceMatrix",
    "TerminalDistanceMatrix",
    "distance_matrix",
    "terminal_distance_matrix",
    "wiener",
    "terminal_wiener",
    "vwwi",
    "tvwwi",
    "vwwi_directed",
    "chi",
    "Majorization",
    "weak_majorizes",
    "matrix_to_csv",
]

REL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    entries: np.ndarray

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)


@dataclass(frozen=True, eq=False)
class TerminalDistanceMatrix:
    leaf_index: tuple[int, ...]
    entries: np.ndarray

    @property
    def leaf_count(self) -> int:
        return len(self.leaf_index)

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)


def _distances(t: Tree) -> np.ndarray:
    # Walk a DFS preorder from vertex 0: the row of a child equals its
    # parent's row plus one, minus two inside the child's own subtree
    # (a contiguous preorder block).
    n = t.order
    adj = t.adjacency
    pre = []
    parent = [-1] * n
    stack = [0]
    while stack:
        u = stack.pop()
        pre.append(u)
        for v in reversed(adj[u]):
            if v != parent[u]:
                parent[v] = u
                stack.append(v)
    pos = [0] * n
    for i, v in enumerate(pre):
        pos[v] = i
    size = [1] * n
    for v in reversed(pre):
        if parent[v] >= 0:
            size[parent[v]] += size[v]

    # rows/columns indexed by preorder position while filling
    d = np.zeros((n, n), dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    for i, v in enumerate(pre[1:], start=1):
        depth[i] = depth[pos[parent[v]]] + 1
    d[0] = depth
    for i, v in enumerate(pre[1:], start=1):
        row = d[pos[parent[v]]] + 1
        row[i : i + size[v]] -= 2
        d[i] = row
    perm = np.asarray(pos)
    return d[np.ix_(perm, perm)]


def distance_matrix(t: Tree) -> DistanceMatrix:
    """All-pairs path lengths of ``t`` as an ``int64`` matrix."""
    m = _distances(t)
    m.setflags(write=False)
    return DistanceMatrix(m)


def terminal_distance_matrix(t: Tree, dm: DistanceMatrix | None = None) -> TerminalDistanceMatrix:
    """Distance matrix restricted to pendent vertices (ascending vertex id)."""
    if dm is None:
        dm = distance_matrix(t)
    leaves = t.leaves
    sub = dm.entries[np.ix_(leaves, leaves)]
    sub.setflags(write=False)
    return TerminalDistanceMatrix(tuple(leaves), sub)


def wiener(t: Tree) -> int:
    return int(distance_matrix(t).entries.sum()) // 2


def terminal_wiener(t: Tree) -> int:
    return int(terminal_distance_matrix(t).entries.sum()) // 2


def _quadratic_half(m: np.ndarray, w: Sequence[float]) -> int | float:
    if all(isinstance(x, (int, np.integer)) for x in w):
        # exact: object dtype keeps Python ints
        wv = np.asarray([int(x) for x in w], dtype=object)
        return int(wv @ m.astype(object) @ wv) // 2
    wv = np.asarray(w, dtype=float)
    return 0.5 * float(wv @ m @ wv)


def vwwi(wt: WeightedTree) -> int | float:
    """``1/2 sum mu(u) mu(v) d(u, v)`` over all ordered vertex pairs."""
    return _quadratic_half(distance_matrix(wt.tree).entries, wt.weights)


def tvwwi(wt: WeightedTree) -> int | float:
    """Vertex-weighted Wiener index over pendent vertices only."""
    rd = terminal_distance_matrix(wt.tree)
    return _quadratic_half(rd.entries, [wt.weights[v] for v in rd.leaf_index])


def chi(x: float, total: float) -> float:
    return x * (total - x)


def vwwi_directed(rt: RootedTree) -> float:
    """VWWI via subtree weights: ``sum_{v != root} f(v) (total - f(v))``."""
    f, _ = subordinate_weights(rt)
    total = math.fsum(rt.tree.weights)
    return math.fsum(chi(f[v], total) for v in range(len(f)) if v != rt.root)


class Majorization(str, enum.Enum):
    STRICT = "strict"
    WEAK = "weak"
    NONE = "none"


def weak_majorizes(
    x: Sequence[float], y: Sequence[float], tol: float = 0.0
) -> Majorization:
    """Does ``x`` weakly majorize ``y``, with prefix sums taken in ascending order?

    ``x`` weakly majorizes ``y`` when, sorting both ascending, every prefix
    sum of ``x`` is at most the matching prefix sum of ``y``.  This is the
    mirror image of the textbook (descending, ``>=``) convention: it rewards
    ``x`` for having small leading entries.  STRICT additionally requires
    the sorted sequences to differ.  ``tol`` is an absolute slack on each
    prefix comparison.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"lengths {len(x)} and {len(y)} differ")
    xs = sorted(x)
    ys = sorted(y)
    px = py = 0.0
    for a, b in zip(xs, ys):
        px += a
        py += b
        if px > py + tol:
            return Majorization.NONE
    if all(abs(a - b) <= tol for a, b in zip(xs, ys)):
        return Majorization.WEAK
    return Majorization.STRICT


def matrix_to_csv(m: DistanceMatrix | TerminalDistanceMatrix) -> str:
    """Row-major CSV with a header of vertex ids (leaf ids for terminal matrices)."""
    ids = m.leaf_index if isinstance(m, TerminalDistanceMatrix) else range(m.order)
    buf = io.StringIO()
    buf.write(",".join(str(i) for i in ids) + "\n")
    for row in m.entries:
        buf.write(",".join(str(int(x)) for x in row) + "\n")
    return buf.getvalue()
