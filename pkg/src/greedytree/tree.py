"""Tree containers and the two constructive algorithms.

``build_bfs_tree`` is the greedy (breadth-first) tree of a degree sequence.
``build_huffman`` is the generalized Huffman algorithm for vertex-weighted
trees: repeatedly hang the lightest pendent vertices on the lightest
internal vertex (ties: smaller degree, then smaller index) and merge
weights.  Enumeration helpers (Prüfer decoding, AHU canonical forms) serve
as brute-force oracles.
"""

from __future__ import annotations

import heapq
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .degseq import DegreeSequence, validate_tree_sequence
from .errors import BudgetExceeded, NoInternalVertex, NotGraphicTree, RootIsLeaf

__all__ = [
    "Tree",
    "WeightedTree",
    "RootedTree",
    "GeneratingTuple",
    "build_bfs_tree",
    "bfs_levels",
    "build_huffman",
    "build_huffman_directed",
    "root_at",
    "subordinate_weights",
    "labeled_tree_count",
    "prufer_decode",
    "enumerate_trees",
    "canonical_form",
    "is_degree_monotone",
    "tree_from_parents",
    "to_edgelist",
    "from_edgelist",
    "to_dot",
]

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class Tree:
    """Undirected tree on vertices ``0..order-1``."""

    order: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = self.order
        if n < 1:
            raise NotGraphicTree("a tree needs at least one vertex")
        if len(self.edges) != n - 1:
            raise NotGraphicTree(f"{len(self.edges)} edges for {n} vertices")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise NotGraphicTree(f"bad edge ({u}, {v})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise NotGraphicTree(f"duplicate edge {key}")
            seen.add(key)
        # n-1 distinct edges + connected <=> tree
        adj = self.adjacency
        mark = [False] * n
        mark[0] = True
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not mark[v]:
                    mark[v] = True
                    stack.append(v)
        if not all(mark):
            raise NotGraphicTree("edge set is disconnected")

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.order)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        """Pendent vertices in ascending id order."""
        return tuple(v for v, d in enumerate(self.degrees) if d == 1)

    @cached_property
    def internal(self) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.degrees) if d >= 2)

    def degree_sequence(self) -> DegreeSequence:
        return validate_tree_sequence(self.degrees)


@dataclass(frozen=True)
class WeightedTree:
    tree: Tree
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != self.tree.order:
            raise ValueError(
                f"{len(self.weights)} weights for a tree of order {self.tree.order}"
            )
        if any(w < 0 for w in self.weights):
            raise ValueError("vertex weights must be non-negative")

    @property
    def total(self) -> float:
        return math.fsum(self.weights)

    @classmethod
    def unit(cls, tree: Tree) -> WeightedTree:
        return cls(tree, (1,) * tree.order)

    @classmethod
    def unit_leaves(cls, tree: Tree) -> WeightedTree:
        """Weight 1 on pendent vertices, 0 on internal ones."""
        return cls(tree, tuple(1 if d == 1 else 0 for d in tree.degrees))


@dataclass(frozen=True)
class RootedTree:
    """Weighted tree with every edge directed toward ``root``.

    ``parent[root] == -1``; ``order`` lists vertices root-first (BFS), so
    every vertex appears after its parent.
    """

    tree: WeightedTree
    root: int
    parent: tuple[int, ...]
    order: tuple[int, ...] = field(repr=False)


@dataclass(frozen=True)
class GeneratingTuple:
    """Degrees plus per-vertex weights; vertex ``i`` has ``degrees[i]``."""

    degrees: DegreeSequence
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.degrees):
            raise ValueError(
                f"{len(self.weights)} weights for {len(self.degrees)} degrees"
            )
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")

    @classmethod
    def from_leaf_weights(cls, seq: DegreeSequence, leaf_weights: Sequence[float]):
        """Assign ``leaf_weights`` to pendent vertices left to right, zero elsewhere."""
        n = seq.leaf_count
        if len(leaf_weights) != n:
            raise ValueError(f"{len(leaf_weights)} leaf weights for {n} leaves")
        return cls(seq, tuple(leaf_weights) + (0.0,) * (seq.order - n))


def is_degree_monotone(gt: GeneratingTuple) -> bool:
    d, mu = gt.degrees.degrees, gt.weights
    if any(mu[v] <= 0 for v in range(len(d)) if d[v] == 1):
        return False
    internal = [(d[v], mu[v]) for v in range(len(d)) if d[v] >= 2]
    for dm, wm in internal:
        for dm2, wm2 in internal:
            if dm < dm2 and wm > wm2:
                return False
    return True


def build_bfs_tree(seq: DegreeSequence) -> Tree:
    """Greedy tree: fill levels top-down, largest remaining degree first.

    Vertex 0 is the root (largest degree); vertices are numbered in
    breadth-first creation order, and each vertex consumes its
    ``degree - 1`` children from the remaining degrees in descending order.
    """
    desc = sorted(seq.degrees, reverse=True)
    n = len(desc)
    edges = []
    nxt = 1
    for v in range(n):
        want = desc[v] if v == 0 else desc[v] - 1
        for _ in range(want):
            edges.append((v, nxt))
            nxt += 1
    assert nxt == n
    return Tree(n, tuple(edges))


def bfs_levels(t: Tree, root: int = 0) -> list[list[int]]:
    """Vertices grouped by distance from ``root``."""
    levels = [[root]]
    seen = {root}
    while True:
        nxt = [v for u in levels[-1] for v in t.adjacency[u] if v not in seen]
        if not nxt:
            return levels
        seen.update(nxt)
        levels.append(nxt)


def build_huffman_directed(gt: GeneratingTuple) -> RootedTree:
    """Generalized Huffman algorithm with arcs directed toward the merge vertex.

    The root of the returned tree is the last internal vertex, the one that
    receives all remaining pendent vertices at the final step.
    """
    d = gt.degrees.degrees
    mu = gt.weights
    n = len(d)
    internal = [(mu[v], d[v], v) for v in range(n) if d[v] >= 2]
    if not internal:
        raise NoInternalVertex(f"sequence {list(d)} has no internal vertex")
    heapq.heapify(internal)
    pendent = [(mu[v], v) for v in range(n) if d[v] == 1]
    heapq.heapify(pendent)

    parent = [-1] * n
    while len(internal) > 1:
        _, deg, m = heapq.heappop(internal)
        merged = [mu[m]]
        for _ in range(deg - 1):
            w_weight, w = heapq.heappop(pendent)
            parent[w] = m
            merged.append(w_weight)
        heapq.heappush(pendent, (math.fsum(merged), m))
    _, deg, root = internal[0]
    assert len(pendent) == deg
    for _, w in pendent:
        parent[w] = root

    edges = tuple((v, parent[v]) for v in range(n) if v != root)
    wt = WeightedTree(Tree(n, edges), tuple(mu))
    return root_at(wt, root)


def build_huffman(gt: GeneratingTuple) -> WeightedTree:
    """Undirected generalized Huffman tree carrying the tuple's original weights."""
    return build_huffman_directed(gt).tree


def root_at(t: WeightedTree | Tree, r: int) -> RootedTree:
    if isinstance(t, Tree):
        t = WeightedTree.unit(t)
    tr = t.tree
    if tr.order >= 3 and tr.degrees[r] < 2:
        raise RootIsLeaf(f"vertex {r} has degree {tr.degrees[r]}")
    parent = [-1] * tr.order
    order = [r]
    seen = [False] * tr.order
    seen[r] = True
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for v in tr.adjacency[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                order.append(v)
    return RootedTree(t, r, tuple(parent), tuple(order))


def subordinate_weights(rt: RootedTree) -> tuple[list[float], list[float]]:
    """Subtree weights ``f(v)`` and the ascending vector over internal non-root vertices.

    ``f(v)`` sums the weights of every vertex whose directed path reaches
    ``v`` (``v`` included), so ``f(root)`` is the total weight.
    """
    mu = rt.tree.weights
    f = [float(x) for x in mu]
    for v in reversed(rt.order):
        p = rt.parent[v]
        if p >= 0:
            f[p] += f[v]
    deg = rt.tree.tree.degrees
    vec = sorted(f[v] for v in range(len(f)) if deg[v] >= 2 and v != rt.root)
    return f, vec


def tree_from_parents(parent: Sequence[int]) -> Tree:
    return Tree(len(parent), tuple((v, p) for v, p in enumerate(parent) if p >= 0))


# --- enumeration -----------------------------------------------------------


def labeled_tree_count(seq: DegreeSequence) -> int:
    """Number of labeled trees where vertex ``i`` has degree ``seq[i]``."""
    n = seq.order
    if n == 2:
        return 1
    count = math.factorial(n - 2)
    for x in seq.degrees:
        count //= math.factorial(x - 1)
    return count


def prufer_decode(code: Sequence[int], n: int) -> Tree:
    """Decode a Prüfer sequence of length ``n - 2`` over labels ``0..n-1``."""
    degree = [1] * n
    for x in code:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in code:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = sorted(leaves)
    edges.append((u, v))
    return Tree(n, tuple(edges))


def _multiset_permutations(items: list[int]) -> Iterator[tuple[int, ...]]:
    a = sorted(items)
    k = len(a)
    while True:
        yield tuple(a)
        i = k - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = k - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = reversed(a[i + 1 :])


def enumerate_trees(
    seq: DegreeSequence, mode: str = "unlabeled", budget: int = DEFAULT_BUDGET
) -> Iterator[Tree]:
    """Trees whose vertex ``i`` has degree ``seq[i]``.

    ``labeled`` yields every Prüfer decode; ``unlabeled`` keeps the first
    tree of each isomorphism class.  Raises :class:`BudgetExceeded` before
    yielding anything if the labeled count is over ``budget``.
    """
    if mode not in ("labeled", "unlabeled"):
        raise ValueError(f"mode must be 'labeled' or 'unlabeled', got {mode!r}")
    count = labeled_tree_count(seq)
    if count > budget:
        raise BudgetExceeded(count, budget)
    return _enumerate(seq, mode == "unlabeled")


def _enumerate(seq: DegreeSequence, dedup: bool) -> Iterator[Tree]:
    n = seq.order
    if n == 2:
        yield Tree(2, ((0, 1),))
        return
    multiset = [v for v, x in enumerate(seq.degrees) for _ in range(x - 1)]
    seen: set[str] = set()
    for code in _multiset_permutations(multiset):
        t = prufer_decode(code, n)
        if dedup:
            key = canonical_form(t)
            if key in seen:
                continue
            seen.add(key)
        yield t


def _centers(t: Tree) -> list[int]:
    n = t.order
    if n <= 2:
        return list(range(n))
    deg = list(t.degrees)
    layer = [v for v in range(n) if deg[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for u in layer:
            deg[u] = 0
            for v in t.adjacency[u]:
                if deg[v] > 0:
                    deg[v] -= 1
                    if deg[v] == 1:
                        nxt.append(v)
        layer = nxt
    return layer


def _ahu(t: Tree, root: int, blocked: int) -> str:
    # iterative post-order; ``blocked`` is excluded (the other center)
    parent = {root: blocked}
    order = [root]
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        for v in t.adjacency[u]:
            if v != parent[u]:
                parent[v] = u
                order.append(v)
    codes: dict[int, list[str]] = {v: [] for v in order}
    enc = ""
    for v in reversed(order):
        kids = codes[v]
        kids.sort()
        enc = "(" + "".join(kids) + ")"
        if v != root:
            codes[parent[v]].append(enc)
    return enc


def canonical_form(t: Tree) -> str:
    """Center-rooted AHU string; equal strings iff the trees are isomorphic.

    A bicentral tree is rooted at a phantom midpoint of its central edge,
    written with square brackets so it never collides with a real vertex.
    """
    centers = _centers(t)
    if len(centers) == 1:
        return _ahu(t, centers[0], -1)
    a, b = centers
    x, y = sorted((_ahu(t, a, b), _ahu(t, b, a)))
    return "[" + x + y + "]"


# --- serialization ---------------------------------------------------------


def to_edgelist(t: Tree) -> str:
    lines = [f"N {t.order}"]
    lines.extend(f"{u} {v}" for u, v in t.edges)
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> Tree:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0][0] != "N" or len(rows[0]) != 2:
        raise NotGraphicTree("edge list must start with a header line 'N <order>'")
    n = int(rows[0][1])
    return Tree(n, tuple((int(u), int(v)) for u, v in rows[1:]))


def to_dot(t: Tree | WeightedTree, name: str = "T") -> str:
    weights = None
    if isinstance(t, WeightedTree):
        weights = t.weights
        t = t.tree
    lines = [f"graph {name} {{"]
    for v in range(t.order):
        shape = "box" if t.degrees[v] == 1 else "circle"
        label = str(v) if weights is None else f"{v}\\n{weights[v]:.4g}"
        lines.append(f'  {v} [shape={shape}, label="{label}"];')
    lines.extend(f"  {u} -- {v};" for u, v in t.edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
