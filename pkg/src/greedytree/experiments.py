"""Computational campaigns: error scans, exhaustive checks and randomized probes."""

from __future__ import annotations

import io
import json
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np

from .bounds import bounds_for
from .degseq import (
    DegreeSequence,
    enumerate_tree_sequences,
    is_ab_family,
    is_starlike,
)
from .errors import TooSmall
from .metrics import (
    Majorization,
    terminal_distance_matrix,
    terminal_wiener,
    tvwwi,
    weak_majorizes,
    wiener,
)
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, dsr, spectral_radius, tdsr
from .tree import (
    DEFAULT_BUDGET,
    GeneratingTuple,
    RootedTree,
    Tree,
    build_bfs_tree,
    build_huffman,
    build_huffman_directed,
    canonical_form,
    enumerate_trees,
    subordinate_weights,
)

__all__ = [
    "ScanRecord",
    "scan_terr",
    "scan_err",
    "records_to_csv",
    "envelope_summary",
    "records_to_svg",
    "TheoremViolation",
    "VerificationReport",
    "verify_conjectures",
    "ProbeReport",
    "random_sphere_point",
    "probe_lemma1",
    "probe_theorem2",
    "probe_perturbation",
    "probe_theorem5",
    "huffman_monotonicity_violations",
]

PROBE_TOL = 1e-8


# --- scans -----------------------------------------------------------------


@dataclass(frozen=True)
class ScanRecord:
    order: int
    seq: str
    metric: str
    value: float
    is_ab_family: bool
    is_starlike: bool


def _record(seq: DegreeSequence, metric: str, tol: float, max_iter: int) -> ScanRecord:
    try:
        rep = bounds_for(seq, tol, max_iter)
    except Exception as exc:
        exc.add_note(f"while scanning sequence {seq.compact()}")
        raise
    value = rep.terr if metric == "TErr" else rep.err
    return ScanRecord(
        seq.order, seq.compact(), metric, value, is_ab_family(seq), is_starlike(seq)
    )


def _scan(metric: str, max_n: int, tol: float, max_iter: int, workers: int) -> list[ScanRecord]:
    if not 4 <= max_n <= 30:
        raise ValueError(f"max_n must be in [4, 30], got {max_n}")
    seqs = [s for n in range(4, max_n + 1) for s in enumerate_tree_sequences(n)]
    job = partial(_record, metric=metric, tol=tol, max_iter=max_iter)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            recs = list(pool.map(job, seqs, chunksize=64))
    else:
        recs = [job(s) for s in seqs]
    # map preserves order already; the sort pins it regardless of executor
    order = {s.compact(): i for i, s in enumerate(seqs)}
    recs.sort(key=lambda r: (r.order, order[r.seq]))
    return recs


def scan_terr(
    max_n: int, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, workers: int = 1
) -> list[ScanRecord]:
    """TErr for every degree sequence of order 4..max_n."""
    return _scan("TErr", max_n, tol, max_iter, workers)


def scan_err(
    max_n: int, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, workers: int = 1
) -> list[ScanRecord]:
    """Err (distance version) for every degree sequence of order 4..max_n."""
    return _scan("Err", max_n, tol, max_iter, workers)


def records_to_csv(records: Iterable[ScanRecord]) -> str:
    buf = io.StringIO()
    buf.write("N,seq,metric,value,is_ab_family,is_starlike\n")
    for r in records:
        buf.write(
            f'{r.order},"{r.seq}",{r.metric},{r.value!r},'
            f"{str(r.is_ab_family).lower()},{str(r.is_starlike).lower()}\n"
        )
    return buf.getvalue()


def envelope_summary(records: Sequence[ScanRecord], family: str, tie_tol: float = 1e-12) -> dict:
    """Per-order maxima, and whether a ``family`` member attains each one.

    ``family`` is ``"ab"`` or ``"starlike"``.  Ties count: an order passes
    when the best family member is within ``tie_tol`` of the overall max.
    """
    flag = "is_ab_family" if family == "ab" else "is_starlike"
    by_order: dict[int, list[ScanRecord]] = {}
    for r in records:
        by_order.setdefault(r.order, []).append(r)
    rows = []
    for n, recs in sorted(by_order.items()):
        top = max(recs, key=lambda r: r.value)
        fam = [r for r in recs if getattr(r, flag)]
        fam_top = max(fam, key=lambda r: r.value) if fam else None
        attained = fam_top is not None and fam_top.value >= top.value - tie_tol
        rows.append(
            {
                "N": n,
                "count": len(recs),
                "max": top.value,
                "argmax": top.seq,
                "family_max": fam_top.value if fam_top else None,
                "family_argmax": fam_top.seq if fam_top else None,
                "attained": attained,
            }
        )
    return {
        "family": family,
        "max": max(r.value for r in records),
        "median": float(np.median([r.value for r in records])),
        "all_attained": all(r["attained"] for r in rows),
        "orders": rows,
    }


def records_to_svg(records: Sequence[ScanRecord], family: str, title: str = "") -> str:
    """Scatter of value vs order; members of ``family`` drawn in red."""
    flag = "is_ab_family" if family == "ab" else "is_starlike"
    w, h, pad = 640, 420, 50
    xs = [r.order for r in records]
    ys = [r.value for r in records]
    x0, x1 = min(xs) - 0.5, max(xs) + 0.5
    y1 = max(ys) * 1.08 or 1.0

    def px(x):
        return pad + (x - x0) / (x1 - x0) * (w - 2 * pad)

    def py(y):
        return h - pad - y / y1 * (h - 2 * pad)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{w / 2:.1f}" y="20" text-anchor="middle">{title}</text>')
    for n in sorted(set(xs)):
        out.append(
            f'<text x="{px(n):.1f}" y="{h - pad + 15}" text-anchor="middle">{n}</text>'
        )
    for k in range(6):
        y = y1 * k / 5
        out.append(
            f'<text x="{pad - 5}" y="{py(y) + 4:.1f}" text-anchor="end">{y:.3f}</text>'
        )
    out.append(f'<text x="{w / 2:.1f}" y="{h - 10}" text-anchor="middle">N</text>')
    for r in records:
        if not getattr(r, flag):
            out.append(f'<circle cx="{px(r.order):.2f}" cy="{py(r.value):.2f}" r="1.6" fill="#555"/>')
    for r in records:
        if getattr(r, flag):
            out.append(f'<circle cx="{px(r.order):.2f}" cy="{py(r.value):.2f}" r="2.4" fill="#d62728"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --- exhaustive verification ----------------------------------------------


class TheoremViolation(AssertionError):
    """A proven property failed on a concrete instance."""


@dataclass
class VerificationReport:
    seq: str
    trees_enumerated: int
    min_dsr: float
    min_tdsr: float
    min_wi: int
    min_twi: int
    bfs_dsr: float
    bfs_tdsr: float
    bfs_wi: int
    bfs_twi: int
    conjecture1_holds: bool
    conjecture2_holds: bool
    witness: str
    dsr_witness: str
    lower_bounds_hold: bool

    def to_dict(self) -> dict:
        return asdict(self)


def verify_conjectures(
    seq: DegreeSequence,
    budget: int = DEFAULT_BUDGET,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    compare_tol: float = PROBE_TOL,
) -> VerificationReport:
    """Exhaustive comparison of the greedy tree against every tree of ``seq``.

    WI/TWI minimality of the greedy tree and the average-row-sum lower
    bounds are theorems: a failure raises :class:`TheoremViolation`.  The
    DSR/TDSR minimality flags are reported, never raised.
    """
    bfs = build_bfs_tree(seq)
    bfs_wi, bfs_twi = wiener(bfs), terminal_wiener(bfs)
    bfs_dsr = dsr(bfs, tol, max_iter).radius
    bfs_tdsr = tdsr(bfs, tol, max_iter).radius
    lb = 2 * bfs_wi / seq.order
    tlb = 2 * bfs_twi / seq.leaf_count

    count = 0
    best_dsr = best_tdsr = math.inf
    best_wi = best_twi = None
    wit = dwit = ""
    bounds_ok = True
    for t in enumerate_trees(seq, "unlabeled", budget):
        count += 1
        wi, twi = wiener(t), terminal_wiener(t)
        d = dsr(t, tol, max_iter).radius
        td = tdsr(t, tol, max_iter).radius
        best_wi = wi if best_wi is None else min(best_wi, wi)
        best_twi = twi if best_twi is None else min(best_twi, twi)
        if d < best_dsr:
            best_dsr, dwit = d, canonical_form(t)
        if td < best_tdsr:
            best_tdsr, wit = td, canonical_form(t)
        if lb > d + compare_tol or tlb > td + compare_tol:
            bounds_ok = False

    if best_wi < bfs_wi or best_twi < bfs_twi:
        raise TheoremViolation(
            f"{seq.compact()}: greedy tree WI/TWI {bfs_wi}/{bfs_twi} "
            f"above class minimum {best_wi}/{best_twi}"
        )
    if not bounds_ok:
        raise TheoremViolation(f"{seq.compact()}: average-row-sum lower bound exceeded a radius")
    return VerificationReport(
        seq=seq.compact(),
        trees_enumerated=count,
        min_dsr=best_dsr,
        min_tdsr=best_tdsr,
        min_wi=best_wi,
        min_twi=best_twi,
        bfs_dsr=bfs_dsr,
        bfs_tdsr=bfs_tdsr,
        bfs_wi=bfs_wi,
        bfs_twi=bfs_twi,
        conjecture1_holds=bfs_dsr <= best_dsr + compare_tol,
        conjecture2_holds=bfs_tdsr <= best_tdsr + compare_tol,
        witness=wit,
        dsr_witness=dwit,
        lower_bounds_hold=bounds_ok,
    )


# --- randomized probes -----------------------------------------------------


@dataclass
class ProbeReport:
    probe: str
    seq: str
    rng_seed: int
    samples: int
    checks: int = 0
    violations: list = field(default_factory=list)
    worst_margin: float = math.inf
    extras: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def check(self, lhs: float, rhs: float, what: str, tol: float = PROBE_TOL, **ctx) -> None:
        """Record ``lhs <= rhs + tol``."""
        self.checks += 1
        margin = rhs - lhs
        self.worst_margin = min(self.worst_margin, margin)
        if margin < -tol:
            self.violations.append({"check": what, "lhs": lhs, "rhs": rhs, **ctx})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def random_sphere_point(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform point on the positive orthant of the unit sphere."""
    while True:
        x = np.abs(rng.standard_normal(n))
        norm = np.linalg.norm(x)
        if norm > 0 and (x > 0).all():
            return x / norm


def _needs_leaves(seq: DegreeSequence, k: int = 2) -> None:
    if seq.leaf_count < k or seq.internal_count < 1:
        raise TooSmall(f"{seq.compact()}: probe needs >= {k} leaves and an internal vertex")


def _leaf_rd_stack(seq: DegreeSequence, budget: int) -> np.ndarray:
    """Distinct leaf-distance matrices over all labeled trees of ``seq``.

    Leaves are vertices ``0..n-1`` in every labeled tree, so row ``i`` of
    each matrix belongs to the pendent vertex carrying weight ``mu[i]``.
    """
    seen = {}
    for t in enumerate_trees(seq, "labeled", budget):
        rd = terminal_distance_matrix(t).entries
        seen.setdefault(rd.tobytes(), rd)
    return np.stack(list(seen.values())).astype(float)


def probe_lemma1(
    seq: DegreeSequence,
    samples: int,
    rng_seed: int = 42,
    budget: int = DEFAULT_BUDGET,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> ProbeReport:
    """``2 TVWWI(H(mu)) <= TDSR(T)`` for random ``mu`` on the sphere and every tree ``T``."""
    _needs_leaves(seq)
    rng = np.random.default_rng(rng_seed)
    n = seq.leaf_count
    radii = [tdsr(t, tol, max_iter).radius for t in enumerate_trees(seq, "unlabeled", budget)]
    floor = min(radii)
    rep = ProbeReport("lemma1", seq.compact(), rng_seed, samples)
    rep.extras["trees"] = len(radii)
    rep.extras["min_tdsr"] = floor

    equal = [1 / math.sqrt(n)] * n
    val = 2 * tvwwi(build_huffman(GeneratingTuple.from_leaf_weights(seq, equal)))
    rep.extras["equal_weight_bound"] = val
    rep.extras["tlb"] = 2 * terminal_wiener(build_bfs_tree(seq)) / n
    rep.check(val, floor, "equal weights")
    best = val
    for k in range(samples):
        mu = random_sphere_point(rng, n)
        val = 2 * tvwwi(build_huffman(GeneratingTuple.from_leaf_weights(seq, mu.tolist())))
        best = max(best, val)
        rep.check(val, floor, "random weights", sample=k)
    rep.extras["best_bound"] = best
    return rep


def probe_theorem2(
    seq: DegreeSequence,
    samples: int,
    rng_seed: int = 42,
    budget: int = DEFAULT_BUDGET,
) -> ProbeReport:
    """Equal pendent weights maximize the minimum TVWWI over the sphere and simplex.

    For each random ``mu`` the minimum of TVWWI over all labeled trees is
    found by brute force, checked against the Huffman tree, and compared
    with ``TWI(BFS) / n`` (sphere) and ``TWI(BFS) / n^2`` (simplex).
    """
    _needs_leaves(seq)
    rng = np.random.default_rng(rng_seed)
    n = seq.leaf_count
    stack = _leaf_rd_stack(seq, budget)
    twi_bfs = terminal_wiener(build_bfs_tree(seq))
    rep = ProbeReport("theorem2", seq.compact(), rng_seed, samples)
    rep.extras["distinct_leaf_matrices"] = int(stack.shape[0])
    rep.extras["twi_bfs"] = twi_bfs
    above_for_some_tree = 0
    for k in range(samples):
        mu = random_sphere_point(rng, n)
        for label, w, scale in (("sphere", mu, n), ("simplex", mu / mu.sum(), n * n)):
            values = 0.5 * np.einsum("i,kij,j->k", w, stack, w)
            floor = float(values.min())
            huff = tvwwi(build_huffman(GeneratingTuple.from_leaf_weights(seq, w.tolist())))
            # the Huffman tree must realize the brute-force minimum
            rep.check(huff, floor, f"huffman minimal ({label})", sample=k)
            rep.check(scale * floor, twi_bfs, f"bound ({label})", sample=k)
            above_for_some_tree += int((scale * values > twi_bfs + PROBE_TOL).any())
    # the inequality is about the minimizing tree; individual trees often exceed it
    rep.extras["draws_where_some_tree_exceeds"] = above_for_some_tree
    return rep


def _rooted_f(rt: RootedTree) -> list[float]:
    return subordinate_weights(rt)[1]


def probe_perturbation(
    seq: DegreeSequence,
    rng_seed: int = 42,
    trials: int = 100,
    tol: float = PROBE_TOL,
) -> ProbeReport:
    """Moving two pendent weights toward each other can only raise Huffman TVWWI.

    Each trial draws ``mu`` on the sphere and a pair ``mu_i > mu_j``, then
    sets ``mu'_i = s + eps``, ``mu'_j = s - eps`` (``s`` the pair mean,
    ``0 < eps < delta = (mu_i - mu_j)/2``).  Checks: ``f(H)`` weakly
    majorizes ``f(H')``; ``TVWWI(H) < TVWWI(H')``; and the sphere-projected
    vector ``nu`` also beats ``mu``.
    """
    _needs_leaves(seq, 3)
    rng = np.random.default_rng(rng_seed)
    n = seq.leaf_count
    rep = ProbeReport("perturbation", seq.compact(), rng_seed, trials)
    degenerate = 0
    strict_gain = 0
    for k in range(trials):
        mu = random_sphere_point(rng, n)
        i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        if mu[i] < mu[j]:
            i, j = j, i
        if mu[i] == mu[j]:
            degenerate += 1
            continue
        delta = (mu[i] - mu[j]) / 2
        eps = float(rng.uniform(0, delta))
        if eps == 0.0:
            degenerate += 1
            continue
        s = (mu[i] + mu[j]) / 2
        mu1 = mu.copy()
        mu1[i], mu1[j] = s + eps, s - eps
        base = (mu[i] ** 2 + mu[j] ** 2) / 2
        nu = mu.copy()
        nu[i] = math.sqrt(base + (mu[i] + mu[j]) * eps)
        nu[j] = math.sqrt(base - (mu[i] + mu[j]) * eps)

        h = build_huffman_directed(GeneratingTuple.from_leaf_weights(seq, mu.tolist()))
        h1 = build_huffman_directed(GeneratingTuple.from_leaf_weights(seq, mu1.tolist()))
        hn = build_huffman(GeneratingTuple.from_leaf_weights(seq, nu.tolist()))

        rep.checks += 1
        if weak_majorizes(_rooted_f(h), _rooted_f(h1), tol) is Majorization.NONE:
            rep.violations.append({"check": "f(H) weakly majorizes f(H')", "trial": k})
        tv, tv1, tvn = tvwwi(h.tree), tvwwi(h1.tree), tvwwi(hn)
        rep.check(tv, tv1, "TVWWI(H) < TVWWI(H')", tol, trial=k)
        rep.check(tv, tvn, "TVWWI(H) < TVWWI(H_nu)", tol, trial=k)
        strict_gain += int(tv < tv1 and tv < tvn)
    rep.extras["degenerate_trials"] = degenerate
    rep.extras["strict_gains"] = strict_gain
    return rep


def huffman_monotonicity_violations(rt: RootedTree, tol: float = 0.0) -> list[tuple[int, int]]:
    """Arc pairs ``v->m``, ``v'->m'`` (``m != m'``) with ``f(v) < f(v')`` but ``f(m) >= f(m')``."""
    f, _ = subordinate_weights(rt)
    arcs = [(v, p) for v, p in enumerate(rt.parent) if p >= 0]
    bad = []
    for v, m in arcs:
        for v2, m2 in arcs:
            if m != m2 and f[v] + tol < f[v2] and not f[m] < f[m2]:
                bad.append((v, v2))
    return bad


def _subtree_membership(t: Tree, root: int) -> np.ndarray:
    """0/1 rows ``[m, u]``: ``u`` hangs below internal non-root vertex ``m``."""
    n = t.order
    parent = [-1] * n
    order = [root]
    seen = [False] * n
    seen[root] = True
    for u in order:
        for v in t.adjacency[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                order.append(v)
    member = np.eye(n)
    for v in reversed(order):
        if parent[v] >= 0:
            member[parent[v]] += member[v]
    rows = [m for m in range(n) if t.degrees[m] >= 2 and m != root]
    return member[rows]


def degree_monotone_weights(seq: DegreeSequence, rng: np.random.Generator) -> np.ndarray:
    """Positive pendent weights; internal weights sorted to be non-decreasing in degree."""
    n = seq.leaf_count
    leaf = rng.uniform(0.05, 1.0, n)
    internal = np.sort(rng.uniform(0.0, 1.0, seq.order - n))
    if rng.random() < 0.25:
        internal[:] = 0.0
    return np.concatenate([leaf, internal])


def probe_theorem5(
    seq: DegreeSequence,
    draws: int,
    rng_seed: int = 42,
    budget: int = DEFAULT_BUDGET,
    tol: float = 1e-9,
) -> ProbeReport:
    """``f(H)`` weakly majorizes ``f(T)`` for every labeled tree and internal root.

    Weights are degree-monotone random draws; also checks the Huffman
    monotonicity property on each directed Huffman tree.
    """
    if seq.internal_count < 1:
        raise TooSmall(f"{seq.compact()} has no internal vertex")
    rng = np.random.default_rng(rng_seed)
    blocks = []
    for t in enumerate_trees(seq, "labeled", budget):
        for r in t.internal:
            blocks.append(_subtree_membership(t, r))
    rep = ProbeReport("theorem5", seq.compact(), rng_seed, draws)
    rep.extras["rooted_trees"] = len(blocks)
    if seq.internal_count < 2:
        # f-vectors are empty: nothing to compare
        return rep
    members = np.stack(blocks)  # (trees, q-1, N)
    weights = np.stack([degree_monotone_weights(seq, rng) for _ in range(draws)], axis=1)
    f_all = np.sort(members @ weights, axis=1)  # (trees, q-1, draws)
    prefix_all = np.cumsum(f_all, axis=1)
    for k in range(draws):
        gt = GeneratingTuple(seq, tuple(weights[:, k].tolist()))
        h = build_huffman_directed(gt)
        prefix_h = np.cumsum(_rooted_f(h))
        slack = prefix_all[:, :, k] - prefix_h[None, :]
        worst = float(slack.min())
        rep.checks += members.shape[0]
        rep.worst_margin = min(rep.worst_margin, worst)
        if worst < -tol:
            rep.violations.append({"check": "f(H) weakly majorizes f(T)", "draw": k, "slack": worst})
        if huffman_monotonicity_violations(h, tol):
            rep.violations.append({"check": "Huffman monotonicity", "draw": k})
    return rep
