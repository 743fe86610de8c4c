"""Lower/upper bounds on the minimum (terminal) distance spectral radius.

For a degree sequence with order ``N`` and ``n`` leaves, with ``G`` its
greedy tree::

    LB  = 2 WI(G) / N     <= min DSR  <= UB  = DSR(G)
    TLB = 2 TWI(G) / n    <= min TDSR <= TUB = TDSR(G)

``LB`` divides by the order and ``TLB`` by the leaf count: each is the
average row sum of the corresponding matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .degseq import DegreeSequence, family_ab
from .metrics import distance_matrix, terminal_distance_matrix
from .spectral import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    spectral_radius,
    tdsr_ab_closed,
    tlb_ab_closed,
)
from .tree import build_bfs_tree

__all__ = ["BoundsReport", "bounds_for", "AbConsistency", "bounds_ab_consistency"]


@dataclass(frozen=True)
class BoundsReport:
    seq: DegreeSequence
    lb: float
    ub: float
    tlb: float
    tub: float
    solver_iterations: int

    @property
    def err(self) -> float:
        return (self.ub - self.lb) / self.ub

    @property
    def terr(self) -> float:
        return (self.tub - self.tlb) / self.tub

    def to_dict(self) -> dict:
        return {
            "seq": list(self.seq.degrees),
            "order": self.seq.order,
            "leaves": self.seq.leaf_count,
            "lb": self.lb,
            "ub": self.ub,
            "tlb": self.tlb,
            "tub": self.tub,
            "err": self.err,
            "terr": self.terr,
            "solver_iterations": self.solver_iterations,
        }


def bounds_for(
    seq: DegreeSequence, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> BoundsReport:
    """Build the greedy tree of ``seq`` once and evaluate all four bounds."""
    t = build_bfs_tree(seq)
    dm = distance_matrix(t)
    rd = terminal_distance_matrix(t, dm)
    big = spectral_radius(dm.entries, tol, max_iter)
    term = spectral_radius(rd.entries, tol, max_iter)
    n_vertices = seq.order
    n_leaves = seq.leaf_count
    return BoundsReport(
        seq=seq,
        lb=int(dm.entries.sum()) / n_vertices,
        ub=big.radius,
        tlb=int(rd.entries.sum()) / n_leaves,
        tub=term.radius,
        solver_iterations=big.iterations + term.iterations,
    )


@dataclass(frozen=True)
class AbConsistency:
    ok: bool
    tub_residual: float
    tlb_residual: float


def bounds_ab_consistency(
    a: int, b: int, tol: float = 1e-8, max_iter: int = DEFAULT_MAX_ITER
) -> AbConsistency:
    """Compare the numeric bounds of d(a, b) with their closed forms."""
    rep = bounds_for(family_ab(a, b), max_iter=max_iter)
    r_tub = abs(rep.tub - tdsr_ab_closed(a, b))
    r_tlb = abs(rep.tlb - tlb_ab_closed(a, b))
    return AbConsistency(r_tub <= tol and r_tlb <= tol, r_tub, r_tlb)
