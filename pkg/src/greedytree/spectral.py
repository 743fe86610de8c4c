"""Spectral radius by power iteration, and closed forms for the d(a, b) family."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import Asymmetric, NotConverged
from .metrics import distance_matrix, terminal_distance_matrix
from .tree import Tree

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
    "SpectralResult",
    "spectral_radius",
    "tdsr",
    "dsr",
    "rd_ab_matrix",
    "tdsr_ab_closed",
    "tlb_ab_closed",
    "terr_ab",
    "terr_ab_real",
    "terr_extremal",
    "Theorem3Constants",
    "theorem3_constants",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True, eq=False)
class SpectralResult:
    radius: float
    perron: np.ndarray
    iterations: int
    residual: float


def spectral_radius(
    a, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> SpectralResult:
    """Dominant eigenpair of a symmetric non-negative matrix.

    Power iteration from the normalized all-ones vector.  Stops once
    ``||A v - lam v||_inf <= tol * max(1, lam)`` where ``lam`` is the
    Rayleigh quotient of the current unit iterate.
    """
    m = np.asarray(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise Asymmetric("matrix is not symmetric")
    if (m < 0).any():
        raise ValueError("matrix has negative entries")
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = m.astype(float)
    n = m.shape[0]
    v = np.full(n, 1.0 / math.sqrt(n))
    lam = 0.0
    res = math.inf
    for it in range(1, max_iter + 1):
        y = m @ v
        lam = float(v @ y)
        res = float(np.max(np.abs(y - lam * v)))
        if res <= tol * max(1.0, lam):
            return SpectralResult(lam, v, it, res)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # A v = 0 with v > 0 forces A = 0
            return SpectralResult(0.0, v, it, 0.0)
        v = y / norm
    raise NotConverged(max_iter, res)


def tdsr(t: Tree, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Spectral radius of the terminal distance matrix."""
    return spectral_radius(terminal_distance_matrix(t).entries, tol, max_iter)


def dsr(t: Tree, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Spectral radius of the full distance matrix."""
    return spectral_radius(distance_matrix(t).entries, tol, max_iter)


def rd_ab_matrix(a: int, b: int) -> np.ndarray:
    """Block terminal matrix of the d(a, b) greedy tree: deep leaves first."""
    n = a + b
    m = np.empty((n, n), dtype=np.int64)
    m[:a, :a] = 4
    m[:a, a:] = 3
    m[a:, :a] = 3
    m[a:, a:] = 2
    np.fill_diagonal(m, 0)
    return m


def _check_ab(a: int, b: int) -> None:
    if a < 1 or b < 1:
        raise ValueError(f"a, b must be >= 1, got ({a}, {b})")


def tdsr_ab_closed(a: int, b: int) -> float:
    # positive root of lam^2 - 2(2a+b-3) lam - 8(a+b-1) - ab = 0
    _check_ab(a, b)
    return 2 * a + b - 3 + math.sqrt(4 * a * a + b * b + 5 * a * b - 4 * a + 2 * b + 1)


def tlb_ab_closed(a: int, b: int) -> float:
    """Average row sum of the d(a, b) terminal matrix."""
    _check_ab(a, b)
    return 2 * (2 * a + b) * (1 - 1 / (a + b))


def terr_ab(a: int, b: int) -> float:
    return 1 - tlb_ab_closed(a, b) / tdsr_ab_closed(a, b)


def terr_ab_real(a: float, n: float) -> float:
    """TErr of d(a, n - a) with ``a`` treated as a real parameter."""
    b = n - a
    top = 2 * a + b - 3 + math.sqrt(4 * a * a + b * b + 5 * a * b - 4 * a + 2 * b + 1)
    return 1 - 2 * (2 * a + b) * (1 - 1 / n) / top


def terr_extremal(n: float) -> float:
    """TErr at the continuous maximizer ``a(n)``, in the simplified closed form."""
    r2 = math.sqrt(2)
    num = 8 * (n - 2 + 3 / r2) * (1 - 1 / n)
    den = 4 * n - 17 + 6 * r2 + 3 * math.sqrt(2 * n * n - 8 * n + 6 * n * r2 + 17 - 12 * r2)
    return 1 - num / den


@dataclass(frozen=True)
class Theorem3Constants:
    limit: float
    extremal_a: Callable[[float], float]


def theorem3_constants() -> Theorem3Constants:
    """Supremum of TErr over the d(a, b) family and the per-``n`` maximizer."""
    r2 = math.sqrt(2)
    return Theorem3Constants(
        limit=(3 * r2 - 4) / (3 * r2 + 4),
        extremal_a=lambda n: (n - 8) / 3 + 2 * r2,
    )
