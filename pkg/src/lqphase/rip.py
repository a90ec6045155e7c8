"""Exact and sampled isometry constants of A against dictionary-sparse vectors.

For a support S the admissible directions are the nonzero elements of
col(D_S); the extreme Rayleigh quotients of ||A y||^2 / ||y||^2 over that
column space are eigenvalue bounds of Q^T A^T A Q for any orthonormal basis
Q of col(D_S).  Rank-deficient supports (dependent frame columns) are
handled by restricting to the numerically nonzero singular directions.

The strong variant additionally ranges over all row subsets I of A holding
at least half the measurements; because the defining inequalities are
universal over the sparse vector, the min/max over I commute with that
quantifier and exhaustive enumeration over (I, S) pairs is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, ceil, floor

import numpy as np

from .errors import DimensionError, ParameterError, ResourceBudgetError
from .frames import TightFrame
from .linalg import RANK_RTOL, batch_sym_eig_bounds, numerical_rank, sym_eig_bounds

SUPPORT_BUDGET = 10**6
SDRIP_MAX_M = 14


@dataclass(frozen=True)
class DripWitness:
    """Support and coefficient vector attaining the extremal quotient."""

    support: tuple[int, ...]
    z: np.ndarray
    quotient: float
    side: str  # "upper" (lambda_max) or "lower" (lambda_min)


@dataclass(frozen=True)
class RipReport:
    order: int
    delta: float
    theta_minus: float | None = None
    theta_plus: float | None = None
    min_subset_size: int | None = None
    exhaustive: bool = True
    details: dict = field(default_factory=dict)


def drip_order_for_t(t: float, k: int) -> int:
    """Order ceil(t*k) used when t*k is not an integer (products within
    1e-9 of an integer are treated as that integer)."""
    if t <= 0.0 or k < 1:
        raise ParameterError(f"need t > 0 and k >= 1, got t={t}, k={k}")
    tk = t * k
    nearest = round(tk)
    if abs(tk - nearest) < 1e-9:
        return int(nearest)
    return int(ceil(tk))


def _support_basis(D: np.ndarray, S: tuple[int, ...]) -> np.ndarray | None:
    """Orthonormal basis of col(D_S), or None when the columns vanish."""
    Ds = D[:, list(S)]
    u, s, _ = np.linalg.svd(Ds, full_matrices=False)
    r = numerical_rank(s, RANK_RTOL)
    if r == 0:
        return None
    return u[:, :r]


def _check_problem(A: np.ndarray, F: TightFrame) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[1] != F.n:
        raise DimensionError(f"A has shape {A.shape}; frame dimension is {F.n}")
    return A


def _deviation(lo: float, hi: float) -> float:
    return max(hi - 1.0, 1.0 - lo)


def drip_constant(
    A: np.ndarray,
    F: TightFrame,
    order: int,
    support_budget: int = SUPPORT_BUDGET,
) -> tuple[float, DripWitness]:
    """Exact isometry defect at the given sparsity order, with witness.

    delta = max over supports |S| = order of max(lambda_max - 1, 1 - lambda_min)
    where lambda are the extreme quotients on col(D_S).
    """
    A = _check_problem(A, F)
    if not (1 <= order <= F.N):
        raise ParameterError(f"order must lie in [1, {F.N}], got {order}")
    n_supports = comb(F.N, order)
    if n_supports > support_budget:
        raise ResourceBudgetError(
            f"C({F.N},{order}) = {n_supports} supports exceed the budget {support_budget}; "
            "use the sampled estimator"
        )
    G = A.T @ A
    best: tuple[float, tuple[int, ...], str, float] | None = None
    for S in combinations(range(F.N), order):
        Q = _support_basis(F.D, S)
        if Q is None:
            continue
        lo, hi = sym_eig_bounds(Q.T @ G @ Q)
        dev = _deviation(lo, hi)
        if best is None or dev > best[0]:
            side = "upper" if hi - 1.0 >= 1.0 - lo else "lower"
            best = (dev, S, side, hi if side == "upper" else lo)
    if best is None:
        raise ParameterError("every candidate support has vanishing frame columns")
    dev, S, side, quot = best
    witness = _witness_for_support(A, F, S, side)
    return float(dev), witness


def _witness_for_support(A: np.ndarray, F: TightFrame, S: tuple[int, ...], side: str) -> DripWitness:
    Q = _support_basis(F.D, S)
    M = Q.T @ (A.T @ A) @ Q
    w, V = np.linalg.eigh(M)
    idx = -1 if side == "upper" else 0
    y = Q @ V[:, idx]
    # lift the direction back to coefficients supported on S
    zs, *_ = np.linalg.lstsq(F.D[:, list(S)], y, rcond=None)
    z = np.zeros(F.N)
    z[list(S)] = zs
    return DripWitness(support=tuple(S), z=z, quotient=float(w[idx]), side=side)


def drip_constant_sampled(
    A: np.ndarray,
    F: TightFrame,
    order: int,
    budget: int = 10**5,
    seed: int = 0,
    refine: bool = True,
) -> tuple[float, DripWitness]:
    """Random-quotient lower bound on the isometry defect.

    Draws `budget` random supports; without refinement, each distinct support
    contributes random-coefficient Rayleigh quotients, one per draw.  With
    refine=True the extremes of every visited support are computed exactly, so
    the gap to the exhaustive constant vanishes once all supports have been
    seen.  The returned value never exceeds the exhaustive one.
    """
    A = _check_problem(A, F)
    if not (1 <= order <= F.N):
        raise ParameterError(f"order must lie in [1, {F.N}], got {order}")
    if budget < 1:
        raise ParameterError("budget must be >= 1")
    rng = np.random.default_rng(seed)
    G = A.T @ A
    # vectorized uniform k-subsets: order statistics of i.i.d. uniforms
    draws = np.argsort(rng.random((budget, F.N)), axis=1)[:, :order]
    draws.sort(axis=1)
    visited, counts = np.unique(draws, axis=0, return_counts=True)
    best_dev = -np.inf
    best: tuple[tuple[int, ...], str] | None = None
    for row, cnt in zip(visited, counts):
        S = tuple(int(i) for i in row)
        if refine:
            Q = _support_basis(F.D, S)
            if Q is None:
                continue
            lo, hi = sym_eig_bounds(Q.T @ G @ Q)
        else:
            Ds = F.D[:, list(S)]
            Y = Ds @ rng.standard_normal((order, int(cnt)))
            norms = np.sum(Y * Y, axis=0)
            keep = norms > 0.0
            if not np.any(keep):
                continue
            quots = np.sum(Y[:, keep] * (G @ Y[:, keep]), axis=0) / norms[keep]
            lo, hi = float(np.min(quots)), float(np.max(quots))
        dev = _deviation(lo, hi)
        if dev > best_dev:
            best_dev = dev
            best = (S, "upper" if hi - 1.0 >= 1.0 - lo else "lower")
    if best is None:
        raise ParameterError("sampling never hit a support with nonvanishing frame columns")
    witness = _witness_for_support(A, F, best[0], best[1])
    return float(best_dev), witness


def _half_subsets(m: int, half_rule: str) -> list[tuple[int, ...]]:
    if half_rule == "ceil":
        min_size = ceil(m / 2)
    elif half_rule == "floor":
        min_size = max(1, floor(m / 2))
    else:
        raise ParameterError(f"half_rule must be 'ceil' or 'floor', got {half_rule!r}")
    subsets: list[tuple[int, ...]] = []
    for size in range(min_size, m + 1):
        subsets.extend(combinations(range(m), size))
    return subsets


def sdrip_constants(
    A: np.ndarray,
    F: TightFrame,
    order: int,
    half_rule: str = "ceil",
    support_budget: int = SUPPORT_BUDGET,
    max_m: int = SDRIP_MAX_M,
) -> RipReport:
    """Exhaustive half-subset isometry extremes (theta_minus, theta_plus).

    theta_minus = min over subsets I (|I| >= m/2) and supports S of the
    smallest quotient ||A_I y||^2 / ||y||^2 over col(D_S); theta_plus is the
    corresponding max of the largest quotient.
    """
    A = _check_problem(A, F)
    m = A.shape[0]
    if m > max_m:
        raise ResourceBudgetError(
            f"m={m} exceeds the exhaustive subset guard ({max_m}); use the sampled estimator"
        )
    n_supports = comb(F.N, order)
    if n_supports > support_budget:
        raise ResourceBudgetError(
            f"C({F.N},{order}) = {n_supports} supports exceed the budget {support_budget}"
        )
    subsets = _half_subsets(m, half_rule)
    masks = np.zeros((len(subsets), m))
    for i, I in enumerate(subsets):
        masks[i, list(I)] = 1.0

    theta_minus = np.inf
    theta_plus = -np.inf
    for S in combinations(range(F.N), order):
        Q = _support_basis(F.D, S)
        if Q is None:
            continue
        B = A @ Q  # (m, d); row i contributes outer(B_i, B_i) when i in I
        d = B.shape[1]
        row_grams = np.einsum("ip,iq->ipq", B, B).reshape(m, d * d)
        Ms = (masks @ row_grams).reshape(len(subsets), d, d)
        if d <= 2:
            lows, highs = batch_sym_eig_bounds(Ms)
        else:
            w = np.linalg.eigvalsh(Ms)
            lows, highs = w[:, 0], w[:, -1]
        theta_minus = min(theta_minus, float(np.min(lows)))
        theta_plus = max(theta_plus, float(np.max(highs)))
    if not np.isfinite(theta_minus):
        raise ParameterError("every candidate support has vanishing frame columns")
    delta, _ = drip_constant(A, F, order, support_budget=support_budget)
    return RipReport(
        order=order,
        delta=delta,
        theta_minus=theta_minus,
        theta_plus=theta_plus,
        min_subset_size=min(len(s) for s in subsets),
        exhaustive=True,
        details={"half_rule": half_rule, "n_subsets": len(subsets), "n_supports": n_supports},
    )


def sdrip_constants_sampled(
    A: np.ndarray,
    F: TightFrame,
    order: int,
    budget: int = 10**4,
    seed: int = 0,
    half_rule: str = "ceil",
) -> RipReport:
    """One-sided sampled bounds: reported theta_minus is an upper bound on the
    true minimum, theta_plus a lower bound on the true maximum."""
    A = _check_problem(A, F)
    m = A.shape[0]
    min_size = ceil(m / 2) if half_rule == "ceil" else max(1, floor(m / 2))
    rng = np.random.default_rng(seed)
    G_rows = None
    theta_minus = np.inf
    theta_plus = -np.inf
    delta_lb = 0.0
    for _ in range(budget):
        S = tuple(int(i) for i in np.sort(rng.choice(F.N, size=order, replace=False)))
        Q = _support_basis(F.D, S)
        if Q is None:
            continue
        size = int(rng.integers(min_size, m + 1))
        I = np.sort(rng.choice(m, size=size, replace=False))
        B = A[I] @ Q
        lo, hi = sym_eig_bounds(B.T @ B)
        theta_minus = min(theta_minus, lo)
        theta_plus = max(theta_plus, hi)
        if size == m:
            delta_lb = max(delta_lb, _deviation(lo, hi))
        G_rows = True
    if G_rows is None:
        raise ParameterError("sampling never hit a support with nonvanishing frame columns")
    return RipReport(
        order=order,
        delta=float(delta_lb),
        theta_minus=float(theta_minus),
        theta_plus=float(theta_plus),
        min_subset_size=min_size,
        exhaustive=False,
        details={"half_rule": half_rule, "budget": budget, "seed": seed},
    )
