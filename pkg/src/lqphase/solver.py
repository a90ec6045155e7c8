"""Solvers for the lq-analysis magnitude-fidelity model.

Two routes are provided.  A certified global oracle for the noiseless model
enumerates measurement sign patterns (the global sign is quotiented out by
fixing the first sign) and, for each consistent linear system, exploits the
concavity of t -> t^q on [0, inf): on an affine set the objective attains its
minimum where n - m coordinates of the analysis vector vanish, so all such
zero patterns are enumerated, with a minimum-norm fallback guarding
rank-degenerate cells.  A practical iteratively reweighted least-squares
scheme with an alternating sign step handles sizes beyond the oracle guard;
it carries no optimality certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

import numpy as np

from .errors import (
    DegenerateProblemError,
    InfeasibleProblemError,
    ParameterError,
    ResourceBudgetError,
)
from .frames import TightFrame
from .linalg import numerical_rank
from .measurement import PhaselessProblem
from .signals import _check_q, lq_quasinorm

ORACLE_MAX_M = 10
FEAS_RTOL = 1e-8


@dataclass(frozen=True)
class SolverResult:
    x_hat: np.ndarray
    objective: float
    feasibility: float  # || |A x_hat| - b ||_2
    method: str
    certificate: dict | None = None
    iterations: int = 0


@dataclass(frozen=True)
class IrlsOptions:
    max_iters: int = 500
    eps0: float = 1.0
    decay: float = 0.7
    reg: float | None = None  # default 1e-3 * ||b||^2, decays with the smoothing
    restarts: int = 10
    seed: int = 0
    tol: float = 1e-8

    def validate(self) -> None:
        if min(self.max_iters, self.restarts) < 1 or min(self.eps0, self.tol) <= 0:
            raise ParameterError("irls options must be positive")
        if not (0.0 < self.decay < 1.0):
            raise ParameterError("decay must lie in (0, 1)")


def solve_affine_lq_oracle(
    A: np.ndarray,
    c: np.ndarray,
    F: TightFrame,
    q: float,
    support_budget: int = 10**6,
) -> tuple[np.ndarray, float, tuple[int, ...] | None]:
    """Global minimum of the analysis quasi-norm over the affine set {Ax = c}.

    Returns (minimizer, objective, zero_set); zero_set is None when the
    winner is the minimum-norm fallback or the affine set is a single point.
    """
    _check_q(q)
    A = np.asarray(A, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if c.shape != (m,):
        raise ParameterError(f"c must have length {m}, got {c.shape}")
    rank = numerical_rank(np.linalg.svd(A, compute_uv=False))

    if m > n:
        x_ls, *_ = np.linalg.lstsq(A, c, rcond=None)
        if np.linalg.norm(A @ x_ls - c) > FEAS_RTOL * max(1.0, np.linalg.norm(c)):
            raise InfeasibleProblemError("c is not in the range of the tall matrix A")
        if rank < n:
            raise DegenerateProblemError("tall system is rank-deficient")
        return x_ls, lq_quasinorm(F.D.T @ x_ls, q), None
    if rank < m:
        raise DegenerateProblemError("A must have full row rank")

    free = n - m
    x_mn, *_ = np.linalg.lstsq(A, c, rcond=None)
    if free == 0:
        return x_mn, lq_quasinorm(F.D.T @ x_mn, q), None

    if comb(F.N, free) > support_budget:
        raise ResourceBudgetError(
            f"C({F.N},{free}) zero patterns exceed the budget {support_budget}"
        )
    best_x = None
    best_obj = np.inf
    best_Z: tuple[int, ...] | None = None
    rhs = np.concatenate([c, np.zeros(free)])
    c_scale = max(1.0, float(np.linalg.norm(c)))
    for Z in combinations(range(F.N), free):
        M = np.vstack([A, F.D[:, list(Z)].T])
        try:
            x = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        if np.linalg.norm(A @ x - c) > FEAS_RTOL * c_scale:
            continue
        obj = lq_quasinorm(F.D.T @ x, q)
        if obj < best_obj - 1e-15:
            best_x, best_obj, best_Z = x, obj, Z
    # minimum-norm fallback guards rank-degenerate cells; zero-pattern
    # candidates win ties so the certificate stays informative
    mn_obj = lq_quasinorm(F.D.T @ x_mn, q)
    if best_x is None or mn_obj < best_obj - 1e-12:
        best_x, best_obj, best_Z = x_mn, mn_obj, None
    return best_x, best_obj, best_Z


def solve_oracle_noiseless(
    P: PhaselessProblem,
    max_m: int = ORACLE_MAX_M,
    support_budget: int = 10**6,
) -> SolverResult:
    """Certified global solution of the noiseless model by sign enumeration.

    Sign patterns fix the first component to +1 (global sign ambiguity);
    infeasible patterns of overdetermined systems are screened by projection
    residual before the inner oracle runs.
    """
    if P.eps > 1e-12:
        raise ParameterError("the certified oracle only handles the noiseless model (eps = 0)")
    A, b, F = P.A, P.b, P.frame
    m, n = A.shape
    if m > max_m:
        raise ResourceBudgetError(f"m={m} exceeds the sign enumeration guard ({max_m})")

    screen = None
    if m > n:
        Qa, _ = np.linalg.qr(A)
        b_scale = max(np.linalg.norm(b), 1e-30)

        def screen(cv: np.ndarray) -> bool:
            return np.linalg.norm(cv - Qa @ (Qa.T @ cv)) > FEAS_RTOL * b_scale

    best: tuple[float, np.ndarray, tuple[float, ...], tuple[int, ...] | None] | None = None
    for tail in product((1.0, -1.0), repeat=m - 1):
        s = np.array((1.0,) + tail)
        cv = s * b
        if screen is not None and screen(cv):
            continue
        try:
            x, obj, Z = solve_affine_lq_oracle(A, cv, F, P.q, support_budget)
        except (InfeasibleProblemError, DegenerateProblemError):
            continue
        if best is None or obj < best[0] - 1e-15:
            best = (obj, x, tuple(s), Z)
    if best is None:
        raise InfeasibleProblemError("no sign pattern admits a solution; measurements corrupted?")
    obj, x, s, Z = best
    feas = float(np.linalg.norm(np.abs(A @ x) - b))
    cert = {
        "signs": s,
        "zero_set": Z,
        "minimum_norm_fallback": bool(Z is None and n > m),
    }
    return SolverResult(x_hat=x, objective=obj, feasibility=feas, method="oracle",
                        certificate=cert, iterations=0)


def irls_weighted_step(
    A: np.ndarray,
    D: np.ndarray,
    p: np.ndarray,
    b: np.ndarray,
    x: np.ndarray,
    q: float,
    eps_s: float,
    lam: float,
) -> np.ndarray:
    """One reweighted least-squares update for fixed signs and smoothing."""
    w = ((D.T @ x) ** 2 + eps_s**2) ** (q / 2.0 - 1.0)
    H = A.T @ A + lam * (D * w[None, :]) @ D.T
    return np.linalg.solve(H, A.T @ (p * b))


def irls_surrogate(
    A: np.ndarray,
    D: np.ndarray,
    p: np.ndarray,
    b: np.ndarray,
    x: np.ndarray,
    q: float,
    eps_s: float,
    lam: float,
) -> float:
    """Smoothed objective majorized by the weighted step; nonincreasing under
    irls_weighted_step for fixed (p, eps_s, lam)."""
    resid = p * (A @ x) - b
    smooth = np.sum(((D.T @ x) ** 2 + eps_s**2) ** (q / 2.0))
    return float(resid @ resid + lam * (2.0 / q) * smooth)


def _sign_flip_descent(A: np.ndarray, b: np.ndarray, p: np.ndarray,
                       max_sweeps: int = 8) -> np.ndarray:
    """1-opt descent on the least-squares residual over sign patterns.

    Escapes alternating fixed points whose sign pattern is locally wrong;
    deterministic (first improving flip wins within a sweep).
    """
    Qa, Ra = np.linalg.qr(A)

    def resid(pattern: np.ndarray) -> float:
        cv = pattern * b
        return float(np.linalg.norm(cv - Qa @ (Qa.T @ cv)))

    best = resid(p)
    p = p.copy()
    for _ in range(max_sweeps):
        improved = False
        for i in range(A.shape[0]):
            p[i] = -p[i]
            r = resid(p)
            if r < best - 1e-14:
                best = r
                improved = True
            else:
                p[i] = -p[i]
        if not improved:
            break
    return p


def solve_irls(P: PhaselessProblem, opts: IrlsOptions | None = None) -> SolverResult:
    """Alternating sign / reweighted least-squares solver.

    Each outer iteration sets p = sign(Ax) (zeros map to +1), then solves the
    strictly convex weighted problem; the smoothing and the regularization
    decay geometrically together so the fixed point approaches a stationary
    point of the unsmoothed objective.  Restarts combine the spectral
    direction, perturbations of it, fresh random directions and random sign
    patterns; restarts that stall at an infeasible sign pattern get one
    round of 1-opt sign-flip descent.  Among all iterates of all restarts the
    returned one minimizes (constraint violation, objective) lexicographically,
    so it is never less feasible than the best iterate seen.
    """
    opts = opts or IrlsOptions()
    opts.validate()
    _check_q(P.q)
    A, b, D = P.A, P.b, P.frame.D
    m, n = A.shape
    if np.linalg.norm(b) == 0.0:
        return SolverResult(x_hat=np.zeros(n), objective=0.0, feasibility=0.0,
                            method="irls", iterations=0)
    lam0 = opts.reg if opts.reg is not None else 1e-3 * float(b @ b)
    spectral = A.T @ ((b**2)[:, None] * A)
    _, V = np.linalg.eigh(spectral)
    x_spec = float(np.linalg.norm(b)) * V[:, -1]

    best_key: tuple[float, float] | None = None
    best_x = None
    best_iters = 0
    scale = float(np.linalg.norm(b))

    def converge(x: np.ndarray) -> np.ndarray:
        nonlocal best_key, best_x, best_iters
        eps_s = opts.eps0
        for t in range(opts.max_iters):
            # lam * w stays O(lam0) at analysis zeros and vanishes elsewhere,
            # so the data term is asymptotically unbiased
            lam = lam0 * (eps_s / opts.eps0) ** (2.0 - P.q)
            p = np.where(A @ x >= 0.0, 1.0, -1.0)
            x_new = irls_weighted_step(A, D, p, b, x, P.q, eps_s, lam)
            feas = float(np.linalg.norm(np.abs(A @ x_new) - b))
            key = (max(0.0, feas - P.eps), lq_quasinorm(D.T @ x_new, P.q))
            if best_key is None or key < best_key:
                best_key, best_x, best_iters = key, x_new, t + 1
            # exit only once the continuation has reached its floor
            if np.linalg.norm(x_new - x) <= opts.tol and eps_s <= opts.tol * (1.0 + 1e-9):
                return x_new
            x = x_new
            eps_s = max(eps_s * opts.decay, opts.tol)
        return x

    for j in range(opts.restarts):
        if j == 0:
            x = x_spec.copy()
        else:
            rng = np.random.default_rng(np.random.SeedSequence(entropy=(opts.seed, j)))
            if j % 3 == 1:  # perturbed spectral direction
                x = x_spec + (0.5 + j / opts.restarts) * np.linalg.norm(x_spec) * rng.standard_normal(n)
            elif j % 3 == 2:  # fresh random direction; breaks bad sign-pattern basins
                g = rng.standard_normal(n)
                x = scale * g / np.linalg.norm(g)
            else:  # least-squares fit of a random sign pattern
                p0 = rng.integers(0, 2, size=m) * 2.0 - 1.0
                x, *_ = np.linalg.lstsq(A, p0 * b, rcond=None)
        x = converge(x)
        feas = float(np.linalg.norm(np.abs(A @ x) - b))
        if feas > max(P.eps, 1e-7 * scale):
            p = np.where(A @ x >= 0.0, 1.0, -1.0)
            p_better = _sign_flip_descent(A, b, p)
            if not np.array_equal(p_better, p):
                x0, *_ = np.linalg.lstsq(A, p_better * b, rcond=None)
                converge(x0)
    assert best_x is not None
    feas = float(np.linalg.norm(np.abs(A @ best_x) - b))
    return SolverResult(
        x_hat=best_x,
        objective=lq_quasinorm(D.T @ best_x, P.q),
        feasibility=feas,
        method="irls",
        iterations=best_iters,
    )


def solve(P: PhaselessProblem, method: str = "oracle", **kwargs) -> SolverResult:
    if method == "oracle":
        return solve_oracle_noiseless(P, **kwargs)
    if method == "irls":
        return solve_irls(P, **kwargs)
    raise ParameterError(f"unknown method {method!r}; choose 'oracle' or 'irls'")
