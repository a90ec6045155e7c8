"""Null-space splitting diagnostics for magnitude-only recovery.

Real case: recovery of every dictionary-k-sparse signal up to sign is
equivalent to strict domination ||D^T(u+v)||_q^q < ||D^T(u-v)||_q^q for all
admissible splittings, where u lies in the null space of a row subset of A,
v in the null space of the complementary rows, and u+v is dictionary-sparse.
The falsifier searches for witnesses of failure; because the condition
quantifies over a continuum, absence of a counterexample is evidence, not
proof, and results always carry the search budget and mode.

Complex case: only witness evaluation is provided (block partitions of the
rows with per-block unimodular constants); the combinatorics of a search are
out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from math import comb

import numpy as np

from .errors import InvalidWitnessError, ParameterError, ResourceBudgetError
from .frames import TightFrame
from .linalg import column_space, null_space
from .signals import _check_q, lq_quasinorm

STRICTNESS_TOL = 1e-12
MEMBERSHIP_RTOL = 1e-8
NULLSPACE_TOL = 1e-9
ALL_SUBSETS_MAX_M = 14


@dataclass(frozen=True)
class NspWitness:
    """Candidate violation of the real splitting condition.

    Lambda indexes rows of A (0-based); u must lie in N(A_Lambda), v in
    N(A_complement), and u+v must be dictionary-k-sparse.
    """

    Lambda: tuple[int, ...]
    u: np.ndarray
    v: np.ndarray
    q: float
    k: int
    lhs: float | None = None
    rhs: float | None = None
    violated: bool | None = None


@dataclass(frozen=True)
class ComplexNspWitness:
    """Candidate violation of the complex partition condition (0-based pair)."""

    Omega: tuple[tuple[int, ...], ...]
    phis: tuple[np.ndarray, ...]
    ds: np.ndarray
    pair: tuple[int, int]
    k: int
    lhs: float | None = None
    rhs: float | None = None
    violated: bool | None = None


def dictionary_sparse_distance(x: np.ndarray, D: np.ndarray, k: int,
                               support_budget: int = 10**6) -> float:
    """Distance from x to the set of dictionary-k-sparse vectors, by
    exhaustive support search."""
    x = np.asarray(x)
    N = D.shape[1]
    if comb(N, k) > support_budget:
        raise ResourceBudgetError(f"C({N},{k}) supports exceed the budget {support_budget}")
    best = np.inf
    for S in combinations(range(N), k):
        Q = column_space(D[:, list(S)])
        resid = x - Q @ (Q.conj().T @ x)
        best = min(best, float(np.linalg.norm(resid)))
        if best == 0.0:
            break
    return best


def _rows(A: np.ndarray, idx) -> np.ndarray:
    return A[list(idx), :] if len(idx) else A[:0, :]


def nsp_real_evaluate(A: np.ndarray, F: TightFrame, w: NspWitness) -> NspWitness:
    """Validate a witness and decide whether it violates strict domination.

    violated means the strict inequality fails, i.e. lhs >= rhs - 1e-12.
    """
    A = np.asarray(A, dtype=float)
    m = A.shape[0]
    q = _check_q(w.q)
    u = np.asarray(w.u, dtype=float)
    v = np.asarray(w.v, dtype=float)
    Lam = tuple(sorted(int(i) for i in w.Lambda))
    if any(i < 0 or i >= m for i in Lam):
        raise InvalidWitnessError(f"Lambda {Lam} is not a subset of [0, {m})")
    comp = tuple(i for i in range(m) if i not in set(Lam))
    scale = max(np.linalg.norm(u), np.linalg.norm(v))
    if np.linalg.norm(u) <= NULLSPACE_TOL * max(1.0, scale):
        raise InvalidWitnessError("u must be nonzero")
    if np.linalg.norm(v) <= NULLSPACE_TOL * max(1.0, scale):
        raise InvalidWitnessError("v must be nonzero")
    if np.linalg.norm(_rows(A, Lam) @ u) > NULLSPACE_TOL * max(1.0, np.linalg.norm(u)):
        raise InvalidWitnessError("u is not in the null space of the Lambda rows")
    if np.linalg.norm(_rows(A, comp) @ v) > NULLSPACE_TOL * max(1.0, np.linalg.norm(v)):
        raise InvalidWitnessError("v is not in the null space of the complement rows")
    s = u + v
    ns = np.linalg.norm(s)
    if ns > 0:
        dist = dictionary_sparse_distance(s, F.D, w.k)
        if dist > MEMBERSHIP_RTOL * ns:
            raise InvalidWitnessError(
                f"u+v is not dictionary-{w.k}-sparse (relative distance {dist / ns:.2e})"
            )
    lhs = lq_quasinorm(F.D.T @ s, q)
    rhs = lq_quasinorm(F.D.T @ (u - v), q)
    return replace(w, Lambda=Lam, lhs=lhs, rhs=rhs, violated=bool(lhs >= rhs - STRICTNESS_TOL))


def _lambda_list(m: int, k: int, mode: str) -> list[tuple[int, ...]]:
    if mode == "card_at_most_k":
        max_size = min(k, m)
    elif mode == "all_subsets":
        if m > ALL_SUBSETS_MAX_M:
            raise ResourceBudgetError(
                f"m={m} exceeds the all-subsets guard ({ALL_SUBSETS_MAX_M})"
            )
        max_size = m
    else:
        raise ParameterError(f"lambda_mode must be 'card_at_most_k' or 'all_subsets', got {mode!r}")
    lams: list[tuple[int, ...]] = []
    for size in range(0, max_size + 1):
        lams.extend(combinations(range(m), size))
    return lams


def _coordinate_ascent(f, c0: np.ndarray, max_sweeps: int = 40) -> tuple[np.ndarray, float]:
    c = c0 / np.linalg.norm(c0)
    fc = f(c)
    step = 0.5
    dim = c.size
    for _ in range(max_sweeps):
        improved = False
        for i in range(dim):
            for sgn in (1.0, -1.0):
                cand = c.copy()
                cand[i] += sgn * step
                cand /= np.linalg.norm(cand)
                fcand = f(cand)
                if fcand > fc:
                    c, fc = cand, fcand
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-7:
                break
    return c, fc


def nsp_real_falsify(
    A: np.ndarray,
    F: TightFrame,
    k: int,
    q: float,
    budget: int = 10**4,
    seed: int = 0,
    lambda_mode: str = "card_at_most_k",
) -> NspWitness | None:
    """Search for a witness violating the strict splitting condition.

    For each row subset and each size-k support, witnesses are parametrized
    by null-space bases subject to the linear constraint that u+v lies in the
    span of the chosen frame columns; the quasi-norm gap is maximized on the
    unit sphere of that solution space by seeded restarts plus coordinate
    ascent.  Cells are scanned in a fixed order, so the first returned
    witness is deterministic for a given seed.  None means the budget was
    exhausted without finding a violation.
    """
    A = np.asarray(A, dtype=float)
    q = _check_q(q)
    m, n = A.shape
    if budget < 1:
        raise ParameterError("budget must be >= 1")
    lambdas = _lambda_list(m, k, lambda_mode)
    supports = list(combinations(range(F.N), k))
    null_cache: dict[tuple[int, ...], np.ndarray] = {}

    def nullsp(T: tuple[int, ...]) -> np.ndarray:
        if T not in null_cache:
            null_cache[T] = null_space(_rows(A, T))
        return null_cache[T]

    restarts = max(1, budget // max(1, len(lambdas) * len(supports)))
    cell_index = 0
    for Lam in lambdas:
        comp = tuple(i for i in range(m) if i not in set(Lam))
        U = nullsp(Lam)
        V = nullsp(comp)
        du, dv = U.shape[1], V.shape[1]
        if du == 0 or dv == 0:
            cell_index += len(supports)
            continue
        for S in supports:
            cell_index += 1
            Q = column_space(F.D[:, list(S)])
            P_out = np.eye(n) - Q @ Q.T
            # (a, b) must satisfy (I - P_S)(Ua + Vb) = 0
            K = np.hstack([P_out @ U, P_out @ V])
            W = null_space(K)
            if W.shape[1] == 0:
                continue
            Mu = U @ W[:du, :]
            Mv = V @ W[du:, :]
            Lp = F.D.T @ (Mu + Mv)
            Lm = F.D.T @ (Mu - Mv)

            def gap(c: np.ndarray) -> float:
                return float(np.sum(np.abs(Lp @ c) ** q) - np.sum(np.abs(Lm @ c) ** q))

            rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, cell_index)))
            for _ in range(restarts):
                c0 = rng.standard_normal(W.shape[1])
                if np.linalg.norm(c0) == 0.0:
                    continue
                c, fc = _coordinate_ascent(gap, c0)
                if fc < -STRICTNESS_TOL:
                    continue
                a = W[:du, :] @ c
                b = W[du:, :] @ c
                # null bases are orthonormal, so ||u|| = ||a|| and ||v|| = ||b||
                if np.linalg.norm(a) <= 1e-9 or np.linalg.norm(b) <= 1e-9:
                    continue
                u = Mu @ c
                v = Mv @ c
                ns = np.linalg.norm(u + v)
                if ns > 1e-12:
                    u, v = u / ns, v / ns
                witness = NspWitness(Lambda=Lam, u=u, v=v, q=q, k=k)
                checked = nsp_real_evaluate(A, F, witness)
                if checked.violated:
                    return checked
    return None


def nsp_complex_evaluate(A: np.ndarray, D: np.ndarray, w: ComplexNspWitness, q: float) -> ComplexNspWitness:
    """Validate a complex partition witness and compare the designated pair.

    All blocks must annihilate their vectors, the unimodular constants must
    be pairwise distinct, and the block-difference ratios must agree and be
    dictionary-k-sparse.  violated means lhs >= rhs - 1e-12 for the pair.
    """
    A = np.asarray(A, dtype=complex)
    D = np.asarray(D, dtype=complex)
    q = _check_q(q)
    m = A.shape[0]
    p = len(w.Omega)
    if p < 2:
        raise InvalidWitnessError("a partition witness needs at least two blocks")
    if len(w.phis) != p or len(w.ds) != p:
        raise InvalidWitnessError("phis and ds must have one entry per block")
    flat = sorted(i for block in w.Omega for i in block)
    if flat != list(range(m)):
        raise InvalidWitnessError("Omega is not a partition of the row indices")
    ds = np.asarray(w.ds, dtype=complex)
    if np.max(np.abs(np.abs(ds) - 1.0)) > 1e-9:
        raise InvalidWitnessError("constants must be unimodular")
    for i in range(p):
        for j in range(i + 1, p):
            if abs(ds[i] - ds[j]) <= 1e-9:
                raise InvalidWitnessError(f"constants {i} and {j} are not distinct")
    phis = [np.asarray(phi, dtype=complex) for phi in w.phis]
    for i, (block, phi) in enumerate(zip(w.Omega, phis)):
        if np.linalg.norm(phi) <= 1e-12:
            raise InvalidWitnessError(f"phi_{i} must be nonzero")
        if np.linalg.norm(_rows(A, block) @ phi) > NULLSPACE_TOL * max(1.0, np.linalg.norm(phi)):
            raise InvalidWitnessError(f"phi_{i} is not annihilated by its block rows")
    ratios = [(phis[0] - phis[j]) / (ds[0] - ds[j]) for j in range(1, p)]
    scale = max(float(np.linalg.norm(r)) for r in ratios)
    if scale <= 1e-12:
        raise InvalidWitnessError("common ratio vanishes; witness requires a nonzero ratio")
    for j in range(1, len(ratios)):
        if np.linalg.norm(ratios[j] - ratios[0]) > 1e-9 * max(1.0, scale):
            raise InvalidWitnessError("block ratios are inconsistent")
    dist = dictionary_sparse_distance(ratios[0], D, w.k)
    if dist > MEMBERSHIP_RTOL * np.linalg.norm(ratios[0]):
        raise InvalidWitnessError(
            f"common ratio is not dictionary-{w.k}-sparse (relative distance "
            f"{dist / np.linalg.norm(ratios[0]):.2e})"
        )
    i, j = w.pair
    if not (0 <= i < p and 0 <= j < p and i != j):
        raise InvalidWitnessError(f"pair {w.pair} is not a valid distinct index pair")
    Dh = D.conj().T
    lhs = float(np.sum(np.abs(Dh @ (phis[i] - phis[j])) ** q))
    rhs = float(np.sum(np.abs(Dh @ (ds[j] * phis[i] - ds[i] * phis[j])) ** q))
    return replace(w, lhs=lhs, rhs=rhs, violated=bool(lhs >= rhs - STRICTNESS_TOL))
