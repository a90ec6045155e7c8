"""Small dense linear-algebra helpers used across the package.

Rank decisions use a relative singular-value cutoff (default 1e-10 times
the largest singular value), matching the frame-validation tolerance.
"""

from __future__ import annotations

import numpy as np

RANK_RTOL = 1e-10


def numerical_rank(s: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Rank from a singular-value array."""
    if s.size == 0:
        return 0
    smax = float(s[0])
    if smax <= 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * smax))


def null_space(M: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (columns) of {z : Mz = 0} for a dense p x n matrix.

    An empty matrix (p = 0) has the full space as its null space.
    """
    M = np.asarray(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=float if not np.iscomplexobj(M) else complex)
    _, s, vh = np.linalg.svd(M)
    r = numerical_rank(s, rtol)
    return vh[r:].conj().T


def column_space(M: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of M."""
    M = np.asarray(M)
    if M.shape[1] == 0:
        return np.zeros((M.shape[0], 0), dtype=M.dtype)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    r = numerical_rank(s, rtol)
    return u[:, :r]


def sym_eig_bounds(M: np.ndarray) -> tuple[float, float]:
    """(min, max) eigenvalue of a small symmetric PSD matrix.

    Closed forms for d <= 2 keep the subset/support enumerations cheap.
    """
    d = M.shape[0]
    if d == 0:
        raise ValueError("empty matrix has no eigenvalues")
    if d == 1:
        v = float(M[0, 0])
        return v, v
    if d == 2:
        tr = float(M[0, 0] + M[1, 1])
        # discriminant (a-c)^2 + 4b^2 is nonnegative by construction
        disc = float((M[0, 0] - M[1, 1]) ** 2 + 4.0 * M[0, 1] ** 2)
        root = np.sqrt(disc)
        return 0.5 * (tr - root), 0.5 * (tr + root)
    w = np.linalg.eigvalsh(M)
    return float(w[0]), float(w[-1])


def batch_sym_eig_bounds(Ms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sym_eig_bounds for a stack of (B, d, d) symmetric matrices."""
    d = Ms.shape[-1]
    if d == 1:
        v = Ms[:, 0, 0]
        return v.copy(), v.copy()
    if d == 2:
        tr = Ms[:, 0, 0] + Ms[:, 1, 1]
        disc = (Ms[:, 0, 0] - Ms[:, 1, 1]) ** 2 + 4.0 * Ms[:, 0, 1] ** 2
        root = np.sqrt(np.maximum(disc, 0.0))
        return 0.5 * (tr - root), 0.5 * (tr + root)
    w = np.linalg.eigvalsh(Ms)
    return w[:, 0], w[:, -1]
