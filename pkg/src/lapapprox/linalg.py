"""Dense complex kernels used by the solvers.

Least squares goes through a Householder QR with column pivoting
(LAPACK ``geqp3``); normal equations are never formed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = ["LstsqResult", "lstsq", "min_singular_vector", "generalized_eig_arrowhead"]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class LstsqResult:
    coefficients: np.ndarray
    residual_norm: float
    rank: int
    rank_deficient: bool


def lstsq(A, b, rcond: float | None = None) -> LstsqResult:
    """Minimize ``||A x - b||_2`` for a tall ``A`` (``rows >= cols >= 1``).

    Columns are equilibrated to unit 2-norm before factorization.  If the
    pivoted ``R`` reveals a numerical rank below ``cols`` (relative
    threshold ``rcond``, default ``max(rows, cols)*eps``) the minimum-norm
    solution is returned instead and ``rank_deficient`` is set.
    """
    A = np.asarray(A)
    b = np.asarray(b)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    m, n = A.shape
    if not (m >= n >= 1):
        raise ValueError(f"need rows >= cols >= 1, got {A.shape}")
    if b.shape != (m,):
        raise ValueError(f"right-hand side has shape {b.shape}, expected ({m},)")
    if rcond is None:
        rcond = max(m, n) * _EPS

    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    As = A / norms

    Q, R, perm = scipy.linalg.qr(As, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > rcond * diag[0])) if diag[0] > 0 else 0

    if rank == n:
        y = scipy.linalg.solve_triangular(R, Q.conj().T @ b)
        xs = np.empty(n, dtype=np.result_type(y, As))
        xs[perm] = y
        x = xs / norms
    else:
        # minimum norm refers to x itself, so solve the unscaled system
        x = scipy.linalg.lstsq(A, b, cond=rcond, lapack_driver="gelsd")[0]

    res = float(np.linalg.norm(A @ x - b))
    return LstsqResult(x, res, rank, rank < n)


def min_singular_vector(A) -> np.ndarray:
    """Unit right singular vector belonging to the smallest singular value."""
    A = np.asarray(A)
    m, n = A.shape
    if m < n:
        raise ValueError("need rows >= cols")
    if m > 2 * n:
        # SVD of the triangular factor is cheaper and gives the same V
        A = scipy.linalg.qr(A, mode="r")[0][:n]
    _, _, Vh = np.linalg.svd(A)
    v = Vh[-1].conj()
    return v / np.linalg.norm(v)


def generalized_eig_arrowhead(support, weights, inf_threshold: float = 1e13) -> np.ndarray:
    """Finite zeros of ``sum_j w_j/(z - z_j)``: the poles of a barycentric rational.

    Solves the ``(m+1) x (m+1)`` pencil ``E - lambda*B`` with
    ``E = [[0, w^T], [1, diag(z)]]`` and ``B = diag(0, 1, ..., 1)``; it has
    two infinite eigenvalues, which are discarded together with anything of
    magnitude above ``inf_threshold*max|z_j|``.
    """
    z = np.asarray(support, dtype=complex)
    w = np.asarray(weights, dtype=complex)
    m = len(z)
    if len(w) != m:
        raise ValueError("support and weights differ in length")
    if m <= 1:
        return np.empty(0, dtype=complex)
    if not np.any(w):
        raise ValueError("weights are all zero")
    E = np.zeros((m + 1, m + 1), dtype=complex)
    E[0, 1:] = w
    E[1:, 0] = 1
    E[1:, 1:] = np.diag(z)
    B = np.eye(m + 1, dtype=complex)
    B[0, 0] = 0
    with np.errstate(all="ignore"):
        lam = scipy.linalg.eigvals(E, B)
    scale = max(np.abs(z).max(), 1.0)
    keep = np.isfinite(lam) & (np.abs(lam) <= inf_threshold * scale)
    return lam[keep]
