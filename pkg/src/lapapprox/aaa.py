"""AAA rational approximation in barycentric form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import generalized_eig_arrowhead, min_singular_vector

__all__ = ["BarycentricRational", "aaa_fit", "eval_barycentric", "poles", "residues"]

MMAX_DEFAULT = 200


@dataclass(frozen=True)
class BarycentricRational:
    """``r(z) = sum(w_j f_j/(z - z_j)) / sum(w_j/(z - z_j))``.

    ``history[k]`` is the maximum residual on the data after ``k + 1``
    support points; ``tol_achieved`` is the final one relative to
    ``max|F|``.
    """

    support: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    tol_achieved: float
    history: tuple[float, ...] = ()
    converged: bool = True

    @property
    def degree(self) -> int:
        return len(self.support) - 1

    def __call__(self, z):
        return eval_barycentric(self, z)

    def poles(self):
        return poles(self)


def eval_barycentric(r: BarycentricRational, points, node_rtol: float = 1e-15):
    """Evaluate ``r``; points within ``node_rtol`` (relative) of a support point
    return the corresponding value.  Poles give ``inf``/``nan``, never raise."""
    z = np.asarray(points, dtype=complex)
    zv = z.ravel()
    zj, fj, wj = r.support, r.values, r.weights
    with np.errstate(divide="ignore", invalid="ignore"):
        C = 1.0 / (zv[:, None] - zj[None, :])
        out = (C @ (wj * fj)) / (C @ wj)
    scale = max(np.abs(zj).max(), 1.0)
    hit_i, hit_j = np.nonzero(np.abs(zv[:, None] - zj[None, :]) <= node_rtol * scale)
    out[hit_i] = fj[hit_j]
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def aaa_fit(Z, F, tol: float = 1e-13, mmax: int = MMAX_DEFAULT) -> BarycentricRational:
    """Greedy AAA fit of data ``F`` on distinct points ``Z``.

    Each step moves the point of largest residual (lowest index on ties)
    into the support set and takes the weights as the minimal right
    singular vector of the Loewner matrix on the remaining points.  Stops
    when the residual is at most ``tol*max|F|`` or the degree reaches
    ``mmax``; in the latter case ``converged`` is False.
    """
    Z = np.asarray(Z, dtype=complex).ravel()
    F = np.asarray(F, dtype=complex).ravel()
    if len(Z) != len(F):
        raise ValueError("Z and F differ in length")
    if len(Z) < 2:
        raise ValueError("need at least two data points")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if len(np.unique(Z)) != len(Z):
        raise ValueError("sample points must be distinct")

    N = len(Z)
    fmax = np.abs(F).max()
    abstol = tol * fmax
    mask = np.ones(N, dtype=bool)  # points not yet in the support set
    R = np.full(N, F.mean())
    idx = []
    C = np.empty((N, 0), dtype=complex)
    history = []
    w = np.ones(1, dtype=complex)
    converged = False
    m_cap = min(mmax + 1, N)

    while True:
        err = np.abs(F - R)
        err[~mask] = 0.0
        j = int(np.argmax(err))
        idx.append(j)
        mask[j] = False
        with np.errstate(divide="ignore", invalid="ignore"):
            C = np.hstack([C, (1.0 / (Z - Z[j]))[:, None]])
        C[j, :] = 0.0
        zj, fj = Z[idx], F[idx]
        A = (F[mask, None] - fj[None, :]) * C[mask, :]
        if A.shape[0] >= A.shape[1]:
            w = min_singular_vector(A)
        else:
            w = np.linalg.svd(A)[2][-1].conj()
        num = C @ (w * fj)
        den = C @ w
        with np.errstate(divide="ignore", invalid="ignore"):
            R = np.where(mask, num / den, F)
        res = float(np.nanmax(np.where(mask, np.abs(F - R), 0.0)))
        if not np.isfinite(res):
            res = np.inf
        history.append(res)
        if res <= abstol:
            converged = True
            break
        if len(idx) >= m_cap:
            break

    zj, fj = Z[idx], F[idx]
    return BarycentricRational(zj, fj, w, history[-1] / fmax if fmax else 0.0, tuple(history), converged)


def poles(r: BarycentricRational) -> np.ndarray:
    """Finite poles of ``r`` (zeros of the barycentric denominator)."""
    if len(r.support) < 2:
        return np.empty(0, dtype=complex)
    return generalized_eig_arrowhead(r.support, r.weights)


def residues(r: BarycentricRational, pol=None) -> np.ndarray:
    """Residues at the given poles, ``n(p)/d'(p)`` in barycentric form."""
    pol = poles(r) if pol is None else np.asarray(pol, dtype=complex)
    zj, fj, wj = r.support, r.values, r.weights
    with np.errstate(divide="ignore", invalid="ignore"):
        D = 1.0 / (pol[:, None] - zj[None, :])
        num = D @ (wj * fj)
        dden = -(D**2) @ wj
    return num / dden
