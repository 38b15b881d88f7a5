"""Polynomial Laplace solver via Vandermonde with Arnoldi.

The solution is sought as ``u = Re f`` with ``f`` expanded in a discretely
orthonormal polynomial basis built by Stieltjes orthogonalization on the
boundary nodes.  The fit is a real least-squares problem for the real and
imaginary parts of the coefficients.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import BoundarySample, ParametricCurve, sample_boundary
from .linalg import lstsq

__all__ = [
    "ArnoldiBasis",
    "HarmonicApproximant",
    "ArnoldiBreakdownWarning",
    "arnoldi_build",
    "arnoldi_eval",
    "default_points",
    "aliasing_ratio",
    "fit_harmonic",
    "fit_laplace_poly",
    "evaluate",
]

log = logging.getLogger(__name__)

BREAKDOWN_TOL = 1e-14
ALIAS_TOL = 0.9
_CHUNK = 4096


class ArnoldiBreakdownWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ArnoldiBasis:
    """Orthonormal polynomial basis on a node set.

    ``Q[:, j]`` holds the degree-``j`` basis polynomial at the nodes,
    normalized so that ``Q^H Q / M = I``.  ``H`` is the ``(n+1) x n``
    Hessenberg matrix of the three-term-free recurrence in the variable
    ``(z - center)/scale``.
    """

    Q: np.ndarray
    H: np.ndarray
    center: complex
    scale: float
    broke_down: bool = False

    @property
    def degree(self) -> int:
        return self.Q.shape[1] - 1

    @property
    def M(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True)
class HarmonicApproximant:
    """``u(z) = c0 + sum a_j Re phi_j(z) - b_j Im phi_j(z)``.

    The basis functions ``phi_j`` are the Arnoldi polynomials of degree
    ``1..npoly`` followed by the simple fractions ``1/(z - p)`` for each
    pole.  ``coeffs`` packs ``[c0, a_poly, b_poly, a_pole, b_pole]``; the
    complex coefficient of ``phi_j`` is ``a_j + i b_j``.
    """

    basis: ArnoldiBasis
    poles: np.ndarray
    coeffs: np.ndarray
    boundary_error: float
    residual_norm: float
    rank_deficient: bool = False
    validation: BoundarySample | None = field(default=None, repr=False)

    @property
    def M(self) -> int:
        return self.basis.M

    @property
    def npoly(self) -> int:
        return self.basis.degree

    @property
    def degree(self) -> int:
        """Total degree: polynomial degree plus number of finite poles."""
        return self.npoly + len(self.poles)

    def complex_coefficients(self) -> np.ndarray:
        n, p = self.npoly, len(self.poles)
        c = self.coeffs
        a = np.concatenate([c[1:1 + n], c[1 + 2 * n:1 + 2 * n + p]])
        b = np.concatenate([c[1 + n:1 + 2 * n], c[1 + 2 * n + p:]])
        return np.concatenate([[c[0]], a + 1j * b])

    def analytic(self, points) -> np.ndarray:
        """Analytic ``f`` with ``Re f = u``; its imaginary constant is not fitted."""
        z = np.atleast_1d(np.asarray(points, dtype=complex))
        c = self.complex_coefficients()
        out = np.empty(len(z), dtype=complex)
        for s in range(0, len(z), _CHUNK):
            Phi = _complex_columns(self.basis, self.poles, z[s:s + _CHUNK])
            out[s:s + _CHUNK] = Phi @ c
        return out

    def __call__(self, points):
        return evaluate(self, points)


def default_points(n: int) -> int:
    """Default boundary sample count: at least 1500, at least 2(2n+1)."""
    return max(1500, 2 * (2 * n + 1))


def arnoldi_build(sample: BoundarySample | np.ndarray, n: int) -> ArnoldiBasis:
    """Stieltjes-orthogonalize ``1, s, s^2, ...`` on the sample nodes.

    Two passes of classical Gram-Schmidt per column.  If a new column's
    discrete norm drops below ``BREAKDOWN_TOL`` the degree is capped and
    ``broke_down`` is set.
    """
    z = np.asarray(getattr(sample, "nodes", sample), dtype=complex)
    M = len(z)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if M < 2 * (n + 1):
        raise ValueError(f"{M} nodes is too few for degree {n}; need at least {2 * (n + 1)}")
    center = complex(z.mean())
    scale = float(np.abs(z - center).max())
    if scale == 0:
        raise ValueError("nodes are all identical")
    s = (z - center) / scale

    Q = np.empty((M, n + 1), dtype=complex, order="F")
    H = np.zeros((n + 1, n), dtype=complex)
    Q[:, 0] = 1.0
    broke = False
    for k in range(1, n + 1):
        v = s * Q[:, k - 1]
        for _ in range(2):
            # conjugate the vector, not the block, to avoid copying Q
            h = (v.conj() @ Q[:, :k]).conj() / M
            v -= Q[:, :k] @ h
            H[:k, k - 1] += h
        nrm = np.linalg.norm(v) / np.sqrt(M)
        if nrm < BREAKDOWN_TOL:
            warnings.warn(f"Arnoldi breakdown at degree {k}; basis capped at {k - 1}",
                          ArnoldiBreakdownWarning, stacklevel=2)
            Q, H, broke = Q[:, :k], H[:k, :k - 1], True
            break
        H[k, k - 1] = nrm
        Q[:, k] = v / nrm
    return ArnoldiBasis(Q, H, center, scale, broke)


def arnoldi_eval(basis: ArnoldiBasis, points) -> np.ndarray:
    """Evaluate the basis at arbitrary points by replaying the recurrence."""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    s = (z - basis.center) / basis.scale
    n = basis.degree
    H = basis.H
    W = np.empty((len(z), n + 1), dtype=complex, order="F")
    W[:, 0] = 1.0
    for k in range(1, n + 1):
        v = s * W[:, k - 1] - W[:, :k] @ H[:k, k - 1]
        W[:, k] = v / H[k, k - 1]
    return W


def _complex_columns(basis, poles, z):
    P = arnoldi_eval(basis, z)
    if len(poles):
        R = 1.0 / (z[:, None] - np.asarray(poles)[None, :])
        P = np.hstack([P, R])
    return P


def _real_columns(basis, poles, z):
    P = _complex_columns(basis, poles, z)
    # Im of the constant column omitted: f is determined up to an imaginary constant
    n = basis.degree
    cols = [P[:, :1].real, P[:, 1:n + 1].real, -P[:, 1:n + 1].imag]
    if len(poles):
        R = P[:, n + 1:]
        cols += [R.real, -R.imag]
    return np.hstack(cols)


def evaluate(approx: HarmonicApproximant, points) -> np.ndarray:
    """Harmonic approximation ``u`` at the given points."""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.empty(len(z))
    for s in range(0, len(z), _CHUNK):
        out[s:s + _CHUNK] = _real_columns(approx.basis, approx.poles, z[s:s + _CHUNK]) @ approx.coeffs
    return out


def boundary_data(h, z) -> np.ndarray:
    vals = np.asarray(h(np.asarray(z, dtype=complex)), dtype=float)
    if vals.shape == ():
        vals = np.full(len(z), float(vals))
    return vals


def aliasing_ratio(basis: ArnoldiBasis, top: int | None = None) -> float:
    """``||Q_top^T Q_1||_2 / M`` over the nonconstant columns.

    The real fitting matrix ``[Re Q, -Im Q]`` has squared condition number
    ``(M + ||T||)/(M - ||T||)`` with ``T = Q_1^T Q_1``, so a ratio near 1
    means the nodes are too sparse for the degree.  Only the ``top``
    highest-degree columns are tested, which is where aliasing starts.
    """
    n = basis.degree
    if n == 0:
        return 0.0
    k = max(1, n // 8) if top is None else min(top, n)
    Q1 = basis.Q[:, 1:]
    T = Q1[:, n - k:].T @ Q1
    return float(np.linalg.norm(T, 2) / basis.M)


def fit_harmonic(curve: ParametricCurve, h, n: int, poles=(), M: int | None = None,
                 sample: BoundarySample | None = None, max_points: int = 64000,
                 min_points: int = 0) -> HarmonicApproximant:
    """Least-squares fit of ``h`` by ``Re`` of polynomial plus simple fractions.

    Without an explicit ``M`` or ``sample`` the node count starts at
    :func:`default_points` and doubles while :func:`aliasing_ratio` exceeds
    ``ALIAS_TOL`` (up to ``max_points``).  ``boundary_error`` is the sup-norm
    misfit on a held-out grid of ``4M`` nodes interleaved with the fitting
    nodes.  ``min_points`` raises the adaptive starting count, which lets a
    degree sweep reuse the node count found for the previous degree.
    """
    poles = np.asarray(poles, dtype=complex).ravel()
    adaptive = M is None and sample is None
    if sample is None:
        M = max(default_points(n + len(poles)), min_points) if M is None else M
        sample = sample_boundary(curve, M)
    basis = arnoldi_build(sample, n)
    while adaptive and sample.M * 2 <= max_points and aliasing_ratio(basis) > ALIAS_TOL:
        log.debug("degree %d undersampled by %d nodes; doubling", n, sample.M)
        sample = sample_boundary(curve, 2 * sample.M)
        basis = arnoldi_build(sample, n)

    A = _real_columns(basis, poles, sample.nodes)
    rhs = boundary_data(h, sample.nodes)
    if A.shape[0] < A.shape[1]:
        raise ValueError(f"{A.shape[0]} samples cannot determine {A.shape[1]} unknowns")
    sol = lstsq(A, rhs)
    if sol.rank_deficient:
        log.debug("rank-deficient fit: rank %d of %d", sol.rank, A.shape[1])

    approx = HarmonicApproximant(basis, poles, sol.coefficients, np.nan, sol.residual_norm,
                                 sol.rank_deficient)
    validation = sample_boundary(curve, 4 * sample.M, offset=0.5)
    err = np.abs(evaluate(approx, validation.nodes) - boundary_data(h, validation.nodes))
    return replace(approx, boundary_error=float(err.max()), validation=validation)


def fit_laplace_poly(curve: ParametricCurve, h, n: int, M: int | None = None) -> HarmonicApproximant:
    """Solve ``Laplace u = 0`` in the curve's interior with ``u = h`` on it, ``u ~ Re p``.

    ``h`` maps an array of complex boundary points to real values.
    """
    return fit_harmonic(curve, h, n, (), M)
