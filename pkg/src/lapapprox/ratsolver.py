"""AAA-least-squares Laplace solver.

Candidate poles come from AAA (applied to the boundary data or to the
Schwarz data ``conj(Z)``) or, for the inverted ellipse, from the known
branch cuts.  Poles inside the domain are discarded and ``u`` is fitted as
``Re`` of a low-degree polynomial plus simple fractions.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .aaa import aaa_fit, poles as aaa_poles
from .geometry import INVERTED_ELLIPSE, BoundarySample, ParametricCurve, sample_boundary, winding_number
from .polysolver import HarmonicApproximant, boundary_data, fit_harmonic

__all__ = [
    "PoleSource",
    "PoleBasis",
    "EmptyPoleBasisWarning",
    "branch_cut_poles",
    "exterior_poles",
    "select_poles",
    "companion_degree",
    "fit_laplace_rational",
    "pole_budget",
    "poles_for_degree",
]

log = logging.getLogger(__name__)

# poles closer than this (relative to the curve size) to a node are treated as on the boundary
ON_BOUNDARY_RTOL = 1e-10


class PoleSource(str, Enum):
    FROM_DATA = "from_data"
    FROM_SCHWARZ = "from_schwarz"
    EXACT_BRANCH_CUT = "exact_branch_cut"


class EmptyPoleBasisWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class PoleBasis:
    poles: np.ndarray
    source: PoleSource
    discarded: int = 0

    def __len__(self):
        return len(self.poles)


def branch_cut_poles(n: int, law: str = "equilibrium", sigma: float = 4.0, depth: float = 1.0) -> np.ndarray:
    """``2n`` real poles on ``(-inf, -1] U [1, inf)``, symmetric under negation.

    ``equilibrium`` places them at ``1/cos(phi_k)``, ``phi_k = (k + 1/2)*pi/(2n)``:
    the reciprocal of Chebyshev points on the slit ``[-1, 1]``, which is the
    equilibrium distribution of the ellipse/slit condenser.  ``exponential``
    uses ``+-(1 + depth*exp(-sigma*k/sqrt(n)))``, ``k = 0..n-1``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return np.empty(0, dtype=complex)
    if law == "equilibrium":
        phi = (np.arange(n) + 0.5) * np.pi / (2 * n)
        right = 1.0 / np.cos(phi)
    elif law == "exponential":
        k = np.arange(n)
        right = 1.0 + depth * np.exp(-sigma * k / np.sqrt(n))
    else:
        raise ValueError(f"unknown pole law {law!r}")
    return np.concatenate([right, -right]).astype(complex)


def exterior_poles(nodes, candidates) -> tuple[np.ndarray, int]:
    """Keep candidates with winding number 0 that are not numerically on the curve."""
    nodes = np.asarray(nodes, dtype=complex)
    p = np.asarray(candidates, dtype=complex).ravel()
    p = p[np.isfinite(p)]
    if len(p) == 0:
        return p, 0
    scale = np.abs(nodes - nodes.mean()).max()
    dist = np.abs(p[:, None] - nodes[None, :]).min(axis=1)
    on_curve = dist <= ON_BOUNDARY_RTOL * scale
    wind = winding_number(nodes, p)
    keep = ~on_curve & (np.abs(wind) < 0.5)
    return p[keep], int(len(p) - keep.sum())


def select_poles(curve: ParametricCurve, sample: BoundarySample, h=None, tol: float = 1e-10,
                 source: PoleSource | str = PoleSource.FROM_SCHWARZ, mmax: int = 200,
                 n: int | None = None, law: str = "equilibrium") -> PoleBasis:
    """Candidate exterior poles for the rational fit.

    ``from_data`` runs AAA on ``(Z, h(Z))``, ``from_schwarz`` on
    ``(Z, conj(Z))``; ``exact_branch_cut`` (inverted ellipse only) returns
    :func:`branch_cut_poles` with ``n`` poles per cut.
    """
    source = PoleSource(source)
    Z = sample.nodes
    if source is PoleSource.EXACT_BRANCH_CUT:
        if curve.kind != INVERTED_ELLIPSE:
            raise ValueError("exact_branch_cut poles are only defined for the inverted ellipse")
        if n is None:
            raise ValueError("exact_branch_cut needs the number of poles per cut")
        cand = branch_cut_poles(n, law)
    else:
        if source is PoleSource.FROM_DATA:
            if h is None:
                raise ValueError("from_data needs boundary data h")
            F = boundary_data(h, Z).astype(complex)
        else:
            F = np.conj(Z)
        r = aaa_fit(Z, F, tol, mmax)
        cand = aaa_poles(r)
    kept, dropped = exterior_poles(Z, cand)
    if len(kept) == 0 and len(cand):
        warnings.warn("all candidate poles lie inside the domain; fit reduces to a polynomial",
                      EmptyPoleBasisWarning, stacklevel=2)
    return PoleBasis(kept, source, dropped)


def companion_degree(npoles: int) -> int:
    """Polynomial degree paired with ``npoles`` poles."""
    return max(10, npoles // 2)


def fit_laplace_rational(curve: ParametricCurve, h, pole_basis, npoly: int | None = None,
                         M: int | None = None) -> HarmonicApproximant:
    """Fit ``u ~ Re(p(z) + sum c_j/(z - p_j))``; total degree is ``npoly + #poles``."""
    pol = np.asarray(getattr(pole_basis, "poles", pole_basis), dtype=complex).ravel()
    if npoly is None:
        npoly = companion_degree(len(pol))
    if npoly < 0:
        raise ValueError("npoly must be nonnegative")
    return fit_harmonic(curve, h, npoly, pol, M)


def pole_budget(degree: int, step: int = 1) -> int:
    """Largest pole count, a multiple of ``step``, with ``count + companion_degree(count) <= degree``."""
    count = max(degree, 0) // step * step
    while count > 0 and count + companion_degree(count) > degree:
        count -= step
    return count


def poles_for_degree(curve: ParametricCurve, sample: BoundarySample, h, degree: int,
                     source: PoleSource | str, tol: float = 1e-14) -> PoleBasis:
    """Pole basis sized so that ``#poles + companion_degree(#poles)`` is near ``degree``.

    Branch-cut poles come in symmetric pairs.  For AAA sources the AAA
    degree is capped at the pole budget and fewer poles may survive the
    exterior filter.
    """
    source = PoleSource(source)
    if source is PoleSource.EXACT_BRANCH_CUT:
        return select_poles(curve, sample, h, source=source, n=pole_budget(degree, 2) // 2)
    budget = pole_budget(degree)
    if budget == 0:
        return PoleBasis(np.empty(0, dtype=complex), source)
    return select_poles(curve, sample, h, tol=tol, source=source, mmax=budget)
