"""Numerical Schwarz-function analysis.

A rational AAA fit of ``conj(Z)`` on the boundary samples approximates the
Schwarz function; its poles line up along branch cuts and accumulate at
branch points.  The module also checks the reflection identity and builds
the two-sheet witness showing that a Laplace solution cannot be continued
through a branch point of ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial import cKDTree

from .aaa import BarycentricRational, aaa_fit, poles as aaa_poles
from .geometry import (
    ELLIPSE,
    INVERTED_ELLIPSE,
    ParametricCurve,
    curve_point,
    inside,
    sample_boundary,
    schwarz_branches,
    schwarz_exact,
)
from .ratsolver import branch_cut_poles, companion_degree, fit_laplace_rational

__all__ = [
    "BranchEstimate",
    "SchwarzApprox",
    "schwarz_fit",
    "pole_strings",
    "reflection_check",
    "distance_to_curve",
    "continuation_violation_witness",
]


@dataclass(frozen=True)
class BranchEstimate:
    location: complex
    side: str  # "interior" or "exterior"
    string_size: int


@dataclass(frozen=True)
class SchwarzApprox:
    rational: BarycentricRational
    exterior_poles: np.ndarray
    interior_poles: np.ndarray
    branch_estimates: tuple[BranchEstimate, ...]
    strings: dict = field(default_factory=dict, repr=False)

    @property
    def residual(self) -> float:
        """Absolute max residual of the fit on the sample points."""
        return self.rational.history[-1]


def pole_strings(poles, link_factor: float = 3.0, min_size: int = 3) -> list[np.ndarray]:
    """Single-linkage clusters of poles, cut at ``link_factor`` times the
    median nearest-neighbour spacing.  Clusters smaller than ``min_size``
    are dropped."""
    p = np.asarray(poles, dtype=complex)
    if len(p) < max(min_size, 2):
        return []
    P = np.column_stack([p.real, p.imag])
    nn = cKDTree(P).query(P, 2)[0][:, 1]
    cut = link_factor * np.median(nn)
    if cut == 0:
        return []
    labels = fcluster(linkage(P, "single"), cut, "distance")
    strings = [p[labels == k] for k in np.unique(labels)]
    return [s for s in strings if len(s) >= min_size]


def _string_branch_points(s, nodes):
    """Endpoints of a pole string toward which the poles accumulate.

    The endpoints are the extremes along the string's principal axis; an
    endpoint counts if its neighbour spacing is no larger than the string's
    median spacing.  Falls back to the pole nearest the curve.
    """
    P = np.column_stack([s.real, s.imag])
    nn = cKDTree(P).query(P, 2)[0][:, 1]
    X = P - P.mean(axis=0)
    axis = np.linalg.svd(X, full_matrices=False)[2][0]
    t = X @ axis
    ends = {int(np.argmin(t)), int(np.argmax(t))}
    med = np.median(nn)
    out = [s[i] for i in sorted(ends) if nn[i] <= med]
    if not out:
        d = np.abs(s[:, None] - nodes[None, :]).min(axis=1)
        out = [s[int(np.argmin(d))]]
    return out


def schwarz_fit(curve: ParametricCurve, M: int = 2000, tol: float = 1e-10, mmax: int = 200,
                link_factor: float = 3.0, min_string: int = 3) -> SchwarzApprox:
    """AAA approximation of the Schwarz function of ``curve`` from ``M`` samples."""
    Z = sample_boundary(curve, M).nodes
    r = aaa_fit(Z, np.conj(Z), tol, mmax)
    pol = aaa_poles(r)
    ins = inside(Z, pol)
    ext_p, int_p = pol[~ins], pol[ins]
    estimates = []
    strings = {"exterior": [], "interior": []}
    for side, group in (("exterior", ext_p), ("interior", int_p)):
        for s in pole_strings(group, link_factor, min_string):
            strings[side].append(s)
            for loc in _string_branch_points(s, Z):
                estimates.append(BranchEstimate(complex(loc), side, len(s)))
    return SchwarzApprox(r, ext_p, int_p, tuple(estimates), strings)


def distance_to_curve(curve: ParametricCurve, z, n: int = 8192) -> float:
    """Distance from ``z`` to the curve, from a dense sample refined locally."""
    theta = 2 * np.pi * np.arange(n) / n
    pts = curve_point(curve, theta)
    k = int(np.argmin(np.abs(pts - z)))
    fine = theta[k] + np.linspace(-2, 2, 401) * (2 * np.pi / n)
    return float(np.abs(curve_point(curve, fine) - z).min())


def reflection_check(curve: ParametricCurve, z, radius_factor: float = 0.05) -> float:
    """``|conj(S(conj(S(z)))) - z|`` for the closed-form Schwarz function.

    Only defined within ``radius_factor*(rho - 1)`` of the curve, where the
    reflection is single-valued; farther points raise ``ValueError``.
    """
    if curve.kind not in (ELLIPSE, INVERTED_ELLIPSE):
        raise NotImplementedError("reflection check needs a closed-form Schwarz function")
    z = complex(z)
    limit = radius_factor * (curve.rho - 1)
    if distance_to_curve(curve, z) >= limit:
        raise ValueError(f"point {z} is farther than {limit:g} from the curve")
    w = np.conj(schwarz_exact(curve, z))
    return float(abs(np.conj(schwarz_exact(curve, w)) - z))


def continuation_violation_witness(curve: ParametricCurve, h, b: complex = 1.05,
                                   n_per_cut: int = 30, M: int | None = None):
    """Two-sheet reflection of a point ``b`` on the cut beyond ``z = 1``.

    Returns ``(a1, a2, du)`` where ``a1, a2 = conj(S_+(b)), conj(S_-(b))``
    lie in the domain and ``du = |u(a1) - u(a2)|`` for an accurate rational
    Laplace solution with data ``h``.  If ``u`` continued analytically to a
    neighbourhood of ``b`` both reflections would carry the same value.
    """
    if curve.kind != INVERTED_ELLIPSE:
        raise NotImplementedError("witness is implemented for the inverted ellipse")
    s_plus, s_minus = schwarz_branches(curve, b)
    a1, a2 = complex(np.conj(s_plus)), complex(np.conj(s_minus))
    nodes = sample_boundary(curve, 4096).nodes
    if not inside(nodes, [a1, a2]).all():
        raise ValueError(f"reflections {a1}, {a2} of b={b} are not inside the domain")
    pol = branch_cut_poles(n_per_cut)
    approx = fit_laplace_rational(curve, h, pol, companion_degree(len(pol)), M)
    u1, u2 = approx([a1, a2])
    return a1, a2, float(abs(u1 - u2))
