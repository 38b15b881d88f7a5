"""Analytic Jordan curves: ellipses, inverted ellipses and trigonometric blobs.

Every curve is the image of the unit circle under a boundary map
``z(theta)``.  For the ellipse family the Schwarz function is known in
closed form and is exposed through :func:`schwarz_exact`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ParametricCurve",
    "BoundarySample",
    "SchwarzSingularities",
    "BranchCutError",
    "SchwarzPoleError",
    "joukowsky",
    "curve_point",
    "curve_derivative",
    "sample_boundary",
    "schwarz_exact",
    "schwarz_branches",
    "schwarz_singularities",
    "winding_number",
    "inside",
    "parse_curve",
    "BLOB_COEFFS",
]

ELLIPSE = "ell"
INVERTED_ELLIPSE = "iell"
TRIG = "trig"

# Stand-in for an undisclosed smooth blob; coefficients for k = -3..3.
BLOB_COEFFS = (0.04j, 0.12, 0.0, 0.0, 1.0, 0.1 + 0.05j, -0.06j)


class BranchCutError(ValueError):
    """Point lies on a branch cut of the closed-form Schwarz function."""


class SchwarzPoleError(ValueError):
    """Point coincides with a pole of the Schwarz function."""


def _ellipse_constants(rho):
    # S_E(z) = alpha*z - beta*sqrt(z^2 - 1), alpha^2 - beta^2 = 1
    alpha = 0.5 * (rho**2 + rho**-2)
    beta = 0.5 * (rho**2 - rho**-2)
    return alpha, beta


@dataclass(frozen=True)
class ParametricCurve:
    """A closed analytic curve ``z(theta)``, ``theta`` in ``[0, 2*pi)``.

    Use the constructors :meth:`ellipse`, :meth:`inverted_ellipse` and
    :meth:`trig` rather than instantiating directly.  ``coeffs`` holds
    ``c_{-K}, ..., c_K`` for the trigonometric family.
    """

    kind: str
    rho: float | None = None
    coeffs: tuple[complex, ...] = field(default=())

    def __post_init__(self):
        if self.kind in (ELLIPSE, INVERTED_ELLIPSE):
            if self.rho is None or not self.rho > 1:
                raise ValueError(f"rho must be > 1, got {self.rho!r}")
        elif self.kind == TRIG:
            if len(self.coeffs) % 2 != 1:
                raise ValueError("trig curve needs an odd number of coefficients c_{-K}..c_K")
            _validate_jordan(self)
        else:
            raise ValueError(f"unknown curve kind {self.kind!r}")

    @classmethod
    def ellipse(cls, rho: float) -> "ParametricCurve":
        return cls(ELLIPSE, rho=float(rho))

    @classmethod
    def inverted_ellipse(cls, rho: float) -> "ParametricCurve":
        return cls(INVERTED_ELLIPSE, rho=float(rho))

    @classmethod
    def trig(cls, coeffs) -> "ParametricCurve":
        return cls(TRIG, coeffs=tuple(complex(c) for c in coeffs))

    @classmethod
    def circle(cls) -> "ParametricCurve":
        return cls.trig((0, 0, 1))

    @property
    def degree(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def spec(self) -> str:
        """Curve specification string understood by :func:`parse_curve`."""
        if self.kind == TRIG:
            return "trig:" + ",".join(_format_complex(c) for c in self.coeffs)
        return f"{self.kind}:{self.rho!r}"

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class BoundarySample:
    """Boundary nodes ``z(theta_k)`` at equispaced parameters."""

    nodes: np.ndarray
    params: np.ndarray

    @property
    def M(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class SchwarzSingularities:
    branch_points: tuple[complex, ...]
    interior_poles: tuple[complex, ...]


def joukowsky(w):
    """Return ``(w + 1/w)/2``; raises ``ZeroDivisionError`` for ``w == 0``."""
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise ZeroDivisionError("Joukowsky map is singular at w = 0")
    out = 0.5 * (w + 1.0 / w)
    return out[()] if out.ndim == 0 else out


def curve_point(curve: ParametricCurve, theta):
    theta = np.asarray(theta, dtype=float)
    if curve.kind == TRIG:
        K = curve.degree
        k = np.arange(-K, K + 1)
        e = np.exp(1j * np.multiply.outer(theta, k))
        out = e @ np.asarray(curve.coeffs)
    else:
        zeta = joukowsky(curve.rho * np.exp(1j * theta))
        out = zeta if curve.kind == ELLIPSE else 1.0 / zeta
    out = np.asarray(out)
    return out[()] if out.ndim == 0 else out


def curve_derivative(curve: ParametricCurve, theta):
    """dz/dtheta of the boundary map."""
    theta = np.asarray(theta, dtype=float)
    if curve.kind == TRIG:
        K = curve.degree
        k = np.arange(-K, K + 1)
        e = np.exp(1j * np.multiply.outer(theta, k))
        out = e @ (1j * k * np.asarray(curve.coeffs))
    else:
        w = curve.rho * np.exp(1j * theta)
        dzeta = 0.5 * (1 - w**-2) * 1j * w
        if curve.kind == ELLIPSE:
            out = dzeta
        else:
            out = -dzeta / joukowsky(w) ** 2
    out = np.asarray(out)
    return out[()] if out.ndim == 0 else out


def sample_boundary(curve: ParametricCurve, M: int, offset: float = 0.0) -> BoundarySample:
    """Sample ``M`` equispaced parameters ``theta_k = 2*pi*(k + offset)/M``.

    ``offset`` in ``[0, 1)`` shifts the grid; validation grids use 0.5.
    """
    if int(M) != M or M < 8:
        raise ValueError(f"need at least 8 boundary samples, got {M}")
    M = int(M)
    params = 2 * np.pi * (np.arange(M) + offset) / M
    return BoundarySample(np.asarray(curve_point(curve, params)), params)


def _validate_jordan(curve, n=1024):
    theta = 2 * np.pi * np.arange(n) / n
    dz = np.abs(curve_derivative(curve, theta))
    if dz.min() <= 1e-10 * max(dz.max(), 1e-300):
        raise ValueError("boundary map has a (near) vanishing derivative")
    z = np.asarray(curve_point(curve, theta))
    if _self_intersects(z):
        raise ValueError("trig curve is not a Jordan curve (self-intersection)")


def _self_intersects(z):
    """Segment intersection test for the closed polygon through ``z``."""
    a = z
    b = np.roll(z, -1)
    n = len(z)
    d = b - a

    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    # orientation of b_j endpoints relative to segment i, and vice versa
    ai, di = a[:, None], d[:, None]
    aj, bj, dj = a[None, :], b[None, :], d[None, :]
    o1 = cross(di, aj - ai)
    o2 = cross(di, bj - ai)
    o3 = cross(dj, ai - aj)
    o4 = cross(dj, ai + di - aj)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    idx = np.arange(n)
    sep = np.abs(idx[:, None] - idx[None, :])
    hit &= (sep > 1) & (sep < n - 1)
    return bool(hit.any())


def winding_number(nodes, points):
    """Winding number of the closed polygon ``nodes`` about each of ``points``."""
    nodes = np.asarray(nodes, dtype=complex)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.empty(len(pts))
    step = max(1, 2_000_000 // max(len(nodes), 1))
    for s in range(0, len(pts), step):
        p = pts[s:s + step, None]
        v = nodes[None, :] - p
        with np.errstate(divide="ignore", invalid="ignore"):
            ang = np.angle(np.roll(v, -1, axis=1) / v)
        out[s:s + step] = ang.sum(axis=1) / (2 * np.pi)
    return out


def inside(nodes, points):
    """Boolean mask: points enclosed by the polygon ``nodes``."""
    return np.abs(winding_number(nodes, points)) > 0.5


def _sqrt_branch(z):
    # z*sqrt(1 - z^-2): analytic off [-1, 1], ~ z at infinity
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = z * np.sqrt(1 - 1 / z**2)
    return np.where(z == 0, 1j, out)


def schwarz_exact(curve: ParametricCurve, z, *, check: bool = True):
    """Closed-form Schwarz function of an ellipse or inverted ellipse.

    For ``E_rho`` the branch of ``sqrt(z^2 - 1)`` is cut along ``[-1, 1]``;
    for ``I_rho = 1/E_rho`` the cuts are ``(-inf, -1]`` and ``[1, inf)``.
    With ``check`` set, points on a cut (branch points excepted) or at a
    pole raise.
    """
    if curve.kind not in (ELLIPSE, INVERTED_ELLIPSE):
        raise NotImplementedError(f"no closed-form Schwarz function for {curve.kind!r}")
    alpha, beta = _ellipse_constants(curve.rho)
    z = np.asarray(z, dtype=complex)
    if curve.kind == ELLIPSE:
        if check and np.any((z.imag == 0) & (np.abs(z.real) < 1)):
            raise BranchCutError("point on the branch cut [-1, 1]")
        out = alpha * z - beta * _sqrt_branch(z)
    else:
        if check and np.any((z.imag == 0) & (np.abs(z.real) > 1)):
            raise BranchCutError("point on a branch cut (-inf, -1] or [1, inf)")
        den = alpha - beta * np.sqrt(1 - z * z)
        if check and np.any(np.abs(den) <= 1e-14 * alpha):
            raise SchwarzPoleError("point at a pole of the Schwarz function")
        with np.errstate(divide="ignore", invalid="ignore"):
            out = z / den
    return out[()] if out.ndim == 0 else out


def schwarz_branches(curve: ParametricCurve, z):
    """Both local branches ``(S_+, S_-)`` of the inverted-ellipse Schwarz function.

    ``S_+`` uses the principal square root and agrees with
    :func:`schwarz_exact` off the cuts; ``S_-`` flips its sign.
    """
    if curve.kind != INVERTED_ELLIPSE:
        raise NotImplementedError("two-branch evaluation is implemented for the inverted ellipse")
    alpha, beta = _ellipse_constants(curve.rho)
    z = complex(z)
    root = np.sqrt(1 - z * z)
    return z / (alpha - beta * root), z / (alpha + beta * root)


def schwarz_singularities(curve: ParametricCurve) -> SchwarzSingularities:
    """Branch points and interior poles of the inverted-ellipse Schwarz function.

    The poles solve ``alpha = beta*sqrt(1 - z^2)`` which, using
    ``alpha^2 - beta^2 = 1``, gives ``z = +-i/beta``.
    """
    if curve.kind != INVERTED_ELLIPSE:
        raise NotImplementedError(f"singularities not available for {curve.kind!r}")
    _, beta = _ellipse_constants(curve.rho)
    return SchwarzSingularities((1.0 + 0j, -1.0 + 0j), (1j / beta, -1j / beta))


def _format_complex(c):
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    sign = "+" if c.imag >= 0 or math.isnan(c.imag) else "-"
    return f"{c.real!r}{sign}{abs(c.imag)!r}i"


def _parse_complex(s):
    s = s.strip().replace(" ", "").strip("()")
    if not s:
        raise ValueError("empty coefficient")
    if s.endswith("i"):
        s = s[:-1] + "j"
        if s in ("j", "+j", "-j"):
            s = s.replace("j", "1j")
    return complex(s)


def parse_curve(spec: str) -> ParametricCurve:
    """Parse ``iell:RHO``, ``ell:RHO`` or ``trig:c-K,...,cK``."""
    kind, sep, rest = spec.strip().partition(":")
    if not sep:
        raise ValueError(f"malformed curve spec {spec!r}")
    kind = kind.lower()
    try:
        if kind in (ELLIPSE, INVERTED_ELLIPSE):
            return ParametricCurve(kind, rho=float(rest))
        if kind == TRIG:
            return ParametricCurve.trig([_parse_complex(t) for t in rest.split(",")])
    except ValueError as exc:
        raise ValueError(f"bad curve spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown curve kind in {spec!r}")
