"""Closed-form convergence rates for the inverted ellipse.

The analyticity radius ``R`` of the inverted ``rho``-ellipse is a ratio of
theta-type series in ``rho``; polynomial approximation loses one digit
per ``log(10)/log(R)`` degrees.  Rational approximation is governed by the
ellipse/slit condenser, whose modulus is ``rho`` itself.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import mpmath

__all__ = [
    "A_CONST",
    "RatePrediction",
    "AsymptoticRadius",
    "SeriesNotConvergedWarning",
    "analyticity_radius_ie",
    "analyticity_excess_ie",
    "analyticity_radius_asymptotic",
    "theta_ratio_oracle",
    "focus_image",
    "degree_per_digit",
    "poly_cost_asymptotic",
    "polynomial_rate_ie",
    "rational_rate_ie",
    "finger_length_ie",
    "crowding_factor",
    "crowding_bounds_ie",
]

A_CONST = 4 * math.exp(-math.pi**2 / 8)
LN10 = math.log(10)

SERIES_RTOL = 1e-18
SERIES_KMAX = 10_000
FINGER_EPS_MAX = 0.225


class SeriesNotConvergedWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class RatePrediction:
    """Per-degree geometric factors and degree-per-digit costs."""

    R: float
    R_star: float
    poly_factor: float
    rat_factor: float
    degree_per_digit_poly: float
    degree_per_digit_rat: float


class AsymptoticRadius(NamedTuple):
    log_form: float
    linear_form: float
    log_excess: float
    linear_excess: float


def _check_rho(rho):
    if not rho > 1:
        raise ValueError(f"rho must exceed 1, got {rho!r}")


def _series(rho, parity):
    """``sum rho^{-k^2}`` over k >= 1 of the given parity (0 even, 1 odd)."""
    lr = math.log(rho)
    total = 0.0
    k = 2 if parity == 0 else 1
    while True:
        term = math.exp(-lr * k * k)
        total += term
        if term < SERIES_RTOL * total:
            return total
        if k > SERIES_KMAX:
            warnings.warn(f"theta series for rho={rho} not converged at k={k}",
                          SeriesNotConvergedWarning, stacklevel=3)
            return total
        k += 2


def _direct_ratio(rho):
    return (0.5 + _series(rho, 0)) / _series(rho, 1)


def analyticity_radius_ie(rho: float) -> float:
    """``(1/2 + rho^-4 + rho^-16 + ...) / (rho^-1 + rho^-9 + rho^-25 + ...)``.

    For ``log(rho) <= 1`` the value is ``1 + analyticity_excess_ie(rho)``,
    the same quotient without the roundoff of summing terms near 1, so the
    result is monotone in ``rho`` down to double-precision resolution.
    """
    _check_rho(rho)
    if math.log(rho) > 1.0:
        return _direct_ratio(rho)
    return 1.0 + analyticity_excess_ie(rho)


def focus_image(rho: float) -> float:
    """Image of the focus ``1`` under the exterior map; the reciprocal of ``R``."""
    _check_rho(rho)
    if math.log(rho) > 1.0:
        return _series(rho, 1) / (0.5 + _series(rho, 0))
    return 1.0 / (1.0 + analyticity_excess_ie(rho))


def analyticity_excess_ie(rho: float) -> float:
    """``R - 1`` without cancellation, valid down to ``rho -> 1``.

    Poisson summation of the doubled sums gives, with
    ``q = exp(-pi^2/(4 log rho))``,
    ``R - 1 = 4(q + q^9 + q^25 + ...)/(1 - 2q + 2q^4 - 2q^9 + ...)``.
    For large ``rho`` (``q`` near 1) the direct series is used instead.
    """
    _check_rho(rho)
    lr = math.log(rho)
    if lr > 1.0:
        return _direct_ratio(rho) - 1.0
    q = math.exp(-math.pi**2 / (4 * lr))
    num = 0.0
    den = 1.0
    k = 1
    while True:
        t = q ** (k * k)
        if k % 2:
            num += t
            den -= 2 * t
        else:
            den += 2 * t
        if t < SERIES_RTOL * min(num, den) or t == 0.0:
            break
        k += 1
    return 4 * num / den


def theta_ratio_oracle(rho: float, excess: bool = False, dps: int | None = None) -> float:
    """``sum exp(-a k^2) / sum exp(-a (k+1/2)^2)`` over all integers, ``a = 4 log rho``.

    Evaluated in ``dps``-digit arithmetic with :mod:`mpmath` so that the
    quotient minus one is resolved even when it is far below double
    precision.  With ``excess`` the value ``R - 1`` is returned.  By default
    the working precision is 40 digits beyond the expected size of ``R - 1``.
    """
    _check_rho(rho)
    if dps is None:
        dps = 40 + int(math.pi**2 / (4 * math.log(rho)) / LN10)
    with mpmath.workdps(dps):
        a = 4 * mpmath.log(mpmath.mpf(rho))
        tiny = mpmath.mpf(10) ** (-dps - 5)

        def bilateral(shift):
            s = mpmath.exp(-a * shift**2) if shift == 0 else mpmath.mpf(0)
            k = 0 if shift else 1
            while True:
                t = mpmath.exp(-a * (k + shift) ** 2)
                # symmetric pair k and -k (or k+1/2 and -(k+1/2))
                s += 2 * t
                if t < tiny * s:
                    return s
                k += 1

        ratio = bilateral(mpmath.mpf(0)) / bilateral(mpmath.mpf("0.5"))
        return float(ratio - 1) if excess else float(ratio)


def analyticity_radius_asymptotic(rho: float) -> AsymptoticRadius:
    """Small-``rho - 1`` forms ``1 + 4 exp(-pi^2/(4 log rho))`` and
    ``1 + A exp(-pi^2/(4(rho - 1)))`` with ``A = 4 exp(-pi^2/8)``."""
    _check_rho(rho)
    log_ex = 4 * math.exp(-math.pi**2 / (4 * math.log(rho)))
    lin_ex = A_CONST * math.exp(-math.pi**2 / (4 * (rho - 1)))
    return AsymptoticRadius(1 + log_ex, 1 + lin_ex, log_ex, lin_ex)


def degree_per_digit(R: float, excess: float | None = None) -> float:
    """``log(10)/log(R)``; ``inf`` when ``R <= 1``.

    Pass ``excess = R - 1`` when it is known more accurately than ``R``.
    """
    if excess is None:
        excess = R - 1
    if not excess > 0:
        return math.inf
    return LN10 / math.log1p(excess)


def poly_cost_asymptotic(rho: float) -> float:
    """Asymptotic degree per digit ``(log 10/A) exp((pi^2/4)/(rho - 1))``."""
    _check_rho(rho)
    return LN10 / A_CONST * math.exp(math.pi**2 / 4 / (rho - 1))


def polynomial_rate_ie(rho: float) -> tuple[float, float]:
    """``(R, degree_per_digit)`` for polynomial fits on the inverted ellipse."""
    ex = analyticity_excess_ie(rho)
    return 1 + ex, degree_per_digit(1 + ex, ex)


def rational_rate_ie(rho: float) -> RatePrediction:
    """Rates for the inverted ellipse with the condenser modulus taken as ``rho``."""
    _check_rho(rho)
    R, dpd = polynomial_rate_ie(rho)
    return RatePrediction(
        R=R,
        R_star=float(rho),
        poly_factor=1 / R,
        rat_factor=rho**-2,
        degree_per_digit_poly=dpd,
        degree_per_digit_rat=LN10 / (2 * math.log(rho)),
    )


def finger_length_ie(rho: float) -> float:
    """Finger length-to-width ratio ``1/(8 eps)``, ``eps = rho - 1 < 0.225``."""
    eps = rho - 1
    if not 0 < eps < FINGER_EPS_MAX:
        raise ValueError(f"finger estimate needs 1 < rho < {1 + FINGER_EPS_MAX}, got {rho!r}")
    return 1 / (8 * eps)


def crowding_factor(L: float) -> float:
    """Distortion scale ``exp(pi L)`` of a finger of length-to-width ratio ``L``."""
    return math.exp(math.pi * L)


def crowding_bounds_ie(rho: float) -> tuple[float, float]:
    """``(exp(-pi/(8 eps)), exp(-pi^2/(4 eps)))``: the crowding bound on ``R - 1``
    and the sharp rate."""
    finger_length_ie(rho)
    eps = rho - 1
    return math.exp(-math.pi / (8 * eps)), math.exp(-math.pi**2 / (4 * eps))
