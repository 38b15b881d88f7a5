import math

import numpy as np
import pytest

from lapapprox.geometry import (
    BLOB_COEFFS,
    BranchCutError,
    ParametricCurve,
    SchwarzPoleError,
    curve_derivative,
    curve_point,
    inside,
    joukowsky,
    parse_curve,
    sample_boundary,
    schwarz_branches,
    schwarz_exact,
    schwarz_singularities,
    winding_number,
)


def ellipse_residual(z, rho):
    a = (rho + 1 / rho) / 2
    b = (rho - 1 / rho) / 2
    return np.abs(z.real**2 / a**2 + z.imag**2 / b**2 - 1)


def test_joukowsky_values():
    assert joukowsky(1) == 1
    assert joukowsky(1.5j) == pytest.approx(1j * (1.5 - 1 / 1.5) / 2)
    w = 0.3 + 0.4j
    assert abs(joukowsky(w) - joukowsky(1 / w)) < 1e-15
    with pytest.raises(ZeroDivisionError):
        joukowsky(0)


def test_joukowsky_symmetry_random(rng):
    w = rng.normal(size=200) + 1j * rng.normal(size=200)
    assert np.max(np.abs(joukowsky(w) - joukowsky(1 / w))) < 1e-13 * np.max(np.abs(joukowsky(w)))


def test_curve_points():
    assert curve_point(ParametricCurve.ellipse(1.5), 0.0) == pytest.approx((1.5 + 1 / 1.5) / 2)
    z = curve_point(ParametricCurve.inverted_ellipse(1.5), math.pi / 2)
    assert abs(z - (-2.4j)) < 1e-14


def test_inverted_ellipse_reciprocal_identity(rng):
    rho = rng.uniform(1.05, 3.0, 100)
    theta = rng.uniform(0, 2 * np.pi, 100)
    res = [ellipse_residual(1 / curve_point(ParametricCurve.inverted_ellipse(r), t), r) for r, t in zip(rho, theta)]
    assert max(res) < 1e-13


def test_sample_boundary():
    s = sample_boundary(ParametricCurve.inverted_ellipse(1.3), 8)
    assert s.M == 8
    assert s.nodes[0] == pytest.approx(1 / ((1.3 + 1 / 1.3) / 2))
    assert abs(s.nodes[0] - 0.966542750929) < 1e-12
    assert np.all(np.diff(s.params) > 0) and s.params[0] == 0 and s.params[-1] < 2 * np.pi
    assert np.array_equal(s.nodes, curve_point(ParametricCurve.inverted_ellipse(1.3), s.params))
    e = sample_boundary(ParametricCurve.ellipse(2.0), 1000)
    assert ellipse_residual(e.nodes, 2.0).max() < 1e-13
    with pytest.raises(ValueError):
        sample_boundary(ParametricCurve.ellipse(2.0), 4)


@pytest.mark.parametrize("curve", [ParametricCurve.ellipse(1.2), ParametricCurve.inverted_ellipse(1.1),
                                   ParametricCurve.trig(BLOB_COEFFS), ParametricCurve.circle()])
def test_nodes_distinct_and_derivative_nonzero(curve):
    s = sample_boundary(curve, 10_000)
    z = np.sort_complex(s.nodes)
    assert np.min(np.abs(np.diff(z))) > 0
    assert np.min(np.abs(curve_derivative(curve, s.params))) > 0


def test_curve_derivative_matches_finite_difference():
    c = ParametricCurve.inverted_ellipse(1.4)
    t = np.linspace(0, 6, 7)
    d = 1e-6
    fd = (curve_point(c, t + d) - curve_point(c, t - d)) / (2 * d)
    assert np.max(np.abs(fd - curve_derivative(c, t))) < 1e-6


def test_invalid_curves():
    with pytest.raises(ValueError):
        ParametricCurve.ellipse(1.0)
    with pytest.raises(ValueError):
        ParametricCurve.trig((0, 1))
    with pytest.raises(ValueError):
        # figure-eight-like curve crosses itself
        ParametricCurve.trig((0, 0, 0, 1, 0, 1.5))


def test_parse_curve_round_trip():
    for c in (ParametricCurve.ellipse(2.0), ParametricCurve.inverted_ellipse(1.3), ParametricCurve.trig(BLOB_COEFFS)):
        assert parse_curve(c.spec) == c
    c = parse_curve("trig:0, 0, 1, (0.1+0.05i), -0.02i")
    assert c.coeffs == (0, 0, 1, 0.1 + 0.05j, -0.02j)


def test_parse_curve_errors():
    for bad in ("iell", "foo:1", "iell:abc", "iell:0.9", "trig:0,1"):
        with pytest.raises(ValueError):
            parse_curve(bad)


def test_winding_and_inside():
    nodes = sample_boundary(ParametricCurve.circle(), 256).nodes
    w = winding_number(nodes, [0, 0.5j, 2, -3j])
    assert np.allclose(w, [1, 1, 0, 0], atol=1e-10)
    assert list(inside(nodes, [0.1, 1.5])) == [True, False]


@pytest.mark.parametrize("rho", [1.2, 1.5, 2.0])
def test_schwarz_exact_on_ellipse(rho, rng):
    c = ParametricCurve.ellipse(rho)
    z = curve_point(c, rng.uniform(0, 2 * np.pi, 50))
    assert np.max(np.abs(schwarz_exact(c, z) - np.conj(z))) < 1e-12
    alpha = (rho**2 + rho**-2) / 2
    assert schwarz_exact(c, 1.0) == pytest.approx(alpha, abs=1e-15)


@pytest.mark.parametrize("rho", [1.1, 1.3, 1.5, 2.0])
def test_schwarz_exact_on_inverted_ellipse(rho):
    c = ParametricCurve.inverted_ellipse(rho)
    z = sample_boundary(c, 997).nodes
    assert np.max(np.abs(schwarz_exact(c, z) - np.conj(z)) / np.abs(z)) < 1e-12


def test_schwarz_exact_errors():
    with pytest.raises(BranchCutError):
        schwarz_exact(ParametricCurve.ellipse(1.5), 0.5)
    with pytest.raises(BranchCutError):
        schwarz_exact(ParametricCurve.inverted_ellipse(1.5), 1.5)
    ie = ParametricCurve.inverted_ellipse(1.5)
    with pytest.raises(SchwarzPoleError):
        schwarz_exact(ie, schwarz_singularities(ie).interior_poles[0])
    with pytest.raises(NotImplementedError):
        schwarz_exact(ParametricCurve.circle(), 0.5)


def test_schwarz_singularities():
    ie = ParametricCurve.inverted_ellipse(1.5)
    s = schwarz_singularities(ie)
    beta = (1.5**2 - 1.5**-2) / 2
    assert set(s.branch_points) == {1, -1}
    assert np.allclose(sorted(np.imag(s.interior_poles)), [-1 / beta, 1 / beta])
    # the formula's defining property: the denominator vanishes there
    alpha = (1.5**2 + 1.5**-2) / 2
    p = s.interior_poles[0]
    assert abs(alpha - beta * np.sqrt(1 - p * p)) < 1e-14
    # poles lie strictly inside for rho = 1.2 and move inward as rho grows
    c = ParametricCurve.inverted_ellipse(1.2)
    top = abs(curve_point(c, math.pi / 2))
    assert all(abs(p) < top for p in schwarz_singularities(c).interior_poles)
    assert all(inside(sample_boundary(c, 2000).nodes, schwarz_singularities(c).interior_poles))
    with pytest.raises(NotImplementedError):
        schwarz_singularities(ParametricCurve.ellipse(2))


def test_schwarz_branches():
    ie = ParametricCurve.inverted_ellipse(1.3)
    sp, sm = schwarz_branches(ie, 0.3 + 0.1j)
    assert sp == pytest.approx(schwarz_exact(ie, 0.3 + 0.1j))
    a1, a2 = np.conj(schwarz_branches(ie, 1.05))
    assert abs(a1 - a2) > 1e-6
