"""Randomized invariant suites (60 instances each)."""

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from lapapprox.aaa import aaa_fit
from lapapprox.geometry import BLOB_COEFFS, ParametricCurve, curve_derivative, curve_point, sample_boundary
from lapapprox.polysolver import arnoldi_build, fit_harmonic
from lapapprox.schwarz import reflection_check

N_EXAMPLES = 60
PROPS = settings(max_examples=N_EXAMPLES, deadline=None, derandomize=True,
                 suppress_health_check=[HealthCheck.too_slow])

rhos = st.floats(1.15, 3.0)
curves = st.one_of(
    rhos.map(ParametricCurve.ellipse),
    rhos.map(ParametricCurve.inverted_ellipse),
    st.just(ParametricCurve.trig(BLOB_COEFFS)),
    st.just(ParametricCurve.circle()),
)


@PROPS
@given(curve=curves, n=st.integers(0, 150), extra=st.integers(0, 600))
def test_arnoldi_orthonormal(curve, n, extra):
    M = max(8, 4 * (n + 1) + extra)
    b = arnoldi_build(sample_boundary(curve, M), n)
    G = b.Q.conj().T @ b.Q / M
    assert np.max(np.abs(G - np.eye(b.degree + 1))) < 1e-10


@PROPS
@given(seed=st.integers(0, 2**32 - 1), N=st.integers(20, 400), kind=st.sampled_from(["exp", "pole", "abs", "tan"]))
def test_barycentric_interpolates_support(seed, N, kind):
    rng = np.random.default_rng(seed)
    Z = rng.normal(size=N) + 1j * rng.normal(size=N)
    F = {"exp": np.exp(Z), "pole": 1 / (Z - 3), "abs": np.abs(Z) + 0j, "tan": np.tan(Z / 4)}[kind]
    r = aaa_fit(Z, F, tol=1e-12, mmax=60)
    assert np.array_equal(r(r.support), r.values)
    assert abs(np.linalg.norm(r.weights) - 1) < 1e-14


def _exact_solution(curve, seed):
    """``Re g`` for ``g`` analytic inside: an entire part plus an exterior pole."""
    rng = np.random.default_rng(seed)
    nodes = sample_boundary(curve, 256).nodes
    k = int(rng.integers(len(nodes)))
    c = nodes[k] * (1.3 + rng.uniform(0, 0.5))
    a = rng.normal() + 1j * rng.normal()
    s = 1 / np.abs(nodes).max()
    return lambda z: (np.exp(a * s * z) + 0.3 / (z - c)).real


def _interior(curve, k, rng):
    t = rng.uniform(0, 2 * np.pi, k)
    nodes = sample_boundary(curve, 512).nodes
    c = 0.0 if curve.kind == "iell" else nodes.mean()
    # the inverted ellipse is star-shaped about 0, the others about their centroid
    return c + rng.uniform(0, 0.97, k) * (curve_point(curve, t) - c)


@PROPS
@given(curve=curves, n=st.integers(2, 40), seed=st.integers(0, 2**32 - 1))
def test_maximum_principle(curve, n, seed):
    h = _exact_solution(curve, seed)
    a = fit_harmonic(curve, h, n)
    z = _interior(curve, 200, np.random.default_rng(seed + 1))
    assert np.max(np.abs(a(z) - h(z))) <= a.boundary_error + 1e-10


ellipse_family = st.one_of(rhos.map(ParametricCurve.ellipse), rhos.map(ParametricCurve.inverted_ellipse))


@PROPS
@given(curve=ellipse_family, theta=st.floats(0, 2 * np.pi), frac=st.floats(-0.9, 0.9))
def test_reflection_identity(curve, theta, frac):
    z0 = complex(curve_point(curve, theta))
    d = complex(curve_derivative(curve, theta))
    normal = -1j * d / abs(d)
    z = z0 + frac * 0.05 * (curve.rho - 1) * normal
    assert reflection_check(curve, z) < 1e-8
