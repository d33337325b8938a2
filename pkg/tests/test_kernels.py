import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from reckern import EPANECHNIKOV, GAUSSIAN, make_kernel


def test_gaussian_peak_value():
    k = make_kernel("gaussian", 1)
    assert k([0.0]) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-12)


def test_epanechnikov_values():
    k = make_kernel("epanechnikov", 1)
    assert k([0.0]) == pytest.approx(0.75, abs=1e-15)
    assert k([1.5]) == 0.0
    assert k([1.0]) == 0.0


@pytest.mark.parametrize("family", [GAUSSIAN, EPANECHNIKOV])
def test_symmetry_single_point(family):
    k = make_kernel(family, 1)
    assert k([1.3]) == k([-1.3])


@pytest.mark.parametrize("family", [GAUSSIAN, EPANECHNIKOV])
@pytest.mark.parametrize("dim", [1, 2])
def test_symmetry_and_nonnegativity_sampled(family, dim):
    k = make_kernel(family, dim)
    rng = np.random.default_rng(0)
    u = rng.uniform(-3, 3, size=(1000, dim))
    vals = k.eval_many(u)
    flipped = k.eval_many(-u)
    assert np.array_equal(vals, flipped)
    assert np.all(vals >= 0.0)


@given(st.floats(-50, 50, allow_nan=False))
def test_symmetry_is_exact_everywhere(x):
    for family in (GAUSSIAN, EPANECHNIKOV):
        k = make_kernel(family, 1)
        assert k([x]) == k([-x])


@pytest.mark.parametrize("family,l2_1d,m2_1d", [
    (GAUSSIAN, 1.0 / (2.0 * math.sqrt(math.pi)), 1.0),
    (EPANECHNIKOV, 0.6, 0.2),
])
def test_closed_form_constants(family, l2_1d, m2_1d):
    k1 = make_kernel(family, 1)
    l2, m2 = k1.constants()
    assert l2 == pytest.approx(l2_1d, rel=1e-12)
    assert m2 == pytest.approx(np.array([[m2_1d]]), rel=1e-12)

    k2 = make_kernel(family, 2)
    l2_2, m2_2 = k2.constants()
    assert l2_2 == pytest.approx(l2_1d ** 2, rel=1e-12)
    assert m2_2 == pytest.approx(m2_1d * np.eye(2), rel=1e-12)


def test_gaussian_d2_second_moment_is_identity():
    assert np.array_equal(make_kernel("gaussian", 2).second_moment, np.eye(2))


@pytest.mark.parametrize("family", [GAUSSIAN, EPANECHNIKOV])
def test_quadrature_1d(family):
    k = make_kernel(family, 1)
    u = np.linspace(-10, 10, 200001)[:, None]
    vals = k.eval_many(u)
    du = u[1, 0] - u[0, 0]
    assert np.trapz(vals, dx=du) == pytest.approx(1.0, abs=1e-8)
    assert np.trapz(vals * vals, dx=du) == pytest.approx(k.l2_norm_sq, abs=1e-8)
    assert np.trapz(u[:, 0] ** 2 * vals, dx=du) == pytest.approx(
        k.second_moment[0, 0], abs=1e-8)


@pytest.mark.parametrize("family", [GAUSSIAN, EPANECHNIKOV])
def test_quadrature_2d(family):
    k = make_kernel(family, 2)
    g = np.linspace(-8, 8, 1201)
    du = g[1] - g[0]
    xx, yy = np.meshgrid(g, g)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    vals = k.eval_many(pts).reshape(xx.shape)
    assert vals.sum() * du * du == pytest.approx(1.0, abs=1e-6)
    assert (vals ** 2).sum() * du * du == pytest.approx(k.l2_norm_sq, abs=1e-6)


def test_support_radius():
    assert make_kernel("gaussian", 1).support_radius == math.inf
    assert make_kernel("epanechnikov", 1).support_radius == 1.0
    assert make_kernel("epanechnikov", 2).support_radius == pytest.approx(math.sqrt(2))
    # exactly zero outside the radius
    k = make_kernel("epanechnikov", 2)
    rng = np.random.default_rng(1)
    u = rng.uniform(-4, 4, size=(500, 2))
    outside = np.linalg.norm(u, axis=1) > k.support_radius
    assert np.all(k.eval_many(u)[outside] == 0.0)


def test_dimension_mismatch_raises():
    k = make_kernel("gaussian", 2)
    with pytest.raises(ValueError):
        k([1.0])
    with pytest.raises(ValueError):
        k.eval_many(np.zeros((5, 3)))


def test_unknown_family_raises():
    with pytest.raises(ValueError):
        make_kernel("triangular", 1)


def test_eval_many_matches_scalar():
    rng = np.random.default_rng(2)
    for family in (GAUSSIAN, EPANECHNIKOV):
        k = make_kernel(family, 2)
        pts = rng.uniform(-2, 2, size=(50, 2))
        many = k.eval_many(pts)
        singles = np.array([k(p) for p in pts])
        assert np.array_equal(many, singles)
