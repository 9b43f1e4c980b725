import numpy as np
import pytest

from aperture_complete.geometry import ParametricCurve, curve_derivative, curve_point, discretize

CURVES = [ParametricCurve("kite"), ParametricCurve("peanut"), ParametricCurve.circle(5.0)]


def test_curve_points():
    assert np.allclose(curve_point(ParametricCurve("kite"), 0.0), [1.0, 0.0])
    assert np.allclose(curve_point(ParametricCurve("peanut"), 0.0), [2.0, 0.0])
    assert np.allclose(curve_point(ParametricCurve.circle(5.0), np.pi / 2), [0.0, 5.0], atol=1e-15)
    assert np.allclose(curve_point(ParametricCurve("kite"), 2 * np.pi + 0.3),
                       curve_point(ParametricCurve("kite"), 0.3))


def test_curve_derivatives_examples():
    assert np.allclose(curve_derivative(ParametricCurve.circle(5.0), 0.0), [0.0, 5.0])
    assert np.allclose(curve_derivative(ParametricCurve("kite"), 0.0), [0.0, 1.5])


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
def test_derivatives_match_finite_differences(curve):
    t = np.linspace(0, 2 * np.pi, 37)
    h = 1e-6
    fd1 = (curve.point(t + h) - curve.point(t - h)) / (2 * h)
    fd2 = (curve.derivative(t + h) - curve.derivative(t - h)) / (2 * h)
    assert np.max(np.abs(fd1 - curve.derivative(t))) <= 1e-6
    assert np.max(np.abs(fd2 - curve.second_derivative(t))) <= 1e-6


def test_peanut_derivative_at_quarter_pi():
    c = ParametricCurve("peanut")
    h = 1e-6
    fd = (c.point(np.pi / 4 + h) - c.point(np.pi / 4 - h)) / (2 * h)
    assert np.allclose(curve_derivative(c, np.pi / 4), fd, atol=1e-6)


def test_circle_length_exact():
    b = discretize(ParametricCurve.circle(5.0), 64)
    assert abs(b.weights.sum() - 10 * np.pi) <= 1e-10
    assert np.allclose(b.normals, b.points / 5.0, atol=1e-14)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
def test_normals_unit_and_outward(curve):
    b = discretize(curve, 128)
    assert np.allclose(np.linalg.norm(b.normals, axis=1), 1.0, atol=1e-12)
    assert np.all(np.einsum("ij,ij->i", b.points - curve.interior_point, b.normals) > 0)


@pytest.mark.parametrize("kind, n_q", [("peanut", 64), ("kite", 128)])
def test_length_self_convergence(kind, n_q):
    # kite: the 64 -> 128 change is ~3e-7, the spectral regime starts later
    c = ParametricCurve(kind)
    assert abs(discretize(c, n_q).length - discretize(c, 2 * n_q).length) <= 1e-8


@pytest.mark.parametrize("n_q", [7, 6, 9, 0])
def test_discretize_rejects_bad_counts(n_q):
    with pytest.raises(ValueError):
        discretize(ParametricCurve("kite"), n_q)


def test_unknown_curve():
    with pytest.raises(ValueError):
        ParametricCurve("square")
