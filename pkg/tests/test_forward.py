import numpy as np
import pytest
from scipy import integrate, special

from aperture_complete.forward import (
    ScatteringProblem,
    assemble_msr,
    assemble_operator,
    circle_far_field_analytic,
    far_field,
    far_field_matrix,
    kress_log_weights,
    normalization_factor,
)
from aperture_complete.geometry import ParametricCurve
from aperture_complete.msr import DirectionGrid, blocks

K = 6.0


def unit(angle):
    angle = np.asarray(angle, dtype=float)
    return np.stack([np.cos(angle), np.sin(angle)], axis=-1)


@pytest.fixture(scope="module")
def circle_op():
    return assemble_operator(ScatteringProblem(K, ParametricCurve.circle(1.0)), 64)


@pytest.mark.parametrize("m", [0, 1, 2, 5, 17])
def test_kress_weights_integrate_log_kernel(m):
    # int_0^2pi log(4 sin^2(tau/2)) cos(m tau) dtau = -2pi/m (m > 0), 0 (m = 0)
    n_q = 64
    R = kress_log_weights(n_q)
    tau = 2 * np.pi * np.arange(n_q) / n_q
    expected = 0.0 if m == 0 else -2 * np.pi / m
    assert R[0] @ np.cos(m * tau) == pytest.approx(expected, abs=1e-12)
    # brute-force quadrature of the same integral
    val, _ = integrate.quad(lambda x: np.log(4 * np.sin(x / 2) ** 2) * np.cos(m * x), 0, 2 * np.pi,
                            points=[0, 2 * np.pi], limit=400)
    assert val == pytest.approx(expected, abs=1e-8)


def test_point_source_normalization():
    # Phi(x, z) = i/4 H0(k|x - z|) has far field exp(-ik xhat.z) in the plane-wave convention
    z = np.array([0.3, -0.2])
    xhat = unit(0.7)
    r = 1e7
    x = r * xhat
    phi = 0.25j * special.hankel1(0, K * np.linalg.norm(x - z))
    lead = normalization_factor(K, "standard") * np.exp(1j * K * r) / np.sqrt(r)
    assert phi / lead == pytest.approx(np.exp(-1j * K * xhat @ z), abs=1e-6)


def test_circle_operator_factorizes(circle_op):
    assert circle_op.eta == K
    assert circle_op.lu[0].shape == (64, 64)


def test_circle_matches_series(circle_op):
    d = unit(0.0)
    val = far_field(circle_op, d, d[None, :])[0]
    ref = circle_far_field_analytic(K, 1.0, d, d, n_terms=36)
    assert abs(val - ref) <= 1e-8 * abs(ref)


def test_circle_rotational_symmetry(circle_op):
    rng = np.random.default_rng(3)
    a, b, rot = rng.uniform(0, 2 * np.pi, 3)
    v1 = far_field(circle_op, unit(a), unit([b]))[0]
    v2 = far_field(circle_op, unit(a + rot), unit([b + rot]))[0]
    assert abs(v1 - v2) <= 1e-10 * abs(v1)


def test_analytic_series_properties():
    phi = 0.83
    a = circle_far_field_analytic(K, 1.0, unit(phi), unit(0.0))
    b = circle_far_field_analytic(K, 1.0, unit(-phi), unit(0.0))
    assert a == pytest.approx(b, rel=1e-14)
    n0 = int(np.ceil(K)) + 20
    c1 = circle_far_field_analytic(K, 1.0, unit(phi), unit(0.0), n_terms=n0)
    c2 = circle_far_field_analytic(K, 1.0, unit(phi), unit(0.0), n_terms=n0 + 20)
    assert abs(c1 - c2) <= 1e-12
    with pytest.warns(UserWarning):
        circle_far_field_analytic(K, 1.0, unit(phi), unit(0.0), n_terms=5)


def test_circle_msr_is_circulant():
    F = assemble_msr(ScatteringProblem(K, ParametricCurve.circle(1.0)), 6, 64).entries
    n = F.shape[0]
    first = F[0]
    for i in range(n):
        assert np.max(np.abs(F[i] - np.roll(first, i))) <= 1e-10


@pytest.mark.parametrize("kind", ["kite", "peanut"])
def test_self_convergence(kind):
    problem = ScatteringProblem(K, ParametricCurve(kind))
    dirs = unit(np.linspace(0, 2 * np.pi, 12, endpoint=False))
    a = far_field_matrix(assemble_operator(problem, 128), dirs, dirs)
    b = far_field_matrix(assemble_operator(problem, 256), dirs, dirs)
    assert np.max(np.abs(a - b)) <= 1e-9


def test_kite_reciprocity_small(kite_msr_small):
    f11, f12, f21, f22 = blocks(kite_msr_small)
    assert np.max(np.abs(f11 - f22.T)) <= 1e-8
    assert np.all(np.isfinite(kite_msr_small.entries))


def test_kite_reference_entry(kite_msr_small):
    assert abs(kite_msr_small.entries[0, 0] - (-2.6282 + 1.8817j)) <= 1e-3


def test_normalizations_differ_by_constant():
    problem = ScatteringProblem(K, ParametricCurve("peanut"))
    a = assemble_msr(problem, 3, 128).entries
    b = assemble_msr(problem, 3, 128, normalization="standard").entries
    assert np.allclose(b, a * np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * K), rtol=1e-14)


def test_msr_layout():
    problem = ScatteringProblem(K, ParametricCurve("kite"))
    op = assemble_operator(problem, 128)
    F = assemble_msr(problem, 3, 128)
    grid = DirectionGrid(3)
    i, j = 2, 4
    single = far_field(op, grid.directions[i], grid.directions[j][None, :])[0]
    assert F.entries[i, j] == pytest.approx(single, rel=1e-13)
    assert F.mask.all() and (F.provenance == "measured").all()


def test_invalid_problem():
    with pytest.raises(ValueError):
        ScatteringProblem(0.0, ParametricCurve("kite"))
    with pytest.raises(ValueError):
        normalization_factor(K, "bogus")
