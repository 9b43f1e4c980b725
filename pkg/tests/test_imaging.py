import numpy as np
import pytest
from scipy import linalg

from aperture_complete.imaging import (
    ImagingGrid,
    dsm_full,
    dsm_limited,
    f_sharp,
    fm_eigensystem,
    fm_indicator,
    hermitian_abs,
    normalize,
)
from aperture_complete.msr import DirectionGrid, MsrMatrix, restrict

from conftest import boundary_distance

SMALL = ImagingGrid(-2, 2, -2, 2, 9, 7)


def msr(entries, k=1.0):
    entries = np.asarray(entries, dtype=complex)
    return MsrMatrix.full(DirectionGrid(len(entries) // 2), k, entries)


def test_grid_layout():
    g = ImagingGrid(-1, 1, 0, 3, 3, 4)
    assert g.points().shape == (3, 4, 2)
    assert g.points()[2, 1].tolist() == [1.0, 1.0]
    assert g.spacing == (1.0, 1.0)
    with pytest.raises(ValueError):
        g.with_values(-np.ones((3, 4)))
    with pytest.raises(ValueError):
        g.with_values(np.ones((4, 3)))


def test_dsm_zero():
    assert np.all(dsm_full(msr(np.zeros((4, 4))), SMALL).values == 0)


def test_dsm_hand_example():
    g = ImagingGrid(0, 0, 0, 0, 1, 1)
    assert dsm_full(msr(np.eye(2)), g).values[0, 0] == pytest.approx(4.0, abs=1e-14)


def test_dsm_matches_direct_formula():
    rng = np.random.default_rng(3)
    F = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    k = 2.5
    d = DirectionGrid(3).directions
    G = dsm_full(msr(F, k), SMALL)
    for ix, iy in ((0, 0), (4, 3), (8, 6)):
        z = SMALL.points()[ix, iy]
        ref = abs(np.exp(-1j * k * d @ z) @ F @ np.exp(1j * k * d @ z)) ** 2
        assert G.values[ix, iy] == pytest.approx(ref, rel=1e-12)
    # quadratic in F
    G3 = dsm_full(msr(3j * F, k), SMALL)
    assert np.allclose(G3.values, 9 * G.values, rtol=1e-12)


def test_dsm_incomplete_rejected():
    F = restrict(msr(np.ones((4, 4))), 2)
    with pytest.raises(ValueError):
        dsm_full(F, SMALL)
    assert np.all(dsm_limited(restrict(msr(np.zeros((4, 4))), 2), SMALL).values == 0)


def test_dsm_limited_full_mask_equals_full(kite_msr):
    g = ImagingGrid(-3, 3, -3, 3, 15, 15)
    a = dsm_full(kite_msr, g).values
    b = dsm_limited(kite_msr, g).values
    assert np.max(np.abs(a - b)) <= 1e-14 * a.max()


def test_dsm_limited_rejects_scattered_mask():
    F = msr(np.ones((4, 4)))
    mask = np.zeros((4, 4), bool)
    mask[:, [1, 3]] = True
    G = F.replace(mask=mask, entries=np.where(mask, F.entries, 0), provenance=np.where(mask, "measured", "unknown"))
    with pytest.raises(ValueError):
        dsm_limited(G, SMALL)


def test_dsm_kite_peaks_near_boundary(kite_msr, kite):
    G = dsm_full(kite_msr)
    idx = np.unravel_index(G.values.argmax(), G.values.shape)
    dist = boundary_distance(G.points()[idx][None, :], kite)[0]
    assert dist <= 2 * max(G.spacing)


def test_fm_diagonal_example():
    fs = f_sharp(np.diag([2.0, -3.0]))
    assert np.allclose(fs, np.diag([2.0, 3.0]), atol=1e-15)
    lam, _ = fm_eigensystem(np.diag([2.0, -3.0]))
    assert np.allclose(sorted(lam), [2.0, 3.0])


def test_hermitian_abs_matches_sqrtm():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    H = A + A.conj().T
    assert np.allclose(hermitian_abs(H), linalg.sqrtm(H @ H), atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_f_sharp_psd(seed):
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    lam = np.linalg.eigvalsh(f_sharp(F))
    assert lam.min() >= -1e-12 * np.abs(lam).max()
    fs = f_sharp(F)
    assert np.allclose(fs, fs.conj().T)


def test_fm_brute_force_oracle():
    rng = np.random.default_rng(5)
    F = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    k = 1.7
    g = ImagingGrid(0.4, 0.4, -0.3, -0.3, 1, 1)
    got = fm_indicator(msr(F, k), g).values[0, 0]

    # independent dense evaluation on the observation-by-incidence matrix
    T = F.T
    re = (T + T.conj().T) / 2
    im = (T - T.conj().T) / 2j
    fs = linalg.sqrtm(re @ re) + linalg.sqrtm(im @ im)
    lam, psi = linalg.eig(fs)
    d = DirectionGrid(2).directions
    phi = np.exp(-1j * k * d @ np.array([0.4, -0.3]))
    total = sum(abs(np.vdot(phi, psi[:, n] / np.linalg.norm(psi[:, n]))) ** 2 / abs(lam[n]) for n in range(4))
    assert got == pytest.approx(1 / total, rel=1e-12)


def test_fm_positive_and_metadata(kite_msr):
    G = fm_indicator(kite_msr, SMALL)
    assert np.all(G.values > 0)
    assert G.meta["eigen_floor"] == 1e-14
    assert 0 < G.meta["eigen_kept"] <= 300
    with pytest.raises(ValueError):
        fm_indicator(restrict(kite_msr, 10), SMALL)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_fm_nonfinite_raises():
    with pytest.raises((FloatingPointError, np.linalg.LinAlgError, ValueError)):
        fm_eigensystem(np.full((2, 2), np.inf))


def test_normalize():
    zero = SMALL.with_values(np.zeros((9, 7)))
    assert normalize(zero) is zero
    assert np.all(normalize(SMALL.with_values(np.full((9, 7), 2.5))).values == 1.0)
    rng = np.random.default_rng(0)
    assert normalize(SMALL.with_values(rng.random((9, 7)))).values.max() == 1.0
