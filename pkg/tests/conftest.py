import numpy as np
import pytest

from aperture_complete.forward import ScatteringProblem, assemble_msr
from aperture_complete.geometry import ParametricCurve


def inside_polygon(points, poly):
    """Even-odd ray casting; ``points`` (N, 2), ``poly`` (M, 2) closed implicitly."""
    x, y = points[:, 0][:, None], points[:, 1][:, None]
    x0, y0 = poly[:, 0][None, :], poly[:, 1][None, :]
    x1, y1 = np.roll(poly[:, 0], -1)[None, :], np.roll(poly[:, 1], -1)[None, :]
    crosses = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    return (crosses & (x < xint)).sum(axis=1) % 2 == 1


def boundary_distance(points, curve, samples=8000):
    t = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    bd = curve.point(t)
    return np.min(np.linalg.norm(points[:, None, :] - bd[None, :, :], axis=-1), axis=1)


@pytest.fixture(scope="session")
def kite():
    return ParametricCurve("kite")


@pytest.fixture(scope="session")
def kite_msr(kite):
    """Exact kite data, k=6, 2m=300, n_q=256."""
    return assemble_msr(ScatteringProblem(6.0, kite), 150, 256)


@pytest.fixture(scope="session")
def kite_msr_small(kite):
    return assemble_msr(ScatteringProblem(6.0, kite), 4, 256, normalization="standard")


_CRITERIA = []


@pytest.fixture
def criterion():
    """``record(label, ok, detail)`` adds one line to the acceptance summary and asserts ``ok``."""

    def record(label, ok, detail=""):
        _CRITERIA.append((label, bool(ok), detail))
        assert ok, f"criterion {label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"criterion {label:<3} {'PASS' if ok else 'FAIL'}  {detail}")
