"""Sound-soft forward scattering by a smooth obstacle.

Combined-field Nyström solver
-----------------------------
The scattered field is sought as

    u^s(x) = int_{dOmega} [dPhi(x,y)/dnu(y) - i*eta*Phi(x,y)] phi(y) ds(y),

which, with u = 0 on the boundary, gives the second-kind equation

    phi + K phi - i*eta*S phi = -2 u^i        on dOmega.

Both kernels carry a ``log(4 sin^2((t - tau)/2))`` singularity after
parametrization. They are split into a log part and a smooth remainder; the
log part is integrated with the trigonometric product weights of Kress and
the remainder with the trapezoidal rule. This is spectrally accurate for
analytic curves.

Far fields default to the normalization in which the point source Phi(., z)
has far field ``exp(-ik xhat . z)`` (``"plane-wave"``). The alternative
``"standard"`` convention, ``u^s ~ e^{ikr}/sqrt(r) u_inf``, differs by the
constant factor ``exp(i pi/4) / sqrt(8 pi k)``.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, special

from .geometry import ParametricCurve, discretize
from .msr import DirectionGrid, MsrMatrix

EULER_GAMMA = np.euler_gamma
NORMALIZATIONS = ("plane-wave", "standard")


def normalization_factor(k, normalization="plane-wave"):
    """Multiplier taking plane-wave-normalized far fields to ``normalization``."""
    if normalization == "plane-wave":
        return 1.0 + 0j
    if normalization == "standard":
        return np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * k)
    raise ValueError(f"unknown normalization {normalization!r}; expected one of {NORMALIZATIONS}")


@dataclass(frozen=True)
class ScatteringProblem:
    """Plane-wave scattering by a sound-soft obstacle."""

    k: float
    obstacle: ParametricCurve

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise ValueError(f"wavenumber must be positive, got {self.k!r}")


@dataclass(frozen=True)
class BoundaryOperator:
    problem: ScatteringProblem
    boundary: object
    eta: float
    lu: tuple = field(repr=False)


class SolverError(RuntimeError):
    """Raised when the boundary system cannot be factorized."""


def kress_log_weights(n_q):
    """Weights ``R_j`` for int_0^{2pi} log(4 sin^2((t_i - tau)/2)) f(tau) dtau.

    Returns the (n_q, n_q) circulant matrix ``R[i, j] = R_{|i-j|}``.
    """
    n = n_q // 2
    j = np.arange(n_q)
    m = np.arange(1, n)
    tj = np.pi * j / n
    r = -(2 * np.pi / n) * (np.cos(np.outer(tj, m)) / m).sum(axis=1)
    r -= (np.pi / n**2) * np.cos(n * tj)
    idx = (j[None, :] - j[:, None]) % n_q
    return r[idx]


def _kernel_matrices(bnd, k):
    """Return (A1, A2, M1, M2) for the double- and single-layer kernels."""
    x, dx, ddx, speed = bnd.points, bnd.tangents, bnd.accels, bnd.speeds
    n_q = bnd.n
    diff = x[:, None, :] - x[None, :, :]  # x(t_i) - x(tau_j)
    r = np.hypot(diff[..., 0], diff[..., 1])
    off = ~np.eye(n_q, dtype=bool)
    r_safe = np.where(off, r, 1.0)
    kr = k * r_safe

    # (nu |x'|)(tau_j) . (x(t_i) - x(tau_j))
    proj = dx[None, :, 1] * diff[..., 0] - dx[None, :, 0] * diff[..., 1]
    tdiff = bnd.t[:, None] - bnd.t[None, :]
    logsin = np.log(np.where(off, 4 * np.sin(tdiff / 2) ** 2, 1.0))

    j0, j1 = special.j0(kr), special.j1(kr)
    h0, h1 = special.hankel1(0, kr), special.hankel1(1, kr)

    a = 0.5j * k * h1 * proj / r_safe
    a1 = -(k / (2 * np.pi)) * j1 * proj / r_safe
    a2 = a - a1 * logsin
    a1[~off] = 0.0
    curv = ddx[:, 0] * dx[:, 1] - dx[:, 0] * ddx[:, 1]
    a2[~off] = curv / (2 * np.pi * speed**2)

    m = 0.5j * h0 * speed[None, :]
    m1 = -(1 / (2 * np.pi)) * j0 * speed[None, :]
    m2 = m - m1 * logsin
    m1[~off] = -speed / (2 * np.pi)
    m2[~off] = (0.5j - EULER_GAMMA / np.pi - np.log(k * speed / 2) / np.pi) * speed
    return a1, a2, m1, m2


def assemble_operator(problem, n_q=256, eta=None):
    """Discretize and LU-factorize the combined-field equation.

    Parameters
    ----------
    problem : ScatteringProblem
    n_q : int
        Even number of boundary nodes.
    eta : float, optional
        Coupling parameter; defaults to ``k``.
    """
    bnd = discretize(problem.obstacle, n_q)
    k = problem.k
    eta = k if eta is None else float(eta)
    a1, a2, m1, m2 = _kernel_matrices(bnd, k)
    R = kress_log_weights(bnd.n)
    h = np.pi / (bnd.n // 2)
    kernel_log = a1 - 1j * eta * m1
    kernel_smooth = a2 - 1j * eta * m2
    system = np.eye(bnd.n, dtype=complex) + R * kernel_log + h * kernel_smooth
    try:
        lu = linalg.lu_factor(system, check_finite=True)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SolverError(f"factorization failed for k={k}, n_q={n_q}: {exc}") from exc
    if not np.all(np.isfinite(lu[0])) or np.min(np.abs(np.diag(lu[0]))) == 0:
        raise SolverError(f"singular boundary system for k={k}, n_q={n_q}")
    return BoundaryOperator(problem, bnd, eta, lu)


def solve_densities(op, directions):
    """Boundary densities for each incident direction (columns)."""
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    k = op.problem.k
    rhs = -2 * np.exp(1j * k * op.boundary.points @ d.T)
    return linalg.lu_solve(op.lu, rhs)


def far_field_matrix(op, incident, observations, normalization="plane-wave"):
    """Far-field values ``F[i, j] = u_inf(observations[j]; incident[i])``."""
    scale = normalization_factor(op.problem.k, normalization)
    dens = solve_densities(op, incident)  # (n_q, n_inc)
    xhat = np.atleast_2d(np.asarray(observations, dtype=float))
    bnd, k, eta = op.boundary, op.problem.k, op.eta
    nu_speed = np.stack([bnd.tangents[:, 1], -bnd.tangents[:, 0]], axis=-1)
    phase = np.exp(-1j * k * xhat @ bnd.points.T)  # (n_obs, n_q)
    kern = (-1j * k * (xhat @ nu_speed.T) - 1j * eta * bnd.speeds[None, :]) * phase
    h = 2 * np.pi / bnd.n
    return (scale * h) * (kern @ dens).T


def far_field(op, d, observations, normalization="plane-wave"):
    """Far-field pattern for one incident direction ``d``."""
    d = np.asarray(d, dtype=float)[None, :]
    return far_field_matrix(op, d, observations, normalization)[0]


def circle_far_field_analytic(k, radius, xhat, d, n_terms=None, normalization="plane-wave"):
    """Separation-of-variables far field for a sound-soft disc at the origin.

    ``u_inf = 4i * sum_n J_n(ka)/H_n(ka) * exp(i n angle(xhat, d))``, the sum
    running over ``|n| <= n_terms``.
    """
    ka = k * radius
    n_min = int(np.ceil(ka)) + 20
    if n_terms is None:
        n_terms = n_min + 10
    if n_terms < n_min:
        warnings.warn(f"truncation {n_terms} < ka + 20 = {n_min}; series may be inaccurate")
    xhat = np.asarray(xhat, dtype=float)
    d = np.asarray(d, dtype=float)
    angle = np.arctan2(xhat[..., 1], xhat[..., 0]) - np.arctan2(d[..., 1], d[..., 0])
    n = np.arange(1, n_terms + 1)
    ratio = special.jv(n, ka) / special.hankel1(n, ka)
    series = special.j0(ka) / special.hankel1(0, ka) + 2 * np.sum(
        ratio * np.cos(np.multiply.outer(angle, n)), axis=-1
    )
    return 4j * normalization_factor(k, normalization) * series


def assemble_msr(problem, m, n_q=256, normalization="plane-wave"):
    """Exact full-aperture MSR matrix on the ``2m`` equispaced directions."""
    grid = DirectionGrid(m)
    op = assemble_operator(problem, n_q)
    entries = far_field_matrix(op, grid.directions, grid.directions, normalization)
    meta = {
        "curve": problem.obstacle.kind,
        "n_q": int(n_q),
        "eta": op.eta,
        "normalization": normalization,
    }
    return MsrMatrix.full(grid, problem.k, entries, meta=meta)
