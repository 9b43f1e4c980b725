"""Full-aperture data recovery from limited-aperture MSR data.

Two first-kind fits on an artificial circle dB enclosing the scatterer:

* Green's formula (``"mgf"``): fit the Cauchy pair (u^s, du^s/dnu) on dB,

      u_inf(xhat) = int_dB [ u^s(y) d/dnu(y) e^{-ik xhat.y} - du^s/dnu(y) e^{-ik xhat.y} ] ds(y)

* single layer (``"mslp"``): fit a density phi on dB,

      u_inf(xhat) = int_dB e^{-ik xhat.y} phi(y) ds(y)

Each fit is a Tikhonov-regularized least-squares problem on the known
observation directions of one MSR row; the fitted density is then
re-radiated to the missing directions. :func:`dr_msr` alternates small
extensions of the aperture with reciprocity completion.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import ParametricCurve, discretize
from .msr import reciprocity_complete

logger = logging.getLogger(__name__)

METHODS = ("mgf", "mslp")
THREADS_ENV = "APERTURE_COMPLETE_THREADS"


def max_workers():
    """Worker cap from ``APERTURE_COMPLETE_THREADS`` (default: CPU count)."""
    value = os.environ.get(THREADS_ENV)
    if value:
        n = int(value)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be >= 1, got {value!r}")
        return n
    return os.cpu_count() or 1


def artificial_boundary(radius=5.0, n_q=256, center=(0.0, 0.0)):
    """Quadrature nodes on the circle dB that carries the recovery densities."""
    return discretize(ParametricCurve.circle(radius, center), n_q)


def check_encloses(boundary, obstacle, samples=512):
    """Raise if ``obstacle`` is not strictly inside the circular ``boundary``."""
    curve = boundary.curve
    t = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    r = np.linalg.norm(obstacle.point(t) - np.asarray(curve.center), axis=-1)
    if r.max() >= curve.radius:
        raise ValueError(
            f"obstacle reaches radius {r.max():.3f}, not inside dB of radius {curve.radius}"
        )


def _phase(boundary, k, observations):
    xhat = np.atleast_2d(np.asarray(observations, dtype=float))
    return xhat, np.exp(-1j * k * xhat @ boundary.points.T)


def mslp_operator(boundary, k, observations):
    """Quadrature matrix of the single-layer far-field operator, shape (n_obs, n_q)."""
    _, e = _phase(boundary, k, observations)
    return e * boundary.weights[None, :]


def mgf_operator(boundary, k, observations):
    """Quadrature matrix of the Green's-formula far-field operator.

    Columns are ordered ``[phi_1..phi_n | psi_1..psi_n]``; shape (n_obs, 2n).
    """
    xhat, e = _phase(boundary, k, observations)
    ew = e * boundary.weights[None, :]
    dnu = -1j * k * (xhat @ boundary.normals.T)
    return np.hstack([dnu * ew, -ew])


def operator(method, boundary, k, observations):
    if method == "mgf":
        return mgf_operator(boundary, k, observations)
    if method == "mslp":
        return mslp_operator(boundary, k, observations)
    raise ValueError(f"unknown recovery method {method!r}; expected one of {METHODS}")


def tikhonov_filter(s, alpha):
    return s / (s**2 + alpha)


def tikhonov_solve(A, b, alpha):
    """Minimize ``||A c - b||^2 + alpha ||c||^2`` through the SVD of ``A``.

    ``b`` may be a vector or a matrix of right-hand sides (columns).
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha!r}")
    A = np.asarray(A)
    b = np.asarray(b)
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"A has {A.shape[0]} rows but b has {b.shape[0]}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ValueError("non-finite values in Tikhonov system")
    u, s, vh = np.linalg.svd(A, full_matrices=False)
    f = tikhonov_filter(s, alpha)
    coef = u.conj().T @ b
    coef = (f[:, None] * coef) if coef.ndim == 2 else f * coef
    return vh.conj().T @ coef


def _fit_and_eval(A_known, A_target, B, alpha):
    """``A_target @ tikhonov_solve(A_known, B, alpha)`` for a block of rows ``B``."""
    c = tikhonov_solve(A_known, B, alpha)
    return A_target @ c


@dataclass(frozen=True)
class RecoverySchedule:
    method: str = "mgf"
    t: int = 5

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown recovery method {self.method!r}")
        if int(self.t) != self.t or self.t < 1:
            raise ValueError(f"step size t must be a positive integer, got {self.t!r}")


def _recover(F, rows_targets, method, boundary, alpha):
    """Recover the given ``{row: target columns}`` and return a new matrix.

    Rows sharing the same known pattern and target pattern share one SVD.
    """
    dirs = F.grid.directions
    n = F.grid.size
    groups = {}
    for i, targets in rows_targets.items():
        tmask = np.zeros(n, dtype=bool)
        tmask[targets] = True
        tmask &= ~F.mask[i]
        if not tmask.any():
            continue
        if not F.mask[i].any():
            raise ValueError(f"row {i} has no known entries to fit")
        key = (F.mask[i].tobytes(), tmask.tobytes())
        groups.setdefault(key, (F.mask[i].copy(), tmask, []))[2].append(i)

    full_op = operator(method, boundary, F.k, dirs)

    def work(group):
        known, tmask, rows = group
        B = F.entries[np.ix_(rows, np.flatnonzero(known))].T
        vals = _fit_and_eval(full_op[known], full_op[tmask], B, alpha)
        return rows, tmask, vals.T

    entries = F.entries.copy()
    mask = F.mask.copy()
    prov = F.provenance.copy()
    jobs = list(groups.values())
    workers = min(max_workers(), len(jobs)) if jobs else 1
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(g) for g in jobs]
    for rows, tmask, vals in results:
        idx = np.ix_(rows, np.flatnonzero(tmask))
        entries[idx] = vals
        mask[idx] = True
        prov[idx] = method
    logger.debug("recovered %d rows in %d groups", len(rows_targets), len(jobs))
    return F.replace(entries=entries, mask=mask, provenance=prov)


def recover_row(F, i, method, boundary, alpha, targets):
    """Fill the unknown ``targets`` of row ``i`` from that row's known entries.

    Known entries among ``targets`` are left untouched.
    """
    targets = np.asarray(targets, dtype=int)
    if not F.mask[i].any():
        raise ValueError(f"row {i} has no known entries to fit")
    if targets.size == 0:
        return F
    return _recover(F, {i: targets}, method, boundary, alpha)


def step_targets(l, t, s, n):
    """Observation columns added at step ``s`` (0-based, clipped to ``[0, n)``).

    The block right after the ``l`` leading known columns and the block of
    ``t`` columns ending ``s*t`` before the last column, so both edges of the
    aperture grow towards each other.
    """
    front = np.arange(l, l + t)
    back = np.arange(n - s * t - t, n - s * t)
    cols = np.concatenate([front, back])
    return np.unique(cols[(cols >= 0) & (cols < n)])


def dr_msr(F_limit, schedule, boundary, alpha=1e-2):
    """Recover the full MSR matrix from its first ``l`` columns.

    Each step fits every incomplete row on all of its currently known
    entries, fills the :func:`step_targets` columns, then closes the mask
    under reciprocity. Stops once the matrix is complete.
    """
    l = F_limit.known_columns()
    n = F_limit.grid.size
    if l is None or l == 0:
        raise ValueError("dr_msr needs a mask of the first l observation columns")
    F = reciprocity_complete(F_limit)
    s = 0
    steps = 0
    while not F.is_complete:
        if steps >= n:
            raise RuntimeError(f"dr_msr did not terminate within {n} steps")
        targets = step_targets(l, schedule.t, s, n)
        todo = {i: targets for i in range(n) if not F.mask[i].all()}
        F = _recover(F, todo, schedule.method, boundary, alpha)
        F = reciprocity_complete(F)
        l += schedule.t
        s += 1
        steps += 1
    meta = {
        **F.meta,
        "method": schedule.method,
        "t": int(schedule.t),
        "alpha": float(alpha),
        "radius": float(boundary.curve.radius),
        "n_q_recovery": int(boundary.n),
        "steps": steps,
    }
    return F.replace(meta=meta)
