"""Sampling-type indicators computed from an MSR matrix.

* direct sampling: ``I(z) = |a(z)^T F b(z)|^2`` with ``a_i = exp(-ik z.d_i)``
  and ``b_j = exp(ik z.xhat_j)``; peaks on or near the boundary.
* factorization: ``I(z) = [sum_n |<phi_z, psi_n>|^2 / |sigma_n|]^{-1}`` over
  the eigensystem of ``F# = |Re F| + |Im F|``; large inside the scatterer.
"""

from dataclasses import dataclass, field

import numpy as np

EIGEN_FLOOR = 1e-14
_CHUNK = 4096


@dataclass(frozen=True)
class ImagingGrid:
    """Rectangular sampling grid; ``values[ix, iy]`` sits at ``(xs[ix], ys[iy])``."""

    x_min: float = -6.0
    x_max: float = 6.0
    y_min: float = -6.0
    y_max: float = 6.0
    n_x: int = 121
    n_y: int = 121
    values: np.ndarray = field(default=None, repr=False, compare=False)
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("grid needs at least one point per axis")
        if not (self.x_max >= self.x_min and self.y_max >= self.y_min):
            raise ValueError("grid bounds are inverted")
        if self.values is not None:
            v = np.asarray(self.values, dtype=float)
            if v.shape != (self.n_x, self.n_y):
                raise ValueError(f"values shape {v.shape} != {(self.n_x, self.n_y)}")
            if not np.all(np.isfinite(v)) or np.any(v < 0):
                raise ValueError("indicator values must be finite and nonnegative")
            object.__setattr__(self, "values", v)

    @property
    def xs(self):
        return np.linspace(self.x_min, self.x_max, self.n_x)

    @property
    def ys(self):
        return np.linspace(self.y_min, self.y_max, self.n_y)

    @property
    def spacing(self):
        dx = (self.x_max - self.x_min) / max(self.n_x - 1, 1)
        dy = (self.y_max - self.y_min) / max(self.n_y - 1, 1)
        return dx, dy

    def points(self):
        """Sampling points, shape (n_x, n_y, 2)."""
        X, Y = np.meshgrid(self.xs, self.ys, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def with_values(self, values, **meta):
        return ImagingGrid(
            self.x_min, self.x_max, self.y_min, self.y_max, self.n_x, self.n_y,
            values, {**self.meta, **meta},
        )


def _bilinear(F, dirs_in, dirs_obs, k, grid):
    z = grid.points().reshape(-1, 2)
    out = np.empty(len(z))
    for s in range(0, len(z), _CHUNK):
        zc = z[s:s + _CHUNK]
        a = np.exp(-1j * k * zc @ dirs_in.T)
        b = np.exp(1j * k * zc @ dirs_obs.T)
        out[s:s + _CHUNK] = np.abs(np.einsum("pi,ij,pj->p", a, F, b, optimize=True)) ** 2
    return out.reshape(grid.n_x, grid.n_y)


def dsm_full(F, grid=None):
    """Direct sampling indicator from a complete MSR matrix."""
    grid = grid or ImagingGrid()
    if not F.is_complete:
        raise ValueError("dsm_full needs a complete MSR matrix; use dsm_limited")
    dirs = F.grid.directions
    return grid.with_values(_bilinear(F.entries, dirs, dirs, F.k, grid), indicator="dsm")


def dsm_limited(F_limit, grid=None):
    """Direct sampling indicator restricted to the ``l`` known observation columns."""
    grid = grid or ImagingGrid()
    l = F_limit.known_columns()
    if l is None or l == 0:
        raise ValueError("dsm_limited needs a mask of the first l observation columns")
    dirs = F_limit.grid.directions
    vals = _bilinear(F_limit.entries[:, :l], dirs, dirs[:l], F_limit.k, grid)
    return grid.with_values(vals, indicator="dsm", l=l)


def hermitian_abs(A):
    """``|A| = V |Lambda| V^*`` for Hermitian ``A``."""
    lam, v = np.linalg.eigh(A)
    return (v * np.abs(lam)) @ v.conj().T


def f_sharp(F):
    """``|Re F| + |Im F|`` with the Hermitian real and imaginary parts."""
    F = np.asarray(F)
    re = (F + F.conj().T) / 2
    im = (F - F.conj().T) / 2j
    return hermitian_abs(re) + hermitian_abs(im)


def fm_eigensystem(F):
    """Eigenvalues and eigenvectors of ``F#`` for the observation-by-incidence operator.

    The MSR matrix stores incidence along rows; the factorization test acts
    on the far-field operator whose rows are observation directions, i.e.
    ``F.T``.
    """
    fs = f_sharp(np.asarray(F).T)
    lam, psi = np.linalg.eigh(fs)
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(psi))):
        raise FloatingPointError("non-finite eigendecomposition of F#")
    return lam, psi


def fm_indicator(F, grid=None, floor=EIGEN_FLOOR):
    """Factorization-method indicator from a complete MSR matrix.

    Eigenvalues below ``floor * max|sigma|`` are left out of the series.
    """
    grid = grid or ImagingGrid()
    if not F.is_complete:
        raise ValueError("fm_indicator needs a complete (recovered or exact) MSR matrix")
    lam, psi = fm_eigensystem(F.entries)
    keep = np.abs(lam) > floor * np.abs(lam).max()
    lam, psi = lam[keep], psi[:, keep]
    dirs = F.grid.directions
    z = grid.points().reshape(-1, 2)
    out = np.empty(len(z))
    for s in range(0, len(z), _CHUNK):
        phi = np.exp(-1j * F.k * z[s:s + _CHUNK] @ dirs.T)
        proj = phi.conj() @ psi
        out[s:s + _CHUNK] = 1.0 / (np.abs(proj) ** 2 / np.abs(lam)).sum(axis=1)
    vals = out.reshape(grid.n_x, grid.n_y)
    return grid.with_values(vals, indicator="fm", eigen_floor=floor, eigen_kept=int(keep.sum()))


def normalize(grid):
    """Scale values to a maximum of one (no-op for an all-zero grid)."""
    vmax = grid.values.max()
    if vmax > 0:
        return grid.with_values(grid.values / vmax, normalized=True)
    return grid
