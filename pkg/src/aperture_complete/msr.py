"""Multi-static response matrices, aperture masks and reciprocity completion.

Indexing is 0-based throughout: row ``i`` is the incident direction ``d_i``
and column ``j`` the observation direction ``xhat_j``, both taken from the
same :class:`DirectionGrid` with angles ``i*pi/m``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

PROVENANCE = ("measured", "symmetry", "mgf", "mslp", "unknown")
_RANK = {"measured": 3, "symmetry": 2, "mgf": 1, "mslp": 1, "unknown": 0}


@dataclass(frozen=True)
class DirectionGrid:
    """``2m`` equispaced unit directions, the first along the x-axis."""

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")

    @property
    def size(self):
        return 2 * self.m

    @property
    def angles(self):
        return np.arange(2 * self.m) * np.pi / self.m

    @property
    def directions(self):
        a = self.angles
        return np.stack([np.cos(a), np.sin(a)], axis=-1)

    def antipode(self, i):
        return (np.asarray(i) + self.m) % (2 * self.m)


def sigma(i, j, m):
    """Reciprocity partner of entry ``(i, j)``: ``(j + m, i + m) mod 2m``."""
    n = 2 * m
    return (np.asarray(j) + m) % n, (np.asarray(i) + m) % n


def _readonly(a):
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class MsrMatrix:
    """A (partially known) MSR matrix.

    Attributes
    ----------
    grid : DirectionGrid
    k : float
        Wavenumber.
    entries : ndarray of complex, shape (2m, 2m)
        Unknown entries are stored as zero.
    mask : ndarray of bool, shape (2m, 2m)
        True where the entry is known.
    provenance : ndarray of str, shape (2m, 2m)
        One of ``PROVENANCE`` per entry.
    meta : dict
        Free-form metadata carried through file round trips.
    """

    grid: DirectionGrid
    k: float
    entries: np.ndarray = field(repr=False)
    mask: np.ndarray = field(repr=False)
    provenance: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.grid.size
        entries = np.asarray(self.entries, dtype=complex)
        mask = np.asarray(self.mask, dtype=bool)
        prov = np.asarray(self.provenance, dtype="<U8")
        for name, arr in (("entries", entries), ("mask", mask), ("provenance", prov)):
            if arr.shape != (n, n):
                raise ValueError(f"{name} has shape {arr.shape}, expected {(n, n)}")
        if not np.all(np.isfinite(entries[mask])):
            raise ValueError("known entries must be finite")
        if np.any((prov == "unknown") == mask):
            raise ValueError("provenance 'unknown' must coincide with ~mask")
        object.__setattr__(self, "entries", _readonly(entries))
        object.__setattr__(self, "mask", _readonly(mask))
        object.__setattr__(self, "provenance", _readonly(prov))

    @classmethod
    def full(cls, grid, k, entries, meta=None):
        n = grid.size
        return cls(
            grid,
            float(k),
            entries,
            np.ones((n, n), dtype=bool),
            np.full((n, n), "measured"),
            dict(meta or {}),
        )

    @property
    def m(self):
        return self.grid.m

    @property
    def is_complete(self):
        return bool(self.mask.all())

    def known_columns(self):
        """Number ``l`` of leading known columns if the mask is exactly that, else None."""
        cols = self.mask.all(axis=0)
        l = int(np.argmin(cols)) if not cols.all() else self.grid.size
        expected = np.zeros_like(self.mask)
        expected[:, :l] = True
        return l if np.array_equal(self.mask, expected) else None

    def replace(self, **changes):
        kw = dict(
            grid=self.grid,
            k=self.k,
            entries=self.entries,
            mask=self.mask,
            provenance=self.provenance,
            meta=dict(self.meta),
        )
        kw.update(changes)
        return MsrMatrix(**kw)


def restrict(F, l):
    """Keep the first ``l`` observation columns; the rest become unknown."""
    n = F.grid.size
    if int(l) != l or not 1 <= l < n:
        raise ValueError(f"aperture l must satisfy 1 <= l < {n}, got {l!r}")
    l = int(l)
    if not F.mask[:, :l].all():
        raise ValueError(f"the first {l} columns must be known")
    mask = np.zeros((n, n), dtype=bool)
    mask[:, :l] = True
    entries = np.where(mask, F.entries, 0)
    prov = np.where(mask, "measured", "unknown")
    return F.replace(entries=entries, mask=mask, provenance=prov, meta={**F.meta, "l": l})


def blocks(F):
    """The four ``m x m`` blocks ``(F11, F12, F21, F22)``."""
    m = F.m
    e = F.entries
    return e[:m, :m], e[:m, m:], e[m:, :m], e[m:, m:]


def assemble_blocks(f11, f12, f21, f22):
    return np.block([[f11, f12], [f21, f22]])


def rearranged(F):
    """Block rearrangement ``[[F12, F11], [F22, F21]]``, symmetric under reciprocity."""
    f11, f12, f21, f22 = blocks(F)
    return assemble_blocks(f12, f11, f22, f21)


def reciprocity_complete(F, conflict_rtol=None):
    """Close the known set under the reciprocity involution.

    For each pair ``(p, sigma(p))`` the value of higher standing
    (measured > symmetry copy > recovered) is copied onto the other. A copy
    of a measured value is tagged ``"symmetry"``; a copy of a recovered value
    keeps the recovery tag. Measured entries are never overwritten. When
    both partners are measured and disagree beyond ``conflict_rtol`` (default
    ``10 * eps``), the count and largest gap are stored in
    ``meta["reciprocity_conflicts"]``.
    """
    m = F.m
    n = 2 * m
    if conflict_rtol is None:
        conflict_rtol = 10 * np.finfo(float).eps
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    si, sj = sigma(ii, jj, m)

    entries = F.entries.copy()
    mask = F.mask.copy()
    prov = F.provenance.copy()
    rank = np.vectorize(_RANK.get, otypes=[int])(prov)
    partner_rank = rank[si, sj]

    take = (partner_rank > rank) & (partner_rank >= 2)
    take |= (partner_rank > 0) & (rank == 0)
    src_prov = prov[si, sj]
    entries[take] = F.entries[si, sj][take]
    mask[take] = True
    prov[take] = np.where(np.isin(src_prov[take], ("measured", "symmetry")), "symmetry", src_prov[take])

    meta = dict(F.meta)
    both = (prov == "measured") & (F.provenance[si, sj] == "measured")
    if both.any():
        gap = np.abs(F.entries - F.entries[si, sj])
        bad = both & (gap > conflict_rtol * np.abs(F.entries))
        if bad.any():
            meta["reciprocity_conflicts"] = {
                "pairs": (int(bad.sum()) + 1) // 2,
                "max_gap": float(gap[bad].max()),
            }
            logger.debug("reciprocity: %d measured pairs disagree", int(bad.sum()))
    return F.replace(entries=entries, mask=mask, provenance=prov, meta=meta)


@dataclass(frozen=True)
class NoiseSpec:
    delta: float
    seed: int = 0

    def __post_init__(self):
        if not self.delta >= 0:
            raise ValueError(f"noise level must be nonnegative, got {self.delta!r}")


def _known_block(mask):
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    if rows.size == 0:
        raise ValueError("no known entries")
    if not mask[np.ix_(rows, cols)].all():
        raise ValueError("known entries do not form a rectangular block")
    return rows, cols


def add_noise(F, spec):
    """Relative Gaussian noise on the known block.

    ``F_block + delta * ||F_block|| * (R1 + i R2) / ||R1 + i R2||`` with the
    spectral norm and ``R1, R2`` standard normal from ``default_rng(seed)``.
    """
    if spec.delta == 0:
        return F.replace(meta={**F.meta, "delta": 0.0, "seed": int(spec.seed), "noise_norm": "spectral"})
    rows, cols = _known_block(F.mask)
    ix = np.ix_(rows, cols)
    block = F.entries[ix]
    rng = np.random.default_rng(spec.seed)
    r1 = rng.standard_normal(block.shape)
    r2 = rng.standard_normal(block.shape)
    noise = r1 + 1j * r2
    scale = spec.delta * np.linalg.norm(block, 2) / np.linalg.norm(noise, 2)
    entries = F.entries.copy()
    entries[ix] = block + scale * noise
    meta = {**F.meta, "delta": float(spec.delta), "seed": int(spec.seed), "noise_norm": "spectral"}
    return F.replace(entries=entries, meta=meta)


@dataclass(frozen=True)
class ErrorMetrics:
    max_abs: float
    rel_fro: float
    count: int


def error_metrics(reference, other, region=None):
    """Compare ``other`` against ``reference`` on ``region`` (default: all entries).

    Only entries known in both matrices are compared; an empty comparison
    set raises ``ValueError``.
    """
    if reference.grid != other.grid:
        raise ValueError("MSR matrices live on different direction grids")
    sel = reference.mask & other.mask
    if region is not None:
        region = np.asarray(region, dtype=bool)
        if region.shape != sel.shape:
            raise ValueError(f"region shape {region.shape} does not match {sel.shape}")
        sel &= region
    if not sel.any():
        raise ValueError("comparison region contains no known entries")
    a = reference.entries[sel]
    b = other.entries[sel]
    diff = np.abs(a - b)
    ref = np.linalg.norm(a)
    rel = float(np.linalg.norm(diff) / ref) if ref > 0 else float(np.linalg.norm(diff))
    return ErrorMetrics(float(diff.max()), rel, int(sel.sum()))
