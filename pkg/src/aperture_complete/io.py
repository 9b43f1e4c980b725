"""File formats: MSR JSON, indicator grids (CSV/PGM), run configs.

All writers are deterministic and atomic (temp file + rename). Floats are
written with 17 significant digits, which round-trips IEEE doubles exactly.
"""

import json
import os
import re
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .imaging import ImagingGrid
from .msr import DirectionGrid, MsrMatrix

MSR_FORMAT = "msr-v1"
NORMALIZATION_TAGS = {"plane-wave": "phi-to-plane-wave", "standard": "standard-asymptotic"}


def _g(x):
    return format(float(x), ".17g")


def atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def msr_to_json(F):
    """Serialize ``F``; rows are incident directions 1..2m in order."""
    normalization = F.meta.get("normalization", "plane-wave")
    meta = {key: val for key, val in F.meta.items() if key not in ("curve", "normalization")}
    meta["index_base"] = 1
    rows = []
    for row in F.entries:
        rows.append("[" + ",".join(f"[{_g(z.real)},{_g(z.imag)}]" for z in row) + "]")
    head = {
        "format": MSR_FORMAT,
        "k": F.k,
        "m": F.m,
        "curve": F.meta.get("curve"),
        "normalization": NORMALIZATION_TAGS.get(normalization, normalization),
    }
    parts = [json.dumps(head, sort_keys=False)[:-1]]
    parts.append(',\n"entries":[\n' + ",\n".join(rows) + "\n]")
    parts.append(',\n"mask":' + json.dumps(F.mask.tolist(), separators=(",", ":")))
    parts.append(',\n"provenance":' + json.dumps(F.provenance.tolist(), separators=(",", ":")))
    parts.append(',\n"meta":' + json.dumps(meta, sort_keys=True, default=_json_default) + "}\n")
    return "".join(parts)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def msr_from_json(text):
    doc = json.loads(text)
    if doc.get("format") != MSR_FORMAT:
        raise ValueError(f"not an {MSR_FORMAT} document (format={doc.get('format')!r})")
    grid = DirectionGrid(int(doc["m"]))
    raw = np.asarray(doc["entries"], dtype=float)
    if raw.shape != (grid.size, grid.size, 2):
        raise ValueError(f"entries have shape {raw.shape}, expected {(grid.size, grid.size, 2)}")
    entries = raw[..., 0] + 1j * raw[..., 1]
    inverse = {v: k for k, v in NORMALIZATION_TAGS.items()}
    meta = dict(doc.get("meta", {}))
    meta.pop("index_base", None)
    meta["curve"] = doc.get("curve")
    meta["normalization"] = inverse.get(doc.get("normalization"), doc.get("normalization"))
    return MsrMatrix(grid, float(doc["k"]), entries, doc["mask"], doc["provenance"], meta)


def write_msr(path, F):
    atomic_write(path, msr_to_json(F))


def read_msr(path):
    return msr_from_json(Path(path).read_text())


def provenance_csv(F):
    return "".join(",".join(row) + "\n" for row in F.provenance)


def grid_to_csv(grid):
    """``x,y,value`` rows, x fastest, starting at ``(x_min, y_min)``."""
    xs, ys = grid.xs, grid.ys
    lines = ["x,y,value"]
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            lines.append(f"{_g(x)},{_g(y)},{_g(grid.values[ix, iy])}")
    return "\n".join(lines) + "\n"


def grid_from_csv(text):
    data = np.loadtxt(text.splitlines(), delimiter=",", skiprows=1, ndmin=2)
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    n_x, n_y = len(xs), len(ys)
    if len(data) != n_x * n_y:
        raise ValueError("CSV does not describe a full rectangular grid")
    values = data[:, 2].reshape(n_y, n_x).T
    return ImagingGrid(xs[0], xs[-1], ys[0], ys[-1], n_x, n_y, values)


def grid_to_pgm(grid):
    """Plain PGM heat map; the top row is ``y_max``."""
    v = grid.values
    vmax = v.max()
    scaled = np.rint(255 * v / vmax).astype(int) if vmax > 0 else np.zeros_like(v, dtype=int)
    lines = ["P2", f"{grid.n_x} {grid.n_y}", "255"]
    for iy in range(grid.n_y - 1, -1, -1):
        lines.append(" ".join(str(p) for p in scaled[:, iy]))
    return "\n".join(lines) + "\n"


def write_grid(path, grid):
    atomic_write(path, grid_to_csv(grid))


def read_grid(path):
    return grid_from_csv(Path(path).read_text())


@dataclass
class RunConfig:
    """Experiment parameters; the defaults are the k = 6 kite setting on 300 directions."""

    obstacle: str = "kite"
    k: float = 6.0
    m: int = 150
    nq: int = 256
    aperture: str = "0.25"
    delta: float = 0.05
    seed: int = 0
    method: str = "mgf"
    t: int = 5
    alpha: float = 1e-2
    radius: float = 5.0
    grid: str = "121x121"
    bounds: str = "-6,6,-6,6"
    indicator: str = "dsm"
    normalization: str = "plane-wave"
    out: str = "."

    def validate(self):
        from .geometry import CURVE_KINDS
        from .recovery import METHODS

        if self.obstacle not in CURVE_KINDS:
            raise ValueError(f"unknown obstacle {self.obstacle!r}")
        for name in ("k", "alpha", "radius"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("m", "nq", "t"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.indicator not in ("dsm", "fm"):
            raise ValueError(f"unknown indicator {self.indicator!r}")
        self.aperture_columns()
        self.imaging_grid()
        return self

    def aperture_columns(self, m=None):
        return parse_aperture(self.aperture, 2 * (m or self.m))

    def imaging_grid(self):
        match = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", self.grid)
        if not match:
            raise ValueError(f"grid must look like NxM, got {self.grid!r}")
        try:
            b = [float(v) for v in self.bounds.split(",")]
        except ValueError:
            b = []
        if len(b) != 4:
            raise ValueError(f"bounds must be four comma-separated numbers, got {self.bounds!r}")
        return ImagingGrid(b[0], b[1], b[2], b[3], int(match.group(1)), int(match.group(2)))


_ANGLE = re.compile(r"(\d*)\s*pi(?:\s*/\s*(\d+))?")


def parse_aperture(text, n):
    """Number of leading observation columns for an aperture spec.

    Accepts ``l=N``, a fraction of the full circle such as ``0.25``, or an
    interval ``(0,pi/2)`` / ``(0,2pi/3)`` / ``(0,π)``.
    """
    s = str(text).strip().replace("π", "pi")
    if s.startswith("l="):
        l = int(s[2:])
    elif s.startswith("("):
        inner = s.strip("()").split(",")
        if len(inner) != 2 or float(inner[0]) != 0:
            raise ValueError(f"aperture interval must start at 0, got {text!r}")
        match = _ANGLE.fullmatch(inner[1].strip())
        if not match:
            raise ValueError(f"cannot parse aperture {text!r}")
        num = int(match.group(1) or 1)
        den = int(match.group(2) or 1)
        l = round(n * num / (2 * den))
    else:
        frac = float(s)
        if not 0 < frac <= 1:
            raise ValueError(f"aperture fraction must lie in (0, 1], got {frac}")
        l = round(frac * n)
    if l < 1:
        raise ValueError(f"aperture {text!r} keeps no columns")
    return int(l)


def parse_config_file(path):
    """Flat ``key = value`` file; ``#`` starts a comment. Unknown keys raise."""
    known = {f.name: f.type for f in fields(RunConfig)}
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    return values


def coerce(name, value):
    typ = {f.name: f.type for f in fields(RunConfig)}[name]
    conv = {"float": float, "int": int, "str": str}.get(typ if isinstance(typ, str) else typ.__name__)
    return conv(value)
