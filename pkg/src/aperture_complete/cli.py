"""Command-line front end.

    aperture-complete forward  --obstacle kite --m 150 --out run/
    aperture-complete degrade  run/forward.json --aperture "(0,pi/2)" --out run/
    aperture-complete recover  run/degraded.json --method mslp --out run/
    aperture-complete image    run/recovered.json --indicator fm --out run/
    aperture-complete compare  run/forward.json run/recovered.json --region symmetry
    aperture-complete demo     --out run/

Exit codes: 0 success, 2 configuration or validation error, 3 numerical failure.
"""

import argparse
import json
import logging
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import forward, imaging, io, msr, recovery
from .geometry import ParametricCurve

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
REGIONS = ("all", "known", "measured", "symmetry", "recovered", "hidden")


class ConfigError(ValueError):
    pass


def _add_config_flags(p):
    for f in fields(io.RunConfig):
        p.add_argument(f"--{f.name}", dest=f.name, default=None, metavar=f.name.upper())
    p.add_argument("--config", default=None, help="flat 'key = value' file")


def build_parser():
    parser = argparse.ArgumentParser(prog="aperture-complete", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, takes_input in (
        ("forward", False), ("degrade", True), ("recover", True), ("image", True), ("demo", False),
    ):
        p = sub.add_parser(name)
        if takes_input:
            p.add_argument("input")
        _add_config_flags(p)
    p = sub.add_parser("compare")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--region", choices=REGIONS, default="all")
    return parser


def load_config(args):
    values = {}
    if getattr(args, "config", None):
        values.update(io.parse_config_file(args.config))
    for f in fields(io.RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    try:
        cfg = io.RunConfig(**{k: io.coerce(k, v) for k, v in values.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def cmd_forward(cfg):
    problem = forward.ScatteringProblem(cfg.k, ParametricCurve(cfg.obstacle))
    F = forward.assemble_msr(problem, cfg.m, cfg.nq, cfg.normalization)
    path = Path(cfg.out) / "forward.json"
    io.write_msr(path, F)
    return path


def cmd_degrade(cfg, input_path):
    F = io.read_msr(input_path)
    l = cfg.aperture_columns(F.m)
    if l >= F.grid.size:
        raise ConfigError(f"aperture keeps {l} of {F.grid.size} columns; need l < 2m")
    G = msr.add_noise(msr.restrict(F, l), msr.NoiseSpec(cfg.delta, cfg.seed))
    path = Path(cfg.out) / "degraded.json"
    io.write_msr(path, G)
    return path


def cmd_recover(cfg, input_path):
    F = io.read_msr(input_path)
    if F.known_columns() is None:
        raise ConfigError("recover needs a mask of the first l observation columns")
    bnd = recovery.artificial_boundary(cfg.radius, cfg.nq)
    R = recovery.dr_msr(F, recovery.RecoverySchedule(cfg.method, cfg.t), bnd, cfg.alpha)
    out = Path(cfg.out)
    io.write_msr(out / "recovered.json", R)
    io.atomic_write(out / "provenance.csv", io.provenance_csv(R))
    return out / "recovered.json"


def cmd_image(cfg, input_path):
    F = io.read_msr(input_path)
    grid = cfg.imaging_grid()
    if cfg.indicator == "fm":
        if not F.is_complete:
            raise ConfigError("the factorization indicator needs full-aperture (recovered) data")
        G = imaging.fm_indicator(F, grid)
        stem = "fm"
    elif F.is_complete:
        G = imaging.dsm_full(F, grid)
        stem = "dsm"
    else:
        if F.known_columns() is None:
            raise ConfigError("dsm on partial data needs a mask of the first l columns")
        G = imaging.dsm_limited(F, grid)
        stem = "dsm_limited"
    out = Path(cfg.out)
    io.write_grid(out / f"{stem}_raw.csv", G)
    io.write_grid(out / f"{stem}_normalized.csv", imaging.normalize(G))
    io.atomic_write(out / f"{stem}.pgm", io.grid_to_pgm(G))
    return out / f"{stem}_raw.csv"


def _region_mask(name, A, B):
    if name == "all":
        return None
    if name == "known":
        return A.mask & B.mask
    if name == "measured":
        return B.provenance == "measured"
    if name == "symmetry":
        return B.provenance == "symmetry"
    if name == "recovered":
        return np.isin(B.provenance, ("mgf", "mslp"))
    return B.provenance != "measured"  # hidden


def cmd_compare(a, b, region="all"):
    """Metrics report for two MSR files or two indicator grids."""
    if str(a).endswith(".csv") or str(b).endswith(".csv"):
        ga, gb = io.read_grid(a), io.read_grid(b)
        if (ga.n_x, ga.n_y) != (gb.n_x, gb.n_y):
            raise ConfigError("grids have different shapes")
        pts = ga.points()
        ia = np.unravel_index(ga.values.argmax(), ga.values.shape)
        ib = np.unravel_index(gb.values.argmax(), gb.values.shape)
        na, nb = imaging.normalize(ga).values, imaging.normalize(gb).values
        return {
            "kind": "grid",
            "max_abs": float(np.abs(ga.values - gb.values).max()),
            "max_abs_normalized": float(np.abs(na - nb).max()),
            "argmax_a": pts[ia].tolist(),
            "argmax_b": pts[ib].tolist(),
            "argmax_distance": float(np.linalg.norm(pts[ia] - pts[ib])),
        }
    A, B = io.read_msr(a), io.read_msr(b)
    if A.grid != B.grid:
        raise ConfigError("MSR files have different direction grids")
    metrics = msr.error_metrics(A, B, _region_mask(region, A, B))
    return {"kind": "msr", "region": region, "max_abs": metrics.max_abs,
            "rel_fro": metrics.rel_fro, "count": metrics.count}


def cmd_demo(cfg):
    """Forward, degrade, recover and image one aperture; every artifact lands in ``out``."""
    out = Path(cfg.out)
    fwd = cmd_forward(cfg)
    deg = cmd_degrade(cfg, fwd)
    rec = cmd_recover(cfg, deg)
    written = [fwd, deg, rec]
    for sub, src, indicator in (
        ("limited", deg, "dsm"), ("exact", fwd, "dsm"), ("recovered", rec, "dsm"), ("recovered", rec, "fm"),
    ):
        sub_cfg = io.RunConfig(**{**cfg.__dict__, "indicator": indicator, "out": str(out / sub)})
        written.append(cmd_image(sub_cfg, src))
    report = cmd_compare(fwd, rec, "hidden")
    io.atomic_write(out / "report.json", json.dumps(report, indent=2, sort_keys=True) + "\n")
    return written


def _attach_values(argv):
    """Turn ``--flag -6,6,...`` into ``--flag=-6,6,...`` so argparse accepts negative values."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok.startswith("--") and "=" not in tok:
            nxt = next(it, None)
            if nxt is not None and nxt[:1] == "-" and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        if args.command == "compare":
            print(json.dumps(cmd_compare(args.a, args.b, args.region), indent=2, sort_keys=True))
            return EXIT_OK
        cfg = load_config(args)
        if args.command == "forward":
            result = cmd_forward(cfg)
        elif args.command == "degrade":
            result = cmd_degrade(cfg, args.input)
        elif args.command == "recover":
            result = cmd_recover(cfg, args.input)
        elif args.command == "image":
            result = cmd_image(cfg, args.input)
        else:
            result = cmd_demo(cfg)
        print(result if not isinstance(result, list) else "\n".join(map(str, result)))
        return EXIT_OK
    except (forward.SolverError, FloatingPointError, np.linalg.LinAlgError, RuntimeError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
