"""Command line driver: ``cavitypat {phantom,forward,reconstruct,bound,metrics}``."""

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import io
from .config import ConfigError, RunConfig, load_config
from .forward import simulate_boundary
from .grid import BoundarySeries, all_faces, default_faces
from .inversion import contraction_bound, reconstruct, six_face_reconstruct
from .metrics import ErrorReport, line_profile, rel_error
from .phantom import add_noise, ball_phantom
from .window import sufficient_T

# oracle-scale truncation used by `bound` unless --trunc is given
_BOUND_TRUNC = {2: 32, 3: 12}


def _add_config_args(p):
    p.add_argument("--config", help="run configuration file")
    p.add_argument("--dim", type=int)
    p.add_argument("--n-nodes", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--T", type=float, dest="T")
    p.add_argument("--trunc", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--faces", nargs="+")
    p.add_argument("--six-face", action="store_true", default=None)
    p.add_argument("--window-kind", choices=("bump", "bump4"))
    p.add_argument("--window-oversample", type=int)
    p.add_argument("--freq-oversample", type=int)
    p.add_argument("--backend", choices=("direct", "fast"))
    p.add_argument("--early-stop", action="store_true", default=None)


_OVERRIDES = (
    "dim", "n_nodes", "dt", "T", "trunc", "iterations", "faces", "six_face",
    "window_kind", "window_oversample", "freq_oversample", "backend", "early_stop",
)


def _run_config(args, **extra):
    cfg = load_config(args.config) if args.config else RunConfig()
    kw = {k: getattr(args, k) for k in _OVERRIDES}
    if kw["faces"] is not None:
        kw["faces"] = tuple(kw["faces"])
    if kw["dt"] is not None or kw["T"] is not None:
        # a flag-given dt or T replaces the file's time axis
        cfg = replace(cfg, n_time=None)
    kw.update(extra)
    return cfg.override(**kw)


def _match_volume(cfg, f):
    """Take dim and n_nodes from the volume, rejecting a conflicting config."""
    for name, value in (("dim", f.ndim), ("n_nodes", f.shape[0])):
        if name in cfg.lines and getattr(cfg, name) != value:
            raise ConfigError(f"config {name}={getattr(cfg, name)} but volume has {value}")
    return cfg.override(dim=f.ndim, n_nodes=f.shape[0])


def cmd_phantom(args):
    cfg = _run_config(args)
    f = ball_phantom(cfg.ball_specs(), cfg.grid())
    io.write_volume(args.out, f)


def cmd_forward(args):
    cfg = _run_config(args, noise_level=args.noise_level, noise_seed=args.seed)
    f = io.read_volume(args.input)
    cfg = _match_volume(cfg, f)
    grid = cfg.grid()
    if cfg.faces is not None:
        faces = cfg.faces
    else:
        faces = all_faces(grid.dim) if cfg.six_face else default_faces(grid.dim)
    g = simulate_boundary(f, grid, faces, cfg.backend, cfg.nufft_tol)
    if cfg.noise_level > 0:
        g = add_noise(g, cfg.noise_level, cfg.noise_seed)
    io.write_boundary(args.out, g)


def cmd_reconstruct(args):
    cfg = _run_config(args)
    g = io.read_boundary(args.input)
    cfg = cfg.override(dim=g.grid.dim, n_nodes=g.grid.n_nodes)
    grid = cfg.grid()
    if grid.n_time != g.grid.n_time:
        raise ConfigError(f"config gives {grid.n_time} time samples, file has {g.grid.n_time}")
    g = BoundarySeries(grid, g.data)
    rc = cfg.recon_config(grid)
    if rc.six_face:
        iterates = six_face_reconstruct(g, rc, return_iterates=True)
    else:
        iterates = reconstruct(g, rc)
    for k, f in enumerate(iterates):
        io.write_volume(f"{args.out_prefix}_iter{k}.rcvol", f)
    if args.truth:
        truth = io.read_volume(args.truth)
        report = ErrorReport.from_iterates(iterates, truth)
        report.to_csv(f"{args.out_prefix}_errors.csv")
        for k, (l2, linf) in enumerate(report.per_iterate):
            print(f"iterate {k}: rel_l2={l2:.6g} rel_linf={linf:.6g}")


def cmd_bound(args):
    cfg = _run_config(args)
    grid = cfg.grid()
    trunc = cfg.trunc if cfg.trunc is not None else min(grid.n_nodes, _BOUND_TRUNC[grid.dim])
    rc = cfg.override(trunc=trunc).recon_config(grid)
    measured, bound = contraction_bound(rc)
    print(f"dim={grid.dim} T={grid.T:g} trunc={trunc} window={rc.window.kind}")
    print(f"measured_norm={measured:.6g}")
    print(f"closed_form_bound={bound:.6g}")
    print(f"B={rc.window.B:.6g}")
    print(f"sufficient_T={sufficient_T(rc.window, grid.dim):.6g}")


def _write_pgm(path, image):
    lo, hi = float(image.min()), float(image.max())
    scaled = np.zeros(image.shape) if hi == lo else (image - lo) / (hi - lo)
    pix = np.round(scaled * 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{pix.shape[1]} {pix.shape[0]}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def _grid_index(n, coord):
    pos = coord * (n - 1)
    j = int(round(pos))
    if abs(pos - j) > 1e-9 or not 0 <= j < n:
        raise ValueError(f"coordinate {coord} is not a grid node")
    return j


def cmd_metrics(args):
    truth = io.read_volume(args.truth)
    est = io.read_volume(args.estimate)
    l2, linf = rel_error(est, truth, "l2"), rel_error(est, truth, "linf")
    print(f"rel_l2={l2:.6g}")
    print(f"rel_linf={linf:.6g}")
    if args.profile:
        prof = line_profile(est, args.axis, args.at)
        ref = line_profile(truth, args.axis, args.at)
        with open(args.profile, "w") as fh:
            fh.write("x,estimate,truth\n")
            for (x, v), (_, r) in zip(prof, ref):
                fh.write(f"{x:.17g},{v:.17g},{r:.17g}\n")
    if args.slice:
        image = est
        if est.ndim == 3:
            index = [slice(None)] * 3
            index[args.slice_axis] = _grid_index(est.shape[0], args.slice_at)
            image = est[tuple(index)]
        _write_pgm(args.slice, image)


def build_parser():
    parser = argparse.ArgumentParser(prog="cavitypat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="write a ball phantom volume")
    _add_config_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("forward", help="simulate boundary data from a volume")
    _add_config_args(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noise-level", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("reconstruct", help="reconstruct a volume from boundary data")
    _add_config_args(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--truth", help="ground-truth volume; writes <prefix>_errors.csv")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("bound", help="print the coupling norm and its bounds")
    _add_config_args(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("metrics", help="compare an estimate with the truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--estimate", required=True)
    p.add_argument("--profile", help="CSV of the line profile")
    p.add_argument("--axis", type=int, default=0, help="profile direction (0-based)")
    p.add_argument("--at", type=float, nargs="+", help="fixed coordinates of the profile line")
    p.add_argument("--slice", help="PGM image of a plane (3D) or the whole field (2D)")
    p.add_argument("--slice-axis", type=int, default=2)
    p.add_argument("--slice-at", type=float, default=0.25)
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (OSError, ValueError, KeyError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"cavitypat {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
