"""Command-line interface.

Subcommands::

    alphaperim sample     --domain SPEC --n N --seed S [--out FILE]
    alphaperim edges      --domain SPEC --alpha A --n N --seed S [--out FILE]
    alphaperim perimeter  --domain SPEC --alpha A --n N --seed S
    alphaperim diagnose   --domain SPEC --alpha A --n N --seed S [--out FILE]
    alphaperim experiment --domain SPEC --alphas A,.. --sizes N,.. --reps M
                          [--estimator shape|hull] [--seed S] [--out DIR]
                          [--config FILE.json] [--workers W]

Domain specs: ``disk:R``, ``annulus:R_IN,R_OUT``, ``stadium:HALF_LENGTH,CAP_RADIUS``,
``disks:(X1,Y1),R1,(X2,Y2),R2``. ``edges``, ``perimeter`` and ``diagnose``
accept ``--points FILE`` (CSV with ``x,y`` header) in place of sampling.
A config file holds the ExperimentConfig fields as JSON; its values override flags.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from contextlib import nullcontext

import numpy as np

from . import diagnostics as diag
from .alpha_shape import build_alpha_shape, classify_sidedness, hull_perimeter, shape_perimeter
from .domains import parse_domain
from .experiment import ExperimentConfig, run_experiment, write_outputs


def _floats(s: str) -> list[float]:
    return [float(v) for v in s.split(",") if v.strip()]


def _ints(s: str) -> list[int]:
    return [int(v) for v in s.split(",") if v.strip()]


def _open_out(path):
    return open(path, "w", newline="", encoding="utf-8") if path else nullcontext(sys.stdout)


def _points(args) -> np.ndarray:
    if getattr(args, "points", None):
        data = np.loadtxt(args.points, delimiter=",", skiprows=1, ndmin=2)
        return data[:, :2]
    if args.domain is None or args.n is None:
        raise ValueError("either --points or both --domain and --n are required")
    rng = np.random.default_rng(args.seed)
    return parse_domain(args.domain).sample_uniform(args.n, rng)


def cmd_sample(args) -> None:
    pts = _points(args)
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y"])
        w.writerows((repr(float(x)), repr(float(y))) for x, y in pts)


def cmd_edges(args) -> None:
    shape = build_alpha_shape(_points(args), args.alpha)
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j", "xi", "yi", "xj", "yj", "length", "one_sided"])
        for e, ell in zip(shape.edges, shape.edge_lengths()):
            a, b = shape.points[e.i], shape.points[e.j]
            w.writerow([e.i, e.j, *(repr(float(v)) for v in (*a, *b, ell)), int(classify_sidedness(e).one_sided)])


def cmd_perimeter(args) -> None:
    shape = build_alpha_shape(_points(args), args.alpha)
    lines = [
        f"alpha={args.alpha!r}",
        f"n={len(shape.points)}",
        f"edges={len(shape.edges)}",
        f"shape_perimeter={shape_perimeter(shape)!r}",
        f"hull_perimeter={hull_perimeter(shape)!r}",
    ]
    if args.domain:
        lines.append(f"true_perimeter={parse_domain(args.domain).exact_perimeter()!r}")
    print("\n".join(lines))


def cmd_diagnose(args) -> None:
    if args.domain is None:
        raise ValueError("diagnose needs --domain")
    domain = parse_domain(args.domain)
    shape = build_alpha_shape(_points(args), args.alpha)
    out = ["[edges]", diag.to_keyvalue(diag.edge_diagnostics(shape, domain))]
    if shape.edges:
        out += ["[sandwich]", diag.to_keyvalue(diag.sandwich_check(shape, domain))]
    out += ["[polygon]", diag.to_keyvalue(diag.polygon_structure(shape, domain))]
    with _open_out(args.out) as fh:
        fh.write("".join(s if s.endswith("\n") else s + "\n" for s in out))


def cmd_experiment(args) -> None:
    flags = {
        "domain": args.domain,
        "alphas": _floats(args.alphas) if args.alphas else None,
        "sample_sizes": _ints(args.sizes) if args.sizes else None,
        "replicates": args.reps,
        "master_seed": args.seed,
        "estimator": args.estimator,
        "output_path": args.out,
        "workers": args.workers,
    }
    flags = {k: v for k, v in flags.items() if v is not None}
    config = ExperimentConfig.from_file(args.config, **flags) if args.config else ExperimentConfig(**flags)
    result = run_experiment(config)
    out_dir = config.output_path or "."
    paths = write_outputs(result, out_dir)
    print(paths["report"].read_text(encoding="utf-8"), end="")
    print(f"wrote {', '.join(str(p) for p in paths.values())}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="alphaperim", description="alpha-shape perimeter estimation")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, alpha=True, points=True):
        sp.add_argument("--domain", help="domain spec, e.g. annulus:0.25,1.0")
        sp.add_argument("--n", type=int, help="sample size")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output file (default stdout)")
        if alpha:
            sp.add_argument("--alpha", type=float, required=True)
        if points:
            sp.add_argument("--points", help="CSV of x,y points instead of sampling")

    common(sub.add_parser("sample", help="draw a uniform sample"), alpha=False, points=False)
    common(sub.add_parser("edges", help="list alpha-edges"))
    common(sub.add_parser("perimeter", help="alpha-shape and alpha-hull perimeters"))
    common(sub.add_parser("diagnose", help="geometric diagnostics against the true domain"))

    ex = sub.add_parser("experiment", help="Monte Carlo convergence study")
    ex.add_argument("--domain")
    ex.add_argument("--alphas", help="comma-separated radii")
    ex.add_argument("--sizes", help="comma-separated, strictly increasing sample sizes")
    ex.add_argument("--reps", type=int, help="replicates per (n, alpha)")
    ex.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    ex.add_argument("--estimator", choices=["shape", "hull", "alpha_shape", "alpha_hull"])
    ex.add_argument("--out", help="output directory for raw.csv, summary.csv, report.txt")
    ex.add_argument("--config", help="JSON file mirroring ExperimentConfig; overrides flags")
    ex.add_argument("--workers", type=int, help="parallel worker processes")
    return p


COMMANDS = {
    "sample": cmd_sample,
    "edges": cmd_edges,
    "perimeter": cmd_perimeter,
    "diagnose": cmd_diagnose,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except (ValueError, OSError, RuntimeError, TypeError) as exc:
        print(f"alphaperim {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
