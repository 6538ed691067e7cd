"""Command-line interface.

Exit codes: 0 when the checked properties hold, 1 when a property fails,
2 for invalid input or usage.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import description
from .errors import IOFailure, MaxfaceError, UsageError, ValidationError
from .gallery import ENTRIES, gallery
from .global_analysis import global_report
from .meshio import INVERSION, IDENTITY, PolarSpec, RectSpec, build_chart_grid, export, generate_mesh
from .singular import Annulus, Box, classify_singular_point, singular_curves
from .weierstrass import MAXFACE, companion

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


def _input_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("input", nargs="?", help="surface description JSON file")
    p.add_argument("--gallery", metavar="NAME", help="built-in example instead of a file")
    p.add_argument("--a", type=float, help="catenoid scale")
    p.add_argument("--lam", type=float, help="Lopez-Ros parameter")
    p.add_argument("--n", type=int, help="Jorge-Meeks companion order")
    p.add_argument("--out", help="output file (default: standard output)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxface", description="Maxface construction and verification")
    sub = parser.add_subparsers(dest="command", required=True)
    parent = _input_parent()

    v = sub.add_parser("verify", parents=[parent], help="periods, ends, completeness, Osserman")
    v.add_argument("--require-complete", action="store_true")
    v.add_argument("--require-osserman-equality", action="store_true")
    v.add_argument("--no-curvature", action="store_true", help="skip the numerical total curvature")

    s = sub.add_parser("singular", parents=[parent], help="trace and classify the singular set")
    s.add_argument("--box", nargs=4, type=float, metavar=("X0", "Y0", "X1", "Y1"))
    s.add_argument("--annulus", nargs=4, type=float, metavar=("CX", "CY", "R0", "R1"))

    m = sub.add_parser("mesh", parents=[parent], help="triangulate and export")
    m.add_argument("--polar", nargs=5, type=float, metavar=("C", "R0", "R1", "NR", "NT"))
    m.add_argument("--rect", nargs=6, type=float, metavar=("X0", "Y0", "X1", "Y1", "NU", "NV"))
    m.add_argument("--format", choices=["obj", "csv"], help="default: from --out suffix, else obj")
    m.add_argument("--companion", action="store_true", help="mesh the companion minimal surface")
    m.add_argument("--inversion", action="store_true", help="grid in the chart w = 1/z")

    g = sub.add_parser("gallery", help="built-in examples")
    g.add_argument("action", choices=["list"])
    return parser


def _load(args):
    if args.gallery and args.input:
        raise UsageError("give either an input file or --gallery, not both")
    if args.gallery:
        return gallery(args.gallery, a=args.a, lam=args.lam, n=args.n)
    if not args.input:
        raise UsageError("an input file or --gallery NAME is required")
    if any(x is not None for x in (args.a, args.lam, args.n)):
        raise UsageError("--a/--lam/--n apply only to --gallery entries")
    return description.load(args.input)


def _emit(text: str, out) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IOFailure(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_verify(args) -> int:
    data = _load(args)
    if data.convention != MAXFACE:
        raise ValidationError("convention: verify expects maxface data")
    rep = global_report(data, with_curvature=not args.no_curvature)
    d = rep.to_dict()
    failures = []
    if not rep.period.passes:
        failures.append("period condition")
    if args.require_complete and d["completeness"] != "Complete":
        failures.append("completeness")
    if args.require_osserman_equality and not (d["osserman"] and d["osserman"]["equality"]):
        failures.append("Osserman equality")
    d["failed"] = failures
    _emit(_json(d), args.out)
    return EXIT_FAILED if failures else EXIT_OK


def _region(args):
    if args.box and args.annulus:
        raise UsageError("give at most one of --box and --annulus")
    if args.box:
        x0, y0, x1, y1 = args.box
        return Box(complex(x0, y0), complex(x1, y1))
    if args.annulus:
        cx, cy, r0, r1 = args.annulus
        return Annulus(complex(cx, cy), r0, r1)
    return None


def _pair(z):
    return [z.real, z.imag]


def cmd_singular(args) -> int:
    data = _load(args)
    if data.convention != MAXFACE:
        raise ValidationError("convention: singular expects maxface data")
    seeds, curves = singular_curves(data, _region(args))
    tags = {}
    for cv in curves:
        for s in cv.samples:
            tags[s.classification.tag.value] = tags.get(s.classification.tag.value, 0) + 1

    def witness(z):
        c = classify_singular_point(data, z)
        return {"z": _pair(z), **c.to_dict()}

    out = {
        "label": data.label,
        "n_curves": len(curves),
        "seeds": [_pair(z) for z in seeds],
        "curves": [cv.to_dict() for cv in curves],
        "tag_counts": dict(sorted(tags.items())),
        "swallowtails": [witness(z) for cv in curves for z in cv.swallowtail_points],
        "not_a_front": [witness(z) for cv in curves for z in cv.not_a_front_points],
    }
    _emit(_json(out), args.out)
    return EXIT_OK


def _grid_spec(args):
    if bool(args.polar) == bool(args.rect):
        raise UsageError("give exactly one of --polar and --rect")
    if args.polar:
        c, r0, r1, nr, nt = args.polar
        return PolarSpec(complex(c), r0, r1, _count(nr), _count(nt))
    x0, y0, x1, y1, nu, nv = args.rect
    return RectSpec(complex(x0, y0), complex(x1, y1), _count(nu), _count(nv))


def _count(x: float) -> int:
    if not float(x).is_integer():
        raise UsageError(f"grid counts must be integers, got {x}")
    return int(x)


def cmd_mesh(args) -> int:
    data = _load(args)
    spec = _grid_spec(args)
    fmt = args.format or ("csv" if args.out and args.out.endswith(".csv") else "obj")
    chart = INVERSION if args.inversion else IDENTITY
    target = companion(data) if args.companion else data
    grid = build_chart_grid(target, spec, chart)
    mesh = generate_mesh(target, grid)
    if args.out:
        export(mesh, fmt, args.out)
    else:
        sys.stdout.write(export(mesh, fmt).decode())
    return EXIT_OK


def cmd_gallery(args) -> int:
    lines = []
    for name, e in ENTRIES.items():
        params = " ".join(f"--{k} {v:g}" for k, v in e.params.items())
        lines.append(f"{name:24s} {params:20s} {e.summary}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "singular": cmd_singular, "mesh": cmd_mesh, "gallery": cmd_gallery}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (ValidationError, UsageError, IOFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MaxfaceError as exc:
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
