"""Command line: ``decoteich <subcommand> ...``.

Subcommands: validate, render, circlemap, holonomy, solenoid, flip.
Exit codes: 0 ok, 1 validation failure, 2 numeric failure, 3 I/O error.
Errors are reported on stderr as JSON objects carrying a module-qualified
code.  All numbers are written with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import jsonio
from .errors import DecoError, ValidationError
from .mobius import trace

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

MAX_RENDER_DEPTH = 12


class InputError(ValidationError):
    code = "cli.InvalidInput"


# ---------------------------------------------------------------- input kinds

def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    if "kind" in obj:
        return str(obj["kind"])
    if "triangles" in obj:
        return "surface"
    if "lambdas" in obj and ("congruence_k" in obj or "tables" in obj):
        return "transverse"
    if "default" in obj or "overrides" in obj:
        return "assignment"
    raise InputError("cannot tell what kind of data this file holds")


def _surface(obj):
    from .surface import IdealTriangulation
    t = IdealTriangulation.from_lists(obj["triangles"])
    lam = {str(k): float(v) for k, v in obj.get("lambdas", {}).items()}
    return t, lam


def _surface_json(t, lam) -> dict:
    return {"triangles": t.to_json(), "lambdas": {e: lam[e] for e in t.edges}}


def _assignment(obj):
    from .universal_embed import LambdaAssignment
    try:
        return LambdaAssignment.from_json(obj)
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from exc


def _transverse(obj):
    from .solenoid_approx import TransverseLambda
    try:
        return TransverseLambda.from_json(obj)
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from exc


def _leaf_assignment(obj, kind, leaf):
    if kind == "assignment":
        return _assignment(obj)
    if kind == "transverse":
        d = _transverse(obj)
        if not 0 <= leaf < d.level.index:
            raise InputError(f"no coset {leaf}")
        return d.leaf(leaf)
    raise InputError(f"expected a lambda assignment, got {kind}")


# ---------------------------------------------------------------- output

def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _matrix(m):
    # "+ 0.0" turns -0.0 into 0.0
    return [[float(m[i][j]) + 0.0 for j in range(2)] for i in range(2)]


# ---------------------------------------------------------------- commands

def cmd_validate(args) -> int:
    obj = jsonio.load(args.path)
    report = {"file": args.path}
    errors = []
    status = EXIT_OK
    try:
        kind = detect_kind(obj)
        report["kind"] = kind
        if kind == "surface":
            from .surface import check_lambdas, validate
            t, lam = _surface(obj)
            g, s = validate(t)
            report["genus"] = g
            report["punctures"] = s
            if lam:
                check_lambdas(t, lam)
        elif kind == "assignment":
            from .universal_embed import pinch_report
            rep = pinch_report(_assignment(obj))
            report["pinch_bound"] = rep.K
        elif kind == "transverse":
            from .solenoid_approx import pinch_bound, validate_equivariance
            d = _transverse(obj)
            report["index"] = d.level.index
            viol = validate_equivariance(d, args.depth)
            report["equivariance_violation"] = viol
            report["pinch_bound"] = pinch_bound(d)
            if viol != 0.0:
                raise InputError(f"equivariance violated by {viol!r}")
        elif kind in ("holonomy-report", "solenoid-report"):
            worst = 0.0
            for entry in obj.get("matrices", []):
                (a, b), (c, d) = entry["matrix"]
                worst = max(worst, abs(a * d - b * c - 1.0))
            report["max_det_error"] = worst
            if worst > 1e-9:
                raise InputError(f"matrix determinant off by {worst!r}")
        else:
            raise InputError(f"unknown kind {kind!r}")
    except DecoError as exc:
        errors.append({"code": exc.code, "message": str(exc)})
        status = exc.status
    except (ValueError, KeyError, TypeError) as exc:
        errors.append({"code": InputError.code, "message": str(exc)})
        status = EXIT_VALIDATION
    report["ok"] = not errors
    report["errors"] = errors
    _write(jsonio.dumps(report) + "\n", None)
    return status


def cmd_render(args) -> int:
    from .errors import DepthLimitError
    from .render import render_decoration, render_lifts
    if args.depth > MAX_RENDER_DEPTH:
        raise DepthLimitError(f"render depth {args.depth} exceeds {MAX_RENDER_DEPTH}")
    obj = jsonio.load(args.input)
    kind = detect_kind(obj)
    if kind == "surface":
        from .surface import develop
        t, lam = _surface(obj)
        svg = render_lifts(develop(t, lam, args.depth).lifts, args.horocycles)
    else:
        from .universal_embed import build_decoration
        l = _leaf_assignment(obj, kind, args.leaf)
        svg = render_decoration(build_decoration(l, args.depth), args.depth, args.horocycles)
    _write(svg, args.out)
    return EXIT_OK


def cmd_circlemap(args) -> int:
    from .universal_embed import circle_map_samples
    obj = jsonio.load(args.input)
    l = _leaf_assignment(obj, detect_kind(obj), args.leaf)
    rows = ["x_num,x_den,y"]
    for x, y in circle_map_samples(l, args.depth):
        rows.append(f"{x.p},{x.q},{jsonio.fmt_csv(y)}")
    _write("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def _parse_loop(text: str) -> list:
    steps = []
    for part in text.split(","):
        tri, side = part.split(":")
        steps.append((int(tri), int(side)))
    return steps


def cmd_holonomy(args) -> int:
    from .surface import holonomy, horocycle_length, puncture_loop, validate
    obj = jsonio.load(args.surface)
    if detect_kind(obj) != "surface":
        raise InputError("holonomy expects a surface file")
    t, lam = _surface(obj)
    g, s = validate(t)
    mats = []
    for p in range(s):
        loop = puncture_loop(t, p)
        m = holonomy(t, lam, loop)
        mats.append({"name": f"puncture {p}", "loop": [list(st) for st in loop],
                     "matrix": _matrix(m), "trace": trace(m),
                     "horocycle_length": horocycle_length(t, lam, p)})
    for text in args.loop or []:
        try:
            loop = _parse_loop(text)
        except ValueError as exc:
            raise InputError(f"cannot parse loop {text!r}") from exc
        m = holonomy(t, lam, loop)
        mats.append({"name": text, "loop": [list(st) for st in loop],
                     "matrix": _matrix(m), "trace": trace(m)})
    out = {"kind": "holonomy-report", "genus": g, "punctures": s, "matrices": mats}
    _write(jsonio.dumps(out) + "\n", args.out)
    return EXIT_OK


def cmd_solenoid(args) -> int:
    from .solenoid_approx import pinch_bound, rho, validate_equivariance
    obj = jsonio.load(args.level_data)
    d = _transverse(obj)
    words = [w.strip() for w in args.words.split(",")] if args.words else [""]
    words = ["" if w in ("I", "1") else w for w in words]
    mats = []
    for w in words:
        for c in range(d.level.index):
            mats.append({"word": w or "I", "coset": c, "matrix": _matrix(rho(d, w, c))})
    out = {"kind": "solenoid-report", "index": d.level.index,
           "pinch_bound": pinch_bound(d),
           "equivariance_violation": validate_equivariance(d, args.depth),
           "matrices": mats}
    _write(jsonio.dumps(out) + "\n", args.out)
    return EXIT_OK


def cmd_flip(args) -> int:
    obj = jsonio.load(args.input)
    kind = detect_kind(obj)
    if kind == "surface":
        from .surface import flip_edge
        if args.edge is None:
            raise InputError("flipping a surface edge needs --edge")
        t, lam = _surface(obj)
        t2, lam2 = flip_edge(t, lam, args.edge)
        out = _surface_json(t2, lam2)
    elif kind == "transverse":
        from .solenoid_approx import equivariant_flip
        if args.orbit is None:
            raise InputError("an equivariant flip needs --orbit")
        out = equivariant_flip(_transverse(obj), args.orbit).to_json()
    else:
        raise InputError(f"cannot flip {kind} data")
    _write(jsonio.dumps(out) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="decoteich",
                                 description="Lambda lengths, Farey decorations and holonomy.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a surface, assignment or level-data file")
    p.add_argument("path")
    p.add_argument("--depth", type=int, default=3, help="edge depth for equivariance checks")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="SVG picture in the Poincare disk")
    p.add_argument("input")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--out")
    p.add_argument("--horocycles", action="store_true")
    p.add_argument("--leaf", type=int, default=0, help="coset for level data")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("circlemap", help="sampled circle map as CSV")
    p.add_argument("input")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--out")
    p.add_argument("--leaf", type=int, default=0)
    p.set_defaults(func=cmd_circlemap)

    p = sub.add_parser("holonomy", help="puncture and loop holonomies of a surface")
    p.add_argument("surface")
    p.add_argument("--loop", action="append",
                   help="dual loop as 'tri:side,tri:side,...' (repeatable)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("solenoid", help="rho matrices for level data")
    p.add_argument("level_data")
    p.add_argument("--words", default="I,S,T,U", help="comma-separated normal-form words")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solenoid)

    p = sub.add_parser("flip", help="Ptolemy flip of a surface edge or an edge orbit")
    p.add_argument("input")
    p.add_argument("--edge")
    p.add_argument("--orbit", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_flip)
    return ap


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DecoError as exc:
        return _fail(exc.code, str(exc), exc.status)
    except json.JSONDecodeError as exc:
        return _fail("cli.BadJSON", str(exc), EXIT_IO)
    except OSError as exc:
        return _fail("cli.IOError", str(exc), EXIT_IO)
    except (ValueError, KeyError, TypeError) as exc:
        return _fail(InputError.code, str(exc), EXIT_VALIDATION)


if __name__ == "__main__":
    sys.exit(main())
