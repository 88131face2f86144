"""``polyzero`` command line.

Exit status: 0 success, 1 domain error (e.g. finiteness not established,
census not certified), 2 usage error or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Sequence

from . import bounds as _bounds
from . import extremal as _extremal
from . import render as _render
from . import rootfind as _rootfind
from . import zerotheory as _zt
from .polycore import PolyFormatError, PolyPoly, format_poly, parse_poly, read_poly
from .winding import Circle, winding, winding_annulus

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Shortest round-trip repr; integral floats print without '.0'."""
    if x is None:
        return "none"
    if isinstance(x, complex):
        return f"{fmt(x.real)},{fmt(x.imag)}"
    if isinstance(x, float):
        if math.isfinite(x) and x == int(x) and abs(x) < 1e16:
            return str(int(x))
        return repr(x)
    return str(x)


def _load_poly(args) -> PolyPoly:
    if args.poly_file and args.poly:
        raise UsageError("give either a polynomial file or --poly, not both")
    if args.poly:
        return parse_poly(args.poly.replace(";", "\n"))
    if not args.poly_file:
        raise UsageError("no polynomial given (path or --poly)")
    if args.poly_file == "-":
        return parse_poly(sys.stdin.read())
    return read_poly(args.poly_file)


def _read_points(path) -> list[complex]:
    """``re,im`` rows; a header row and ``#`` comments are skipped."""
    pts = []
    with open(path, encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                pts.append(complex(float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if lineno == 1:
                    continue
                raise PolyFormatError(f"bad point row {row!r} in {path}", lineno) from None
    return pts


def census_csv(census: _rootfind.ZeroCensus) -> str:
    buf = io.StringIO()
    buf.write("re,im,index,jac_sign,residual\n")
    for c in census.zeros:
        buf.write(f"{fmt(c.z.real)},{fmt(c.z.imag)},{c.index},{c.jacobian_sign},{fmt(c.residual)}\n")
    return buf.getvalue()


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def analyze_record(P: PolyPoly, irreducible: bool = False) -> dict:
    ex = _zt.existence(P)
    cert = _zt.finiteness_certificate(P, irreducible)
    w = cert.witness
    rec = {
        "balk": ex.balk,
        "dominant_ell": ex.dominant_ell,
        "existence": ex.guaranteed,
        "finiteness": cert.kind.value,
        "witness": list(w) if isinstance(w, tuple) else ([w.real, w.imag] if isinstance(w, complex) else None),
        "max_zeros": _zt.max_zero_bound(P, cert) if cert.finite else None,
    }
    return rec


def cmd_analyze(args) -> int:
    P = _load_poly(args)
    rec = analyze_record(P, args.irreducible)
    if args.json:
        _emit(json.dumps(rec) + "\n", args.output)
    else:
        lines = []
        for key, val in rec.items():
            if key == "witness" and val is not None:
                val = ",".join(fmt(v) for v in val)
            lines.append(f"{key}={fmt(val) if not isinstance(val, str) else val}")
        _emit("\n".join(lines) + "\n", args.output)
    if args.require_finite and rec["max_zeros"] is None:
        print(f"error: finiteness not established ({rec['finiteness']})", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_bounds(args) -> int:
    P = _load_poly(args)
    rep = _bounds.bounds_report(P)
    _emit(
        f"alpha_n={fmt(rep.alpha_n)} r0={fmt(rep.r0)} r1={fmt(rep.r1)} r2={fmt(rep.r2)} "
        f"applicable={str(rep.applicable).lower()}\n",
        args.output,
    )
    return EXIT_OK if rep.applicable else EXIT_DOMAIN


def cmd_wind(args) -> int:
    P = _load_poly(args)
    center = complex(*args.center)
    if args.annulus:
        r1, r2 = args.annulus
        w = winding_annulus(P, r1, r2, center)
        _emit(f"wind={w}\n", args.output)
        return EXIT_OK
    if args.radius is None:
        raise UsageError("wind needs --radius or --annulus")
    res = winding(P, Circle(center, args.radius))
    _emit(f"wind={res.wind} min_modulus={fmt(res.min_modulus)} samples={res.samples}\n", args.output)
    return EXIT_OK


def _default_radius(P: PolyPoly) -> float:
    rep = _bounds.bounds_report(P)
    if not rep.applicable:
        raise UsageError("no dominant top-degree term; pass --radius")
    return 1.25 * rep.r0 + 0.5


def cmd_roots(args) -> int:
    P = _load_poly(args)
    radius = args.radius if args.radius is not None else _default_radius(P)
    seeds = _read_points(args.seeds_file) if args.seeds_file else []
    census = _rootfind.zero_atlas(P, radius, extra_seeds=seeds, spacing=args.spacing, threads=args.threads)
    _emit(census_csv(census), args.output)
    print(
        f"# zeros={len(census)} total_winding={census.total_winding} index_sum={census.index_sum} "
        f"certified={str(census.certified).lower()}",
        file=sys.stderr,
    )
    return EXIT_OK if census.certified else EXIT_DOMAIN


def _read_coeffs(path) -> list[complex]:
    vals = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            try:
                vals.append(complex(float(parts[0]), float(parts[1]) if len(parts) > 1 else 0.0))
            except (ValueError, IndexError):
                raise PolyFormatError(f"bad coefficient {line!r}", lineno) from None
    return vals


def cmd_extremal(args) -> int:
    base = _read_coeffs(args.coeffs) if args.coeffs else None
    sched = _extremal.extremal_coefficients(args.n, base)
    census, worst = _extremal.verify_extremal(sched)
    out = [f"# n={sched.n}"]
    for k, (a, r, m) in enumerate(zip(sched.a, sched.r, sched.margins), 1):
        out.append(f"# a_{k}={fmt(a)} r_{k}={fmt(r)} margin_{k}={fmt(m)}")
    out.append(f"# max_relative_residual={fmt(worst)}")
    _emit("\n".join(out) + "\n" + census_csv(census), args.output)
    return EXIT_OK


def cmd_plot(args) -> int:
    P = _load_poly(args)
    if args.output is None:
        raise UsageError("plot needs -o OUT.ppm")
    premap = "contraction" if args.contract else "identity"
    marks = _read_points(args.marks) if args.marks else []
    if args.contract:
        marks = [_render.inverse_contraction(m) for m in marks]
    img = _render.render_phase(P, tuple(args.window), args.size[0], args.size[1], premap, marks)
    _render.write_ppm(img, args.output)
    if img.overflow:
        print(f"# overflow_pixels={img.overflow}", file=sys.stderr)
    return EXIT_OK


def cmd_construct(args) -> int:
    k = math.inf if args.k.lower() in ("inf", "infinity", "oo") else int(args.k)
    P = _zt.poly_with_k_zeros(args.n, k)
    _emit(f"# degree {args.n} with {args.k} zeros\n" + format_poly(P), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyzero", description="Zeros of polyanalytic polynomials.")
    parser.add_argument("--threads", type=int, default=1, help="cap on worker threads")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    def with_poly(p):
        p.add_argument("poly_file", nargs="?", help="polynomial file ('-' for stdin)")
        p.add_argument("--poly", help="inline terms 'j k re im; j k re im; ...'")
        p.add_argument("-o", "--output")
        return p

    p = with_poly(add("analyze", help="existence / finiteness / n^2 bound"))
    p.add_argument("--irreducible", action="store_true", help="assume P is irreducible")
    p.add_argument("--json", action="store_true")
    p.add_argument("--require-finite", action="store_true", help="exit 1 unless finiteness is certified")
    p.set_defaults(func=cmd_analyze)

    p = with_poly(add("bounds", help="inclusion radii r0, r1, r2"))
    p.set_defaults(func=cmd_bounds)

    p = with_poly(add("wind", help="winding along a circle or annulus boundary"))
    p.add_argument("--center", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"))
    p.add_argument("--radius", type=float)
    p.add_argument("--annulus", type=float, nargs=2, metavar=("R1", "R2"))
    p.set_defaults(func=cmd_wind)

    p = with_poly(add("roots", help="zero census as CSV"))
    p.add_argument("--radius", type=float)
    p.add_argument("--spacing", type=float)
    p.add_argument("--seeds-file")
    p.set_defaults(func=cmd_roots)

    p = add("extremal", help="polynomial with n^2 zeros")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coeffs", help="file with a_1..a_n, one 're [im]' per line")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extremal)

    p = with_poly(add("plot", help="phase plot as PPM"))
    p.add_argument("--window", type=float, nargs=4, required=True, metavar=("RE0", "RE1", "IM0", "IM1"))
    p.add_argument("--size", type=int, nargs=2, required=True, metavar=("W", "H"))
    p.add_argument("--contract", action="store_true", help="plot P(z exp(|z|^2))")
    p.add_argument("--marks", help="census CSV with zeros to mark")
    p.set_defaults(func=cmd_plot)

    p = add("construct", help="polynomial of degree n with exactly k zeros")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", required=True, help="0..n, n^2 or inf")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, PolyFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
