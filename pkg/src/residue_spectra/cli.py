"""Command-line interface.

    residue-spectra vcount --p 5 --poly 0,0,1 --laurent 2
    residue-spectra curve --p 5 --m 1 --n 1
    residue-spectra eta --level 14 --at 2
    residue-spectra decompose --p 13
    residue-spectra forms --coeffs 1,1,7,7 --n 2
    residue-spectra verify --all --pmax 500

Exit codes: 0 success, 1 verification failures, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import char_sums, eta_series, harness, representations, residue_counts
from .errors import ResidueSpectraError
from .modular_core import PrimeField, is_prime

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _field(p: int) -> PrimeField:
    if p <= 3 or not is_prime(p):
        raise UsageError(f"--p must be a prime > 3, got {p}")
    return PrimeField(p)


def _emit(rows: list[dict], fmt: str, out) -> None:
    """Write rows as a table, a JSON document, or CSV with a header row."""
    if fmt == "json":
        payload = rows[0] if len(rows) == 1 else rows
        out.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    keys = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\r\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
        return
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in keys}
    out.write("  ".join(k.rjust(widths[k]) for k in keys) + "\n")
    for r in rows:
        out.write("  ".join(str(r[k]).rjust(widths[k]) for k in keys) + "\n")


def cmd_vcount(args, out) -> int:
    fld = _field(args.p)
    f = residue_counts.laurent(args.poly, fld, args.laurent)
    if f.poly.is_zero() and not f.c:
        raise UsageError("polynomial is identically zero mod p")
    count = residue_counts.residue_count(f, fld)
    if args.profile:
        prof = residue_counts.residue_profile(f, fld)
        rows = [{"residue": r, "multiplicity": m} for r, m in sorted(prof.items())]
        if args.format == "json":
            _emit([{"p": fld.p, "count": count, "profile": {str(r): m for r, m in sorted(prof.items())}}],
                  "json", out)
        else:
            _emit(rows, args.format, out)
        return EXIT_OK
    _emit([{"p": fld.p, "count": count}], args.format, out)
    return EXIT_OK


def cmd_curve(args, out) -> int:
    fld = _field(args.p)
    cc = char_sums.curve_point_count(args.m, args.n, fld)
    _emit([{"p": cc.p, "m": cc.m, "n": cc.n, "count": cc.count,
            "singular": str(cc.singular).lower()}], args.format, out)
    return EXIT_OK


def cmd_eta(args, out) -> int:
    if args.level not in eta_series.LEVELS:
        raise UsageError(f"--level must be one of {sorted(eta_series.LEVELS)}")
    if args.at is not None:
        if args.at < 1:
            raise UsageError("--at must be positive")
        cache = eta_series.EtaCache(max(args.at, args.nmax or 0))
        rows = [{"n": args.at, "a": cache.coeff(args.level, args.at)}]
    else:
        if not args.nmax or args.nmax < 1:
            raise UsageError("give --at or a positive --nmax")
        cache = eta_series.EtaCache(args.nmax)
        rows = [{"n": n, "a": cache.coeff(args.level, n)} for n in range(1, args.nmax + 1)]
    _emit(rows, args.format, out)
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    fld = _field(args.p)
    if fld.p % 3 != 1:
        raise UsageError(f"p = {fld.p} is not 1 mod 3; no decomposition p = A^2 + 3B^2")
    d = representations.decompose(fld)
    a_ok, l_ok = representations.jacobi_check(fld, d)
    _emit([{"p": d.p, "A": d.A, "B": d.B, "L": d.L, "M": d.M,
            "jacobi_A": str(a_ok).lower(), "jacobi_L": str(l_ok).lower()}], args.format, out)
    return EXIT_OK


def cmd_forms(args, out) -> int:
    coeffs = args.coeffs
    if len(coeffs) != 4 or min(coeffs) < 1:
        raise UsageError("--coeffs needs four positive integers")
    if args.triangular:
        if args.n < 0:
            raise UsageError("--n must be nonnegative")
        value, kind = representations.triangular_count(*coeffs, args.n), "T"
    else:
        if args.n < 1:
            raise UsageError("--n must be positive")
        value, kind = representations.quaternary_count(*coeffs, args.n), "N"
    _emit([{"kind": kind, "coeffs": ",".join(map(str, coeffs)), "n": args.n, "count": value}],
          args.format, out)
    return EXIT_OK


def _parse_values(text: str) -> tuple:
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    items = []
    for part in text.split(","):
        if ":" in part:
            items.append(tuple(int(v) for v in part.split(":")))
        else:
            items.append(int(part))
    return tuple(items)


def _grid(overrides: Sequence[str]) -> harness.Grid:
    fields = {f for f in harness.Grid.__dataclass_fields__}
    kwargs = {}
    for item in overrides or ():
        name, sep, values = item.partition("=")
        if not sep or name not in fields:
            raise UsageError(f"bad --grid {item!r}; expected NAME=VALUES with NAME in {sorted(fields)}")
        try:
            kwargs[name] = _parse_values(values)
        except ValueError:
            raise UsageError(f"bad values in --grid {item!r}")
    return harness.Grid(**kwargs)


def cmd_verify(args, out) -> int:
    if args.pmin < 5:
        raise UsageError("--pmin must be at least 5")
    if args.pmax < args.pmin:
        raise UsageError("--pmax must be >= --pmin")
    statements = None if args.all or not args.statement else args.statement
    try:
        threads = harness.default_threads() if args.threads is None else harness.resolve_threads(args.threads)
        for sid in statements or ():
            harness.get_statement(sid)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = harness.run_suite(args.pmin, args.pmax, _grid(args.grid), statements,
                               threads=threads, fail_fast=args.fail_fast)
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "csv":
        _emit([{"id": t.id, "checked": t.checked, "passed": t.passed, "skipped": t.skipped,
                "failed": len(t.failures)} for t in report.tallies], "csv", out)
    else:
        out.write(report.to_table() + "\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="residue-spectra",
        description="Residue counts modulo p, curve point counts and eta-product identities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("table", "json", "csv"), default="table")
        sp.set_defaults(func=func)
        return sp

    sp = add("vcount", cmd_vcount, "residue count V_p of a polynomial plus optional c/x")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--poly", type=_int_list, required=True,
                    help="coefficients, lowest degree first, e.g. 0,6,1 for x^2+6x")
    sp.add_argument("--laurent", type=int, default=0, help="coefficient c of the c/x term")
    sp.add_argument("--profile", action="store_true", help="print the fiber size of each value")

    sp = add("curve", cmd_curve, "point count of y^2 = x^3 + mx + n over F_p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("eta", cmd_eta, "coefficients a_N(n) of the level-N eta products")
    sp.add_argument("--level", type=int, required=True, choices=sorted(eta_series.LEVELS))
    sp.add_argument("--nmax", type=int)
    sp.add_argument("--at", type=int)

    sp = add("decompose", cmd_decompose, "p = A^2+3B^2 = (L^2+27M^2)/4 and Jacobi's congruences")
    sp.add_argument("--p", type=int, required=True)

    sp = add("forms", cmd_forms, "representation counts N(a,b,c,d;n) or T(a,b,c,d;n)")
    sp.add_argument("--coeffs", type=_int_list, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--triangular", action="store_true")

    sp = add("verify", cmd_verify, "run the identity checks over a range of primes")
    sel = sp.add_mutually_exclusive_group()
    sel.add_argument("--all", action="store_true")
    sel.add_argument("--statement", action="append",
                     help=f"statement id (repeatable): {', '.join(harness.STATEMENT_IDS)}")
    sp.add_argument("--pmin", type=int, default=5)
    sp.add_argument("--pmax", type=int, default=500)
    sp.add_argument("--grid", action="append", metavar="NAME=VALUES",
                    help="override a grid axis, e.g. t=1..20, c=1,2,3 or bc=6:9,1:1")
    sp.add_argument("--threads", type=int, help="worker threads (default RESIDUE_SPECTRA_THREADS, 0 = auto)")
    sp.add_argument("--fail-fast", action="store_true")
    return parser


def main(argv: Sequence[str] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ResidueSpectraError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
