"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input.

Numbers are printed in scientific notation when ``|x| < 1e-4`` or
``|x| >= 1e6`` (zero excepted) and in fixed notation otherwise, six digits
after the point. CSV files use 17 significant digits and LF line endings.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .bounds import DEFAULT_REL_TOL, SKIPPED, STRICT_REL_TOL, full_verification
from .core_model import PeriodicJacobi, new_periodic_jacobi
from .discriminant import discriminant_report, eval_discriminant
from .errors import ConsistencyError, ConvergenceError, InvalidInputError
from .quartic_oracle import (
    CROSS_CHECK_TOL,
    oracle_deviation,
    quartic_band_structure,
    quartic_inequalities,
    quartic_invariants,
)
from .spectrum import band_structure
from .sweep import CSV_HEADER, SweepConfig, run_sweep

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class UsageError(Exception):
    """Bad input; reported on stderr with exit code 2."""


@dataclass(frozen=True)
class MatrixConfig:
    a: tuple[float, ...]
    b: tuple[float, ...]
    label: str | None = None

    def matrix(self) -> PeriodicJacobi:
        return new_periodic_jacobi(self.a, self.b)


def fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    if x != 0.0 and (abs(x) < 1e-4 or abs(x) >= 1e6):
        return f"{x:.6e}"
    return f"{x:.6f}"


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from exc


def load_matrix_config(path: str) -> MatrixConfig:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object with fields 'a' and 'b'")
    for key in ("a", "b"):
        if key not in data:
            raise UsageError(f"{path}: missing field '{key}'")
        if not isinstance(data[key], list):
            raise UsageError(f"{path}: field '{key}' must be an array")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise UsageError(f"{path}: field 'label' must be a string")
    cfg = MatrixConfig(tuple(data["a"]), tuple(data["b"]), label)
    cfg.matrix()  # validates, naming the offending field and index
    return cfg


def _write_csv(rows, path: str | None, out) -> None:
    if path is None:
        w = csv.writer(out, lineterminator="\n")
        w.writerows(rows)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def cmd_spectrum(args, out) -> int:
    cfg = load_matrix_config(args.config)
    J = cfg.matrix()
    bands = band_structure(J)
    rep = discriminant_report(J, bands)
    if cfg.label:
        print(f"label: {cfg.label}", file=out)
    print(f"p: {J.period}", file=out)
    print("edges: " + " ".join(fmt(x) for x in bands.edges), file=out)
    for k, (lo, hi) in enumerate(bands.bands):
        print(f"band {k}: [{fmt(lo)}, {fmt(hi)}]", file=out)
    for g in bands.gaps:
        state = "closed" if g.closed else "open"
        print(f"gap {g.index}: ({fmt(g.lower)}, {fmt(g.upper)}) length {fmt(g.length)} {state}",
              file=out)
    print(f"max gap: {fmt(bands.max_gap)}", file=out)
    print(f"hull length: {fmt(bands.hull_length)}", file=out)
    print(f"M: {fmt(rep.M)}", file=out)
    print("discriminant roots: " + " ".join(fmt(x) for x in rep.roots), file=out)
    if args.csv:
        rows = [("kind", "index", "lower", "upper", "length", "closed")]
        for k, (lo, hi) in enumerate(bands.bands):
            rows.append(("band", k, format(lo, ".17g"), format(hi, ".17g"),
                         format(hi - lo, ".17g"), ""))
        for g in bands.gaps:
            rows.append(("gap", g.index, format(g.lower, ".17g"), format(g.upper, ".17g"),
                         format(g.length, ".17g"), "true" if g.closed else "false"))
        _write_csv(rows, args.csv, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    cfg = load_matrix_config(args.config)
    tol = STRICT_REL_TOL if args.strict else DEFAULT_REL_TOL
    rep = full_verification(cfg.matrix(), tol)
    if cfg.label:
        print(f"label: {cfg.label}", file=out)
    width = max(len(r.name) for r in rep)
    for r in rep:
        if r.status == SKIPPED:
            print(f"{r.name:<{width}}  SKIPPED({r.note})", file=out)
            continue
        print(f"{r.name:<{width}}  {fmt(r.lhs):>14} {fmt(r.rhs):>14} {fmt(r.ratio):>14}  {r.status}",
              file=out)
    n_fail = len(rep.failures())
    print(f"{len(rep)} checks, {n_fail} failed", file=out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_sample(args, out) -> int:
    if not args.points >= 2:
        raise UsageError("--points must be at least 2")
    if not (math.isfinite(args.lo) and math.isfinite(args.hi) and args.lo < args.hi):
        raise UsageError("need finite --from < --to")
    J = load_matrix_config(args.config).matrix()
    xs = np.linspace(args.lo, args.hi, args.points)
    ys = eval_discriminant(J, xs)
    rows = [("lambda", "discriminant")]
    rows += [(format(float(x), ".17g"), format(float(y), ".17g")) for x, y in zip(xs, ys)]
    _write_csv(rows, args.csv, out)
    return EXIT_OK


def cmd_sweep(args, out, err) -> int:
    data = _read_json(args.config)
    cfg = SweepConfig.from_dict(data)
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    rows = run_sweep(cfg, jobs=args.jobs)
    table = [CSV_HEADER] + [r.csv_fields() for r in rows]
    if args.csv:
        _write_csv(table, args.csv, out)
    else:
        _write_csv(table, None, out)
        out.flush()
    failed = [r for r in rows if not r.all_pass]

    def worst(attr):
        vals = [getattr(r, attr) for r in rows if math.isfinite(getattr(r, attr))]
        return max(vals, default=math.nan)

    print(f"samples {len(rows)}, failures {len(failed)}, "
          f"max ratio_b_upper {fmt(worst('ratio_b_upper'))}, "
          f"max ratio_a_upper {fmt(worst('ratio_a_upper'))}, "
          f"max ratio_lower {fmt(worst('ratio_lower'))}", file=err)
    for r in failed:
        print(f"sample {r.seed_index} failed: {', '.join(r.failures)}", file=err)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_oracle4(args, out) -> int:
    inv = quartic_invariants(*args.a)
    bands = quartic_band_structure(inv)
    print(f"alpha: {fmt(inv.alpha)}", file=out)
    print(f"beta: {fmt(inv.beta)}", file=out)
    print(f"a^4: {fmt(inv.a4th)}", file=out)
    print(f"D+: {fmt(inv.Dplus)}", file=out)
    print(f"D-: {fmt(inv.Dminus)}", file=out)
    for name in ("lambda1_minus", "lambda2_minus", "lambda2_plus", "lambda1_plus"):
        print(f"{name}: {fmt(getattr(inv, name))}", file=out)
    for k, (lo, hi) in enumerate(bands.bands):
        print(f"band {k}: [{fmt(lo)}, {fmt(hi)}]", file=out)
    pieces = [list(bands.bands[0])]
    for g, band in zip(bands.gaps, bands.bands[1:]):
        if g.closed:
            pieces[-1][1] = band[1]
        else:
            pieces.append(list(band))
    print("spectrum: " + " U ".join(f"[{fmt(lo)}, {fmt(hi)}]" for lo, hi in pieces), file=out)
    print(f"interior gap: {fmt(inv.gamma_int)}", file=out)
    print(f"exterior gap: {fmt(inv.gamma_ext)}", file=out)
    rep = quartic_inequalities(inv)
    width = max(len(r.name) for r in rep)
    for r in rep:
        extra = f"  ({r.note})" if r.note else ""
        print(f"{r.name:<{width}}  {fmt(r.lhs):>14} {fmt(r.rhs):>14}  {r.status}{extra}", file=out)
    dev = oracle_deviation(*args.a)
    tol = CROSS_CHECK_TOL * (1.0 + inv.lambda1_plus)
    print(f"cross-check deviation: {fmt(dev)} (tolerance {fmt(tol)})", file=out)
    return EXIT_OK if dev <= tol and rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="periodic-jacobi",
        description="Spectra, discriminants and gap inequalities of periodic Jacobi matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="bands, gaps and discriminant data")
    p.add_argument("config", help='JSON file {"a": [...], "b": [...]}')
    p.add_argument("--csv", help="also write one row per band/gap to this file")

    p = sub.add_parser("verify", help="check every inequality on one matrix")
    p.add_argument("config")
    p.add_argument("--strict", action="store_true",
                   help=f"use relative slack {STRICT_REL_TOL:g} instead of {DEFAULT_REL_TOL:g}")

    p = sub.add_parser("sample", help="tabulate the discriminant on a grid")
    p.add_argument("config")
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--csv", help="write to this file instead of stdout")

    p = sub.add_parser("sweep", help="seeded random verification sweep")
    p.add_argument("config", help="JSON sweep config")
    p.add_argument("--csv", help="write to this file instead of stdout")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("oracle4", help="closed-form data for 4-periodic matrices with b = 0")
    p.add_argument("a", nargs=4, type=float, metavar="A")
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.command == "spectrum":
            return cmd_spectrum(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "sample":
            return cmd_sample(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out, err)
        return cmd_oracle4(args, out)
    except (UsageError, InvalidInputError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (ConsistencyError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=err)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
