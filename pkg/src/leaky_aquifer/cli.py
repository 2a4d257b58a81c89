"""Command line front end.

    leaky-aquifer eval --x 4.95 --y 5 --nu 2
    leaky-aquifer table1
    leaky-aquifer batch --input points.csv --format json --parallel 4
    leaky-aquifer bessel --nu 0.5 --z 2
    leaky-aquifer gamma3 --alpha -2 --x 4.95 --b 24.75

Exit status: 0 ok, 1 domain error, 2 not converged (or table1 gate
missed), 64 usage error, 66 unreadable input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .core import DomainError, EvalParams, eval_k, eval_small_x
from .reference import bessel_k, chaudhry_gamma
from .scaled import ScaledReal, rel_diff
from .table1 import DELTA_GATE, GATED_ROWS, ROWS, reference_for, reference_row

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NONCONVERGED = 2
EXIT_USAGE = 64
EXIT_NOINPUT = 66

DEFAULT_RELTOL = 1e-10
RELTOL_ENV = "AQUIFER_RELTOL"

RECORD_FIELDS = ("x", "y", "nu", "ln_value", "mantissa", "exponent10",
                 "rel_err_est", "n_evals", "regime", "converged")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return v


def tolerance(text: str) -> float:
    v = finite_float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"tolerance must lie in (0, 1): {text!r}")
    return v


def default_rel_tol() -> float:
    env = os.environ.get(RELTOL_ENV)
    if env is None:
        return DEFAULT_RELTOL
    try:
        return tolerance(env)
    except argparse.ArgumentTypeError as e:
        raise UsageError(f"{RELTOL_ENV}: {e}") from None


def evaluate(x: float, y: float, nu: float, rel_tol: float):
    p = EvalParams(x, y, nu, rel_tol=rel_tol)
    if p.x < p.x_min:
        return eval_small_x(p)
    return eval_k(p)


def value_fields(v: ScaledReal) -> dict:
    m, k = v.mantissa_exponent()
    return {"ln_value": v.ln_value, "mantissa": m, "exponent10": k}


def result_record(x, y, nu, res) -> dict:
    rec = {"x": x, "y": y, "nu": nu}
    rec.update(value_fields(res.value))
    rec.update(rel_err_est=res.err_rel_est, n_evals=res.n_evals,
               regime=res.regime.kind.value, converged=res.converged)
    return rec


def add_reference(rec: dict, computed: ScaledReal, x, y, nu) -> dict:
    ref = reference_row(x, y, nu)
    if ref is not None:
        rec["reference"] = ref.value.format()
        rec["delta"] = rel_diff(computed, ref.value)
    return rec


def render_json(rec: dict) -> str:
    return json.dumps(rec, ensure_ascii=False)


def _fmt_value(rec: dict) -> str:
    if "ln_value" not in rec:
        return ""
    return ScaledReal(rec["ln_value"]).format()


def render_text(rec: dict) -> str:
    if "error" in rec:
        where = f"row {rec['row']}: " if "row" in rec else ""
        return f"{where}error: {rec['error']}"
    head = " ".join(f"{k}={rec[k]:g}" for k in ("row", "x", "y", "nu", "z", "alpha", "b")
                    if k in rec)
    parts = [f"{head} value={_fmt_value(rec)} ln={rec['ln_value']!r}"]
    if "rel_err_est" in rec:
        parts.append(f"rel_err_est={rec['rel_err_est']:.2e} n_evals={rec['n_evals']} "
                     f"regime={rec['regime']} converged={'yes' if rec['converged'] else 'no'}")
    if "delta" in rec:
        parts.append(f"reference={rec['reference']} delta={rec['delta']:.2e}")
    return " ".join(parts)


class Emitter:
    """Writes records in one of the three formats; CSV gets a single header."""

    def __init__(self, fmt: str, out=None, fields=RECORD_FIELDS):
        self.fmt = fmt
        self.out = out or sys.stdout
        self.fields = list(fields)
        self._csv = None

    def emit(self, rec: dict):
        if self.fmt == "json":
            print(render_json(rec), file=self.out)
        elif self.fmt == "csv":
            if self._csv is None:
                self._csv = csv.DictWriter(self.out, fieldnames=self.fields,
                                           extrasaction="ignore", lineterminator="\n")
                self._csv.writeheader()
            row = {k: _csv_cell(v) for k, v in rec.items()}
            self._csv.writerow(row)
        else:
            print(render_text(rec), file=self.out)

    def summary(self, counts: dict):
        if self.fmt == "json":
            print(render_json({"summary": counts}), file=self.out)
        else:
            print("# summary " + " ".join(f"{k}={v}" for k, v in counts.items()),
                  file=self.out)


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return v


def cmd_eval(args) -> int:
    try:
        res = evaluate(args.x, args.y, args.nu, args.rel_tol)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    rec = add_reference(result_record(args.x, args.y, args.nu, res), res.value,
                        args.x, args.y, args.nu)
    Emitter(args.format, fields=list(RECORD_FIELDS) + ["reference", "delta"]).emit(rec)
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_table1(args) -> int:
    em = Emitter(args.format,
                 fields=["row"] + list(RECORD_FIELDS) + ["reference", "delta", "error"])
    ok = True
    for row in ROWS:
        ref = reference_for(row)
        try:
            res = evaluate(row.x, row.y, row.nu, args.rel_tol)
        except (DomainError, ArithmeticError) as e:
            em.emit({"row": row.row, "error": str(e)})
            ok = ok and row.row not in GATED_ROWS
            continue
        rec = {"row": row.row}
        rec.update(result_record(row.x, row.y, row.nu, res))
        rec["reference"] = ref.value.format()
        rec["delta"] = rel_diff(res.value, ref.value)
        em.emit(rec)
        if row.row in GATED_ROWS and not rec["delta"] <= DELTA_GATE:
            ok = False
    return EXIT_OK if ok else EXIT_NONCONVERGED


def batch_row(job) -> dict:
    """Evaluate one CSV row; errors become records.  Module level for pickling."""
    index, raw, rel_tol = job
    try:
        x, y, nu = (_cell(raw, k) for k in ("x", "y", "nu"))
    except ValueError as e:
        return {"row": index, "error": str(e)}
    try:
        res = evaluate(x, y, nu, rel_tol)
    except (DomainError, ArithmeticError) as e:
        return {"row": index, "x": x, "y": y, "nu": nu, "error": _short(e)}
    rec = {"row": index}
    rec.update(result_record(x, y, nu, res))
    return add_reference(rec, res.value, x, y, nu)


def _short(e: Exception) -> str:
    return str(e).split(", got")[0]


def _cell(raw: dict, key: str) -> float:
    text = raw.get(key)
    if text is None or text.strip() == "":
        raise ValueError(f"missing {key}")
    try:
        v = float(text)
    except ValueError:
        raise ValueError(f"{key} is not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ValueError(f"{key} is not finite: {text!r}")
    return v


def read_rows(path: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    header = [h.strip() for h in (reader.fieldnames or [])]
    if header[:3] != ["x", "y", "nu"]:
        raise OSError(f"expected header 'x,y,nu', got {','.join(header)!r}")
    reader.fieldnames = header
    return list(reader)


def cmd_batch(args) -> int:
    try:
        rows = read_rows(args.input)
    except (OSError, UnicodeDecodeError) as e:
        print(f"error: cannot read {args.input}: {e}", file=sys.stderr)
        return EXIT_NOINPUT
    jobs = [(i, raw, args.rel_tol) for i, raw in enumerate(rows, start=1)]
    if args.parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            records = list(pool.map(batch_row, jobs))
    else:
        records = [batch_row(j) for j in jobs]

    em = Emitter(args.format,
                 fields=["row"] + list(RECORD_FIELDS) + ["reference", "delta", "error"])
    counts = {"ok": 0, "nonconverged": 0, "error": 0}
    for rec in records:
        em.emit(rec)
        if "error" in rec:
            counts["error"] += 1
        elif rec["converged"]:
            counts["ok"] += 1
        else:
            counts["nonconverged"] += 1
    em.summary(counts)
    if counts["error"]:
        return EXIT_DOMAIN
    if counts["nonconverged"]:
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_bessel(args) -> int:
    try:
        v = bessel_k(args.nu, args.z, rel_tol=args.rel_tol)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    rec = {"nu": args.nu, "z": args.z}
    rec.update(value_fields(v))
    Emitter(args.format, fields=["nu", "z", "ln_value", "mantissa", "exponent10"]).emit(rec)
    return EXIT_OK


def cmd_gamma3(args) -> int:
    try:
        v = chaudhry_gamma(args.alpha, args.x, args.b, rel_tol=args.rel_tol)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    rec = {"alpha": args.alpha, "x": args.x, "b": args.b}
    rec.update(value_fields(v))
    Emitter(args.format, fields=["alpha", "x", "b", "ln_value", "mantissa",
                                 "exponent10"]).emit(rec)
    return EXIT_OK


def build_parser(rel_tol_default: float) -> argparse.ArgumentParser:
    parser = _Parser(prog="leaky-aquifer",
                     description="Evaluate the leaky aquifer function K_nu(x, y).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--rel-tol", type=tolerance, default=rel_tol_default,
                       help=f"relative tolerance (default {rel_tol_default:g}, "
                            f"or ${RELTOL_ENV})")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("eval", help="evaluate K_nu(x, y) once")
    p.add_argument("--x", type=finite_float, required=True)
    p.add_argument("--y", type=finite_float, required=True)
    p.add_argument("--nu", type=finite_float, required=True)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table1", help="reproduce the published reference table")
    common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("batch", help="evaluate every row of a CSV file (header x,y,nu)")
    p.add_argument("--input", required=True)
    p.add_argument("--parallel", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("bessel", help="modified Bessel function K_nu(z)")
    p.add_argument("--nu", type=finite_float, required=True)
    p.add_argument("--z", type=finite_float, required=True)
    common(p)
    p.set_defaults(func=cmd_bessel)

    p = sub.add_parser("gamma3", help="generalized incomplete gamma Gamma(alpha, x; b)")
    p.add_argument("--alpha", type=finite_float, required=True)
    p.add_argument("--x", type=finite_float, required=True)
    p.add_argument("--b", type=finite_float, required=True)
    common(p)
    p.set_defaults(func=cmd_gamma3)
    return parser


def main(argv=None) -> int:
    try:
        rel_tol = default_rel_tol()
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    args = build_parser(rel_tol).parse_args(argv)
    if getattr(args, "parallel", 1) < 1:
        print("error: --parallel must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
