"""Command-line front end.

    wronskian-duality recover    --funcs "t,t^2" --t0 1 --t1 1 --samples 1
    wronskian-duality cartan     --funcs "exp(t),exp(2*t)"
    wronskian-duality verify     --funcs "exp(t),exp(2*t)" --samples 11
    wronskian-duality probe-abel --input funcs.txt --format csv

Exit codes: 0 success/pass, 1 verification failure, 2 degenerate,
3 usage or parse error, 4 domain error at every sample.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

from . import expr as ex
from .cartan import abel_probe, cartan_analysis
from .jets import JetError
from .verify import CATEGORIES, FAIL, grid_points, sweep_grid, InvalidGrid
from .wronskian import DegenerateWronskian, FunctionSystem, build_wronskian, solve_coefficients

EXIT_OK, EXIT_FAIL, EXIT_DEGENERATE, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3, 4
COMMANDS = ("recover", "cartan", "verify", "probe-abel")
MAX_FUNCTIONS = 8


class UsageError(Exception):
    def __init__(self, message: str, kind: str = "UsageError", position: int | None = None):
        super().__init__(message)
        self.kind = kind
        self.position = position


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--funcs", help="comma-separated expressions in t")
    src.add_argument("--input", help="file with one expression per line")
    common.add_argument("--t0", type=float, default=0.0)
    common.add_argument("--t1", type=float, default=1.0)
    common.add_argument("--samples", type=int, default=17)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=1.0, help="tolerance multiplier")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")

    parser = _Parser(prog="wronskian-duality",
                     description="Recover linear ODE coefficients from a function system "
                                 "and check them against the Maurer-Cartan matrix of its Wronskian.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("recover", parents=[common], help="ODE coefficients p per sample")
    sub.add_parser("cartan", parents=[common], help="R, L and char. poly coefficients per sample")
    sub.add_parser("verify", parents=[common], help="full residual sweep with verdict")
    sub.add_parser("probe-abel", parents=[common], help="det(W'), (det W)', trace R, det R, p_1, p_n")
    return parser


# ------------------------------------------------------------ formatting

def _num(x, digits: int) -> str | None:
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return format(x, f".{digits}g")


def dump_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits; non-finite floats become null."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, float):
        s = _num(obj, 17)
        return "null" if s is None else s
    if isinstance(obj, int):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dump_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) or v is None for v in obj):
            return "[" + ", ".join(dump_json(v) for v in obj) + "]"
        items = [inner + dump_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if hasattr(obj, "tolist"):
        return dump_json(obj.tolist(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(v, 12) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ------------------------------------------------------------ commands

def _load_sources(args) -> list[str]:
    if args.funcs is not None:
        sources = ex.split_top_level(args.funcs)
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                sources = [line.strip() for line in fh if line.strip()]
        except OSError as err:
            raise UsageError(f"cannot read {args.input}: {err.strerror}", "InputError") from None
    if not sources or any(not s for s in sources):
        raise UsageError("empty expression in function list")
    if len(sources) > MAX_FUNCTIONS:
        raise UsageError(f"at most {MAX_FUNCTIONS} functions are supported, got {len(sources)}")
    return sources


def _parse_system(sources: list[str]) -> FunctionSystem:
    exprs = []
    for i, s in enumerate(sources, start=1):
        try:
            exprs.append(ex.parse_expr(s))
        except ex.ExprError as err:
            raise UsageError(f"function {i} ({s!r}): {err}", type(err).__name__, err.position) from None
    return FunctionSystem(tuple(exprs))


def _status(sample: dict) -> str | None:
    if sample["domain_error"] is not None:
        return "domain_error"
    if sample["degenerate"]:
        return "degenerate"
    return None


def _pointwise(sys_: FunctionSystem, grid, command: str) -> list[dict]:
    out = []
    for i, t in enumerate(grid):
        t = float(t)
        rec = {"index": i, "t": t, "degenerate": False, "domain_error": None}
        try:
            d = build_wronskian(sys_, t)
        except (JetError, ValueError) as err:
            rec["domain_error"] = str(err)
            out.append(rec)
            continue
        rec["w"] = d.w
        rec["kappa"] = d.kappa
        try:
            if d.degenerate:
                raise DegenerateWronskian("degenerate")
            p = solve_coefficients(d, cross_check=False)
            if command == "recover":
                rec["p"] = p.tolist()
            elif command == "cartan":
                cd = cartan_analysis(d)
                rec["R"] = cd.R.tolist()
                rec["L"] = cd.L.tolist()
                rec["q_desc"] = list(cd.q_desc)
                rec["q_desc_L"] = list(cd.q_desc_L)
            else:
                rec.update(abel_probe(d, p=p).as_dict())
        except DegenerateWronskian:
            rec["degenerate"] = True
        out.append(rec)
    return out


def _exit_code(samples: list[dict], verdict: str | None = None) -> int:
    if samples and all(s["domain_error"] is not None for s in samples):
        return EXIT_DOMAIN
    if all(_status(s) is not None for s in samples):
        return EXIT_DEGENERATE
    if verdict == FAIL:
        return EXIT_FAIL
    return EXIT_OK


def _to_csv(command: str, n: int, samples: list[dict]) -> str:
    if command == "recover":
        header = ["t"] + [f"p_{i}" for i in range(1, n + 1)]
        fields = [("p", i) for i in range(n)]
    elif command == "cartan":
        header = (["t"] + [f"R_{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
                  + [f"L_{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
                  + [f"q_{i}" for i in range(1, n + 1)])
        fields = ([("R", (i, j)) for i in range(n) for j in range(n)]
                  + [("L", (i, j)) for i in range(n) for j in range(n)]
                  + [("q_desc", i) for i in range(n)])
    elif command == "probe-abel":
        keys = ["det_Wprime", "ddet_W", "trace_R", "det_R", "p1", "pn"]
        header = ["t"] + keys
        fields = [(k, None) for k in keys]
    else:
        header = ["t", "status"] + list(CATEGORIES)
        rows = []
        for s in samples:
            status = _status(s) or ("pass" if s["passed"] else "fail")
            rows.append([s["t"], status] + [s["residuals"].get(k, status) for k in CATEGORIES])
        return _csv_text(header, rows)

    rows = []
    for s in samples:
        status = _status(s)
        row = [s["t"]]
        for key, idx in fields:
            if status is not None:
                row.append(status)
            elif idx is None:
                row.append(s[key])
            elif isinstance(idx, tuple):
                row.append(s[key][idx[0]][idx[1]])
            else:
                row.append(s[key][idx])
        rows.append(row)
    return _csv_text(header, rows)


def execute(args) -> tuple[str, int]:
    sources = _load_sources(args)
    sys_ = _parse_system(sources)
    try:
        grid = grid_points(args.t0, args.t1, args.samples)
    except InvalidGrid as err:
        raise UsageError(str(err), "InvalidGrid") from None
    if not (math.isfinite(args.tol) and args.tol > 0):
        raise UsageError(f"--tol must be a positive finite multiplier, got {args.tol}")

    report = {
        "command": args.command,
        "n": sys_.n,
        "funcs": sys_.sources(),
        "grid": {"t0": args.t0, "t1": args.t1, "samples": args.samples, "seed": args.seed},
    }
    if args.command == "verify":
        rep = sweep_grid(sys_, args.t0, args.t1, args.samples, args.seed, args.tol)
        samples = [r.as_dict() for r in rep.results]
        summary = rep.summary()
        code = _exit_code(samples, rep.verdict)
    else:
        samples = _pointwise(sys_, grid, args.command)
        summary = {
            "usable_samples": sum(_status(s) is None for s in samples),
            "degenerate_samples": sum(s["degenerate"] for s in samples),
            "domain_error_samples": sum(s["domain_error"] is not None for s in samples),
        }
        code = _exit_code(samples)
    report["samples"] = samples
    report["summary"] = summary

    if args.format == "csv":
        text = _to_csv(args.command, sys_.n, samples)
    else:
        text = dump_json(report) + "\n"
    return text, code


def _report_error(err: UsageError) -> None:
    msg = {"error": err.kind, "message": str(err)}
    if err.position is not None:
        msg["position"] = err.position
    sys.stderr.write(json.dumps(msg) + "\n")


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, code = execute(args)
    except UsageError as err:
        _report_error(err)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as err:
            _report_error(UsageError(f"cannot write {args.out}: {err.strerror}", "OutputError"))
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
