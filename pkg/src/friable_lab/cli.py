"""Command-line front end.

Exit codes: 0 success, 1 a verification assertion failed, 2 usage or input
error.  JSON carries exact integers as decimal strings and collects every
floating-point value under an ``approx`` key; every report echoes its
configuration under ``config``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import lab
from .census import Params, irreducible_table, validate_prime_power
from .chart import emit_chart
from .dickman import exp_integral_I, rho, xi
from .errors import FriableLabError
from .exact import expectation_gap, friable_prob, psi_perm_oracle, psi_poly_oracle
from .saddle import perm_saddle_estimate, ratio_prediction, saddle_data

Q_MAX = 2**20


class UsageError(Exception):
    pass


# --- formatting ----------------------------------------------------------------


def fmt_float(x: float | None) -> str:
    if x is None:
        return ""
    return format(x, ".17g")


def fmt_cell(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt_float(v)
    if v is None:
        return ""
    return str(v)


def to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def _jsonify(obj):
    """Exact values become strings; non-finite floats become strings too."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Params):
        return {"q": str(obj.q), "n": str(obj.n), "m": str(obj.m)}
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return str(obj)


def report(exact: dict, approx: dict, args: argparse.Namespace) -> dict:
    out = {k: _jsonify(v) for k, v in exact.items()}
    out["approx"] = {k: _jsonify(v) for k, v in approx.items()}
    out["config"] = config_echo(args)
    return out


def config_echo(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg["FRIABLE_LAB_THREADS"] = os.environ.get("FRIABLE_LAB_THREADS", "1")
    return json.loads(json.dumps(cfg, default=str))


def emit(args: argparse.Namespace, text: str, default_name: str) -> None:
    """Print to stdout, or write under --out when it is given."""
    if getattr(args, "out", None):
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / (getattr(args, "name", None) or default_name)
        path.write_text(text, encoding="utf-8")
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def emit_json(args, payload: dict, default_name: str) -> None:
    emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n", default_name)


# --- argument helpers -------------------------------------------------------------


def check_q(q: int) -> int:
    if not 2 <= q <= Q_MAX:
        raise UsageError(f"q must be a prime power in [2, {Q_MAX}]")
    validate_prime_power(q)
    return q


def parse_int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc
    if not vals:
        raise UsageError("empty list")
    return vals


def parse_range(text: str) -> list[int]:
    """'a:b' (inclusive) or a comma list."""
    if ":" in text:
        a, _, b = text.partition(":")
        try:
            lo, hi = int(a), int(b)
        except ValueError as exc:
            raise UsageError(f"bad range {text!r}") from exc
        if lo > hi:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return parse_int_list(text)


def m_values(rule: str, n: int) -> list[int]:
    """m-rule: 'all', 'c*log n' (rounded, clamped to [1, n]) or a fixed integer."""
    rule = rule.replace(" ", "")
    if rule == "all":
        return list(range(1, n + 1))
    if rule.endswith("*logn"):
        try:
            c = float(rule[: -len("*logn")])
        except ValueError as exc:
            raise UsageError(f"bad m-rule {rule!r}") from exc
        return [min(n, max(1, round(c * math.log(n)))) if n > 1 else 1]
    try:
        m = int(rule)
    except ValueError as exc:
        raise UsageError(f"bad m-rule {rule!r}") from exc
    if m < 1:
        raise UsageError("fixed m must be >= 1")
    return [min(m, n)]


# --- row builders shared by single commands and sweeps ------------------------------------


def count_row(kind: str, q: int, n: int, m: int, oracle: bool = False) -> tuple[dict, dict]:
    p = Params(q, n, m)
    prof = friable_prob(kind, p)
    psi = prof.psi
    if oracle:
        psi = psi_perm_oracle(n, m) if kind == "perm" else psi_poly_oracle(q, n, m)
        if psi != prof.psi:
            raise AssertionError(f"oracle {psi} != recurrence {prof.psi}")
    exact = {
        "kind": kind,
        "q": q,
        "n": n,
        "m": m,
        "psi": psi,
        "total": prof.total,
        "prob_num": prof.prob.numerator,
        "prob_den": prof.prob.denominator,
    }
    return exact, {"prob_float": float(prof.prob)}


def dickman_row(u: float, tol: float) -> dict:
    r = rho(u, tol)
    s = xi(u) if u > 1 else None
    return {
        "u": u,
        "rho": r.value,
        "log_rho": r.log_value,
        "xi": s,
        "I_xi": exp_integral_I(s) if s is not None else None,
    }


def saddle_row(q: int, n: int, m: int) -> dict:
    p = Params(q, n, m)
    sd = saddle_data(p)
    pred = ratio_prediction(p)
    return {
        "x": sd.x,
        "lambda": sd.lam,
        "lambda2": sd.lam2,
        "log_Q": sd.Q.log_value,
        "Gq_x": sd.gq_at_x,
        "tail_bound": sd.tail_bound,
        "estimate_log": perm_saddle_estimate(n, m).log_value,
        "applicable_theorem": pred.applicable_theorem,
        "envelope": pred.thm_error_envelope,
    }


def ratio_row(q: int, n: int, m: int) -> tuple[dict, dict]:
    p = Params(q, n, m)
    pf = friable_prob("poly", p).prob.as_fraction()
    pp = friable_prob("perm", p).prob.as_fraction()
    ratio = pf / pp
    pred = ratio_prediction(p)
    exact = {
        "q": q,
        "n": n,
        "m": m,
        "ratio_num": ratio.numerator,
        "ratio_den": ratio.denominator,
        "applicable_theorem": pred.applicable_theorem or "",
        "status": pred.status,
    }
    resid = None
    if pred.main_term is not None:
        resid = abs(float(ratio) / pred.main_term - 1.0)
    approx = {
        "ratio": float(ratio),
        "Gq_x": pred.g_q_x,
        "main_term": pred.main_term,
        "envelope": pred.thm_error_envelope,
        "residual": resid,
    }
    return exact, approx


def gap_row(q: int, n: int) -> tuple[dict, dict]:
    g = expectation_gap(n, q)
    log_gap = math.log(g.numerator) - math.log(g.denominator) if g > 0 else None
    return {"q": q, "n": n, "gap_num": g.numerator, "gap_den": g.denominator}, {"gap": float(g), "log_gap": log_gap}


# --- subcommands ---------------------------------------------------------------------


def cmd_census(args) -> int:
    q = check_q(args.q)
    if args.max_degree < 1:
        raise UsageError("--max-degree must be >= 1")
    tab = irreducible_table(q, args.max_degree)
    rows = [{"d": d, "pi_q_d": tab[d]} for d in range(1, args.max_degree + 1)]
    emit(args, to_csv(rows, ["d", "pi_q_d"]), f"census_q{q}.csv")
    return 0


def cmd_count(args) -> int:
    q = check_q(args.q) if args.kind == "poly" else args.q
    exact, approx = count_row(args.kind, q, args.n, args.m, args.oracle)
    if args.float:
        exact = {k: exact[k] for k in ("kind", "q", "n", "m")}
    emit_json(args, report(exact, approx, args), "count.json")
    return 0


def cmd_dickman(args) -> int:
    if args.u_grid:
        start, stop, step = args.u_grid
        if step <= 0 or stop < start:
            raise UsageError("--u-grid needs start <= stop and step > 0")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        rows = [dickman_row(round(start + i * step, 12), args.tol) for i in range(count)]
        emit(args, to_csv(rows, ["u", "rho", "log_rho", "xi", "I_xi"]), "dickman.csv")
        return 0
    if args.u is None:
        raise UsageError("give --u or --u-grid")
    row = dickman_row(args.u, args.tol)
    if args.log:
        row.pop("rho")
    emit_json(args, report({}, row, args), "dickman.json")
    return 0


def cmd_saddle(args) -> int:
    q = check_q(args.q)
    row = saddle_row(q, args.n, args.m)
    theorem = row.pop("applicable_theorem")
    emit_json(args, report({"applicable_theorem": theorem}, row, args), "saddle.json")
    return 0


def cmd_ratio(args) -> int:
    q = check_q(args.q)
    exact, approx = ratio_row(q, args.n, args.m)
    emit_json(args, report(exact, approx, args), "ratio.json")
    return 0


def cmd_gap(args) -> int:
    q = check_q(args.q)
    exact, approx = gap_row(q, args.n)
    emit_json(args, report(exact, approx, args), "gap.json")
    return 0


def cmd_verify(args) -> int:
    names = list(lab.SUITES) if args.suite == "all" else [args.suite]
    q_list = parse_int_list(args.q_list) if args.q_list else None
    if q_list:
        for q in q_list:
            check_q(q)
    reports = [lab.run_suite(name, q_list, args.n_max) for name in names]
    ok = all(r.passed for r in reports)
    if args.report == "json":
        payload = {
            "passed": ok,
            "suites": [_suite_json(r) for r in reports],
            "config": config_echo(args),
        }
        emit_json(args, payload, "verify.json")
    elif args.report == "csv":
        rows = [
            {
                "suite": r.suite_id,
                "passed": r.passed,
                "points": len(r.grid),
                "failures": len(r.failures),
                "empirical_constant": r.empirical_constant,
                "notes": r.notes,
            }
            for r in reports
        ]
        emit(args, to_csv(rows, ["suite", "passed", "points", "failures", "empirical_constant", "notes"]), "verify.csv")
    else:
        lines = [r.summary() for r in reports]
        for r in reports:
            lines.extend(f"  failure: {f}" for f in r.failures[:10])
        emit(args, "\n".join(lines) + "\n", "verify.txt")
    return 0 if ok else 1


def _suite_json(r: lab.SuiteReport) -> dict:
    return {
        "suite_id": r.suite_id,
        "passed": r.passed,
        "points": str(len(r.grid)),
        "notes": r.notes,
        "failures": _jsonify([list(map(str, f)) for f in r.failures]),
        "worst_case": _jsonify(r.worst_case),
        "details": _jsonify(r.details),
        "approx": {"empirical_constant": r.empirical_constant},
    }


SWEEP_COLUMNS = {
    "count": ["kind", "q", "n", "m", "psi", "total", "prob_num", "prob_den", "prob_float"],
    "ratio": ["q", "n", "m", "ratio_num", "ratio_den", "applicable_theorem", "status", "ratio", "Gq_x", "main_term", "envelope", "residual"],
    "saddle": ["q", "n", "m", "x", "lambda", "lambda2", "log_Q", "Gq_x", "tail_bound", "estimate_log", "applicable_theorem", "envelope"],
    "gap": ["q", "n", "gap_num", "gap_den", "gap", "log_gap"],
    "dickman": ["u", "rho", "log_rho", "xi", "I_xi"],
}


def sweep_rows(args) -> list[dict]:
    kind = args.kind
    if kind == "dickman":
        return [dickman_row(float(u), args.tol) for u in parse_range(args.n_range)]
    q_list = parse_int_list(args.q_list)
    for q in q_list:
        check_q(q)
    ns = parse_range(args.n_range)
    if min(ns) < 1:
        raise UsageError("n must be >= 1")
    rows = []
    for q in q_list:
        for n in ns:
            if kind == "gap":
                e, a = gap_row(q, n)
                rows.append({**e, **a})
                continue
            for m in m_values(args.m_rule, n):
                if kind == "count":
                    e, a = count_row(args.count_kind, q, n, m)
                    rows.append({**e, **a})
                elif kind == "ratio":
                    e, a = ratio_row(q, n, m)
                    rows.append({**e, **a})
                else:
                    rows.append({"q": q, "n": n, "m": m, **saddle_row(q, n, m)})
    return rows


def cmd_sweep(args) -> int:
    if args.kind == "verify":
        ns = parse_range(args.n_range)
        vargs = argparse.Namespace(**{**vars(args), "suite": "all", "n_max": max(ns), "report": args.format if args.format != "csv" else "csv"})
        return cmd_verify(vargs)
    rows = sweep_rows(args)
    cols = SWEEP_COLUMNS[args.kind]
    if args.format == "csv":
        emit(args, to_csv(rows, cols), f"sweep_{args.kind}.csv")
    else:
        float_cols = {"prob_float", "ratio", "Gq_x", "main_term", "envelope", "residual", "x", "lambda", "lambda2",
                      "log_Q", "tail_bound", "estimate_log", "gap", "log_gap", "u", "rho", "log_rho", "xi", "I_xi"}
        payload = {
            "rows": [
                {**{k: _jsonify(v) for k, v in r.items() if k not in float_cols},
                 "approx": {k: _jsonify(v) for k, v in r.items() if k in float_cols}}
                for r in rows
            ],
            "config": config_echo(args),
        }
        emit_json(args, payload, f"sweep_{args.kind}.json")
    return 0


def cmd_chart(args) -> int:
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / (args.name or (Path(args.csv).stem + ".svg"))
    emit_chart(args.csv, args.x, args.y, str(path), log_y=args.log_y, title=args.title or "")
    print(f"wrote {path}")
    return 0


# --- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="friable-lab", description="Exact and asymptotic friability of permutations and polynomials over F_q.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_out(p):
        p.add_argument("--out", help="directory for output files (default: stdout)")
        p.add_argument("--name", help="file name inside --out")
        return p

    p = with_out(sub.add_parser("census", help="irreducible counts pi_q(d) as CSV"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=20)
    p.set_defaults(func=cmd_census)

    p = with_out(sub.add_parser("count", help="exact friable count and probability"))
    p.add_argument("--kind", choices=("perm", "poly"), required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", default=True)
    g.add_argument("--float", action="store_true", help="report only the float probability")
    p.add_argument("--oracle", action="store_true", help="also run brute force and require agreement")
    p.set_defaults(func=cmd_count)

    p = with_out(sub.add_parser("dickman", help="rho(u), xi(u), I(xi)"))
    p.add_argument("--u", type=float)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--log", action="store_true", help="omit the linear-scale rho")
    p.add_argument("--u-grid", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    p.set_defaults(func=cmd_dickman)

    p = with_out(sub.add_parser("saddle", help="saddle-point quantities"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_saddle)

    p = with_out(sub.add_parser("ratio", help="exact P_f/P_pi against the predicted main term"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_ratio)

    p = with_out(sub.add_parser("gap", help="exact E L(pi_n) - E L_q(f_n)"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gap)

    p = with_out(sub.add_parser("verify", help="run verification suites"))
    p.add_argument("--suite", choices=(*lab.SUITES, "all"), default="all")
    p.add_argument("--q-list", help="comma-separated prime powers")
    p.add_argument("--n-max", type=int)
    p.add_argument("--report", choices=("json", "csv", "text"), default="text")
    p.set_defaults(func=cmd_verify)

    p = with_out(sub.add_parser("sweep", help="parameter sweep to CSV or JSON"))
    p.add_argument("--kind", choices=("count", "ratio", "dickman", "saddle", "gap", "verify"), required=True)
    p.add_argument("--q-list", default="2")
    p.add_argument("--n-range", default="1:10", help="'a:b' inclusive or comma list (u values for dickman)")
    p.add_argument("--m-rule", default="all", help="'all', 'c*log n' or a fixed m")
    p.add_argument("--count-kind", choices=("perm", "poly"), default="poly")
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("chart", help="SVG line chart from a sweep CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True, action="append")
    p.add_argument("--log-y", action="store_true")
    p.add_argument("--title")
    p.add_argument("--out")
    p.add_argument("--name")
    p.set_defaults(func=cmd_chart)
    return ap


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except (UsageError, FriableLabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> int:
    return run_command(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
