"""``tau-lab`` command line.

Exit codes: 0 success, 1 a ``verify`` command found a violation, 2 usage
error, 3 resource or budget error (table too small, cache unreadable, out
of memory).

JSON output is one object per report with ``experiment_id``, ``parameters``,
``rows``, ``summary`` and ``incomplete_count``. Integers outside the signed
64-bit range are written as decimal strings so that every JSON reader can
load them losslessly. CSV output is the report rows only: a header line,
comma separated, ``\\n`` line endings, empty cells for missing values and
``;`` between list items.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import gmpy2

from . import experiments, sunit
from .errors import TauLabError
from .factor import DEFAULT_BUDGET, factor, is_prime
from .report import Report
from .tau import TauTable, build_tau_table, load_table, save_table, tau_at, verify_table

BUDGET_ENV = "TAULAB_FACTOR_BUDGET"
INT64_MIN, INT64_MAX = -(2**63), 2**63 - 1


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    table_max: int
    cache_path: Path | None
    factor_budget: int
    output_format: str
    output_path: Path | None
    jobs: int


def _json_safe(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj if INT64_MIN <= obj <= INT64_MAX else str(obj)
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def report_to_json(report: Report) -> str:
    doc = {
        "experiment_id": report.experiment_id,
        "parameters": report.parameters,
        "rows": report.rows,
        "summary": report.summary,
        "incomplete_count": report.incomplete_count,
    }
    return json.dumps(_json_safe(doc), indent=1) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


def report_to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    columns = report.columns
    writer.writerow(columns)
    for row in report.rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _budget(arg: int | None) -> int:
    if arg is not None:
        budget = arg
    elif os.environ.get(BUDGET_ENV):
        try:
            budget = int(os.environ[BUDGET_ENV])
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must be an integer") from None
    else:
        budget = DEFAULT_BUDGET
    if budget < 1:
        raise UsageError("the factoring budget must be at least 1")
    return budget


def get_table(cfg: CliConfig, needed: int) -> TauTable:
    """A table covering 1..needed, from the cache when it is large enough."""
    needed = max(needed, 2)
    path = cfg.cache_path
    if path is not None and path.exists():
        table = load_table(path)
        if table.max_n >= needed:
            return table
    table = build_tau_table(needed)
    if path is not None:
        save_table(table, path)
    return table


def _truncate(table: TauTable, n: int) -> TauTable:
    return table if table.max_n == n else TauTable(n, table.values[:n])


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget", type=int, default=None, help="rho iterations per composite")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    parser.add_argument("--cache", type=Path, default=None, help="tau table cache file")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tau-lab", description="Exact Ramanujan tau computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", help="table of tau(1..max)")
    p.add_argument("--max", type=int, required=True)
    _common(p)

    p = sub.add_parser("tau-at", help="tau(n) by multiplicativity")
    p.add_argument("n", type=int)
    _common(p)

    p = sub.add_parser("factor", help="factor an integer")
    p.add_argument("n", type=int)
    _common(p)

    p = sub.add_parser("lucas", help="u_r = tau(2^r) for r <= max")
    p.add_argument("--max", type=int, default=20)
    _common(p)

    p = sub.add_parser("cyclo", help="C_n = Phi_n(alpha, beta) and its A/B split")
    p.add_argument("--max", type=int, default=30)
    _common(p)

    p = sub.add_parser("sunit", help="S-unit witness for one prime or all primes up to a bound")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("-p", type=int)
    group.add_argument("--bound", type=int)
    _common(p)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("target", choices=("table", "sunit", "lucas", "all"))
    p.add_argument("--bound", type=int, default=1000)
    _common(p)

    p = sub.add_parser("report", help="run a scan")
    p.add_argument("experiment", choices=("thm21", "thm22", "thm23", "zeros"))
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("-A", type=float, default=None, help="exponent for thm21 (default 33/31)")
    _common(p)

    p = sub.add_parser("search-factorial", help="solve |tau(m!)| = n! or tau(m!) = n!")
    p.add_argument("--max", type=int, default=8)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--signed", dest="signed", action="store_true", default=True)
    mode.add_argument("--unsigned", dest="signed", action="store_false")
    _common(p)
    return parser


def _cmd_tau(args, cfg):
    if args.max < 1:
        raise UsageError("--max must be positive")
    table = _truncate(get_table(cfg, args.max), args.max)
    rows = [{"n": n, "tau": t} for n, t in enumerate(table.values, start=1)]
    return Report("tau", {"max": args.max}, rows), 0


def _cmd_tau_at(args, cfg):
    if args.n < 1:
        raise UsageError("n must be positive")
    f = factor(args.n)
    table = get_table(cfg, max(f.primes, default=2))
    value = tau_at(args.n, table)
    return {"n": args.n, "tau": value}, 0


def _cmd_factor(args, cfg):
    if args.n == 0:
        raise UsageError("cannot factor 0")
    f = factor(args.n, cfg.factor_budget)
    return {
        "n": f.n,
        "sign": f.sign,
        "factors": [list(pe) for pe in f.factors],
        "cofactor": f.cofactor,
        "complete": f.complete,
    }, 0


def _cmd_lucas(args, cfg):
    if args.max < 1:
        raise UsageError("--max must be at least 1")
    limit = 2**args.max
    table = get_table(cfg, limit) if limit <= 10**6 else None
    report = experiments.lucas_report(args.max, table)
    return report, 1 if report.summary["mismatches"] else 0


def _cmd_cyclo(args, cfg):
    if args.max < 2:
        raise UsageError("--max must be at least 2")
    report = experiments.cyclo_report(args.max, cfg.factor_budget)
    failed = report.summary["product_failures"] or report.summary["B_congruence_failures"]
    return report, 1 if failed else 0


def _cmd_sunit(args, cfg):
    if args.p is not None:
        if not is_prime(args.p):
            raise UsageError(f"{args.p} is not prime")
        w = sunit.sunit_witness(args.p, get_table(cfg, args.p))
        out = w.as_row()
        out.update({"tau_p": w.tau_p, "tau_p2": w.tau_p2, "tau_p3": w.tau_p3})
        out["checks"] = w.checks()
        return out, 0 if all(out["checks"].values()) else 1
    report = experiments.sunit_report(args.bound, get_table(cfg, args.bound))
    return report, 0


def _cmd_verify(args, cfg):
    if args.bound < 2:
        raise UsageError("--bound must be at least 2")
    table = _truncate(get_table(cfg, args.bound), args.bound)
    parts = []
    if args.target in ("table", "all"):
        parts.append(verify_table(table))
    if args.target in ("sunit", "all"):
        parts.append(experiments.sunit_report(args.bound, table))
    if args.target in ("lucas", "all"):
        parts.append(experiments.lucas_suite(args.bound, table, cfg.factor_budget))
    rows = []
    summary = {}
    for rep in parts:
        count = rep.summary["violations"]
        if rep.experiment_id == "sunit":
            count += len(rep.summary["distinctness_clashes"])
            bad = [r for r in rep.rows if r["violations"]]
            rows += [{"suite": "sunit", "check": ";".join(r["violations"]), "detail": r["p"]} for r in bad]
            rows += [{"suite": "sunit", "check": "distinctness", "detail": f"{a}-{b}"}
                     for a, b in rep.summary["distinctness_clashes"]]
        elif rep.experiment_id == "verify_table":
            rows += [{"suite": "table", "check": r["check"], "detail": f"a={r['a']},b={r['b']},n={r['n']}"}
                     for r in rep.rows]
        else:
            rows += [{"suite": "lucas", **r} for r in rep.rows]
        summary[rep.experiment_id] = count
    summary["violations"] = sum(summary.values())
    report = Report(f"verify_{args.target}", {"bound": args.bound}, rows, summary)
    return report, 1 if summary["violations"] else 0


def _cmd_report(args, cfg):
    if args.bound < 1:
        raise UsageError("--bound must be positive")
    if args.experiment == "thm22":
        y = int(gmpy2.iroot(args.bound, 3)[0])
        report = experiments.scan_thm22(args.bound, get_table(cfg, y), cfg.factor_budget, cfg.jobs)
        return report, 0
    table = get_table(cfg, args.bound)
    if args.experiment == "thm21":
        A = experiments.THM21_EXPONENT if args.A is None else args.A
        report = experiments.scan_thm21(args.bound, table, A, cfg.factor_budget, cfg.jobs)
    elif args.experiment == "thm23":
        report = experiments.scan_thm23(args.bound, table, cfg.factor_budget, cfg.jobs)
    else:
        report = experiments.zeros_report(args.bound, table)
    return report, 0


def _cmd_search_factorial(args, cfg):
    if args.max < 1:
        raise UsageError("--max must be positive")
    report = experiments.factorial_report(args.max, get_table(cfg, args.max))
    report.parameters["mode"] = "signed" if args.signed else "unsigned"
    report.summary["matches"] = report.summary["signed" if args.signed else "unsigned"]
    return report, 0


COMMANDS = {
    "tau": _cmd_tau,
    "tau-at": _cmd_tau_at,
    "factor": _cmd_factor,
    "lucas": _cmd_lucas,
    "cyclo": _cmd_cyclo,
    "sunit": _cmd_sunit,
    "verify": _cmd_verify,
    "report": _cmd_report,
    "search-factorial": _cmd_search_factorial,
}


def _render(result, fmt: str) -> str:
    if isinstance(result, Report):
        return report_to_csv(result) if fmt == "csv" else report_to_json(result)
    if fmt == "csv":
        return report_to_csv(Report("", rows=[result]))
    return json.dumps(_json_safe(result), indent=1) + "\n"


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = CliConfig(
            table_max=getattr(args, "max", 0) or 0,
            cache_path=args.cache,
            factor_budget=_budget(args.budget),
            output_format=args.format,
            output_path=args.out,
            jobs=max(args.jobs, 1),
        )
        result, code = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"tau-lab: error: {exc}", file=sys.stderr)
        return 2
    except (TauLabError, MemoryError, OSError) as exc:
        print(f"tau-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = _render(result, cfg.output_format)
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.write_text(text, encoding="utf-8", newline="\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
