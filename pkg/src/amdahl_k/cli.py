"""Command-line front end: ``amdahl-k {predict,decompose,rank,chart,bench}``.

Exit codes: 0 success, 1 domain or usage error, 2 I/O error.
The default baseline processor count can be overridden with the
``AMDAHL_K_P`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import decomposition as dec
from .chart import ChartSpec, render_ascii, render_svg
from .errors import DomainError, ParseError, UnboundedLimitError
from .speedup import DEFAULT_P, amdahl_speedup, max_k, speedup_curve

ENV_P = "AMDAHL_K_P"

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def default_p() -> int:
    raw = os.environ.get(ENV_P)
    if raw is None or raw == "":
        return DEFAULT_P
    try:
        p = int(raw)
    except ValueError:
        raise UsageError(f"{ENV_P} must be an integer, got {raw!r}") from None
    if p < 1:
        raise UsageError(f"{ENV_P} must be >= 1, got {p}")
    return p


def _emit_json(obj):
    print(json.dumps(obj, indent=2))


# -- predict --------------------------------------------------------------

def cmd_predict(args):
    P = args.p if args.p is not None else default_p()
    kmax = max_k(args.f, P)
    if args.dp is not None:
        dps = args.dp
    else:
        if args.dp_max < 0:
            raise DomainError(f"--dp-max must be >= 0, got {args.dp_max}")
        dps = list(range(args.dp_max + 1))
    S = amdahl_speedup(args.f, P)
    rows = speedup_curve(args.f, P, dps)
    if args.json:
        _emit_json({
            "f": args.f, "P": P, "S": S,
            "rows": [{"dP": r.dP, "S_prime": r.speedup, "k": r.k} for r in rows],
            "max_k": kmax,
        })
        return EXIT_OK
    print(f"f = {args.f:.4f}   P = {P}   S = {S:.4f}")
    print(f"{'dP':>8}  {'S_prime':>9}  {'k':>8}")
    for r in rows:
        print(f"{r.dP:>8}  {r.speedup:>9.4f}  {r.k:>8.4f}")
    print(f"max(k) = {kmax:.4f}")
    return EXIT_OK


# -- decompose / rank -----------------------------------------------------

def _resolve(args):
    if args.builtin:
        try:
            return dec.builtin(args.builtin)
        except KeyError as e:
            raise DomainError(e.args[0]) from None
    return dec.load_decomposition(args.file)


def cmd_decompose(args):
    P = args.p if args.p is not None else default_p()
    d = _resolve(args)
    f = dec.serial_fraction(d)
    try:
        kmax = max_k(f, P)
    except UnboundedLimitError:
        kmax = None
    if args.json:
        _emit_json({
            "name": d.name, "P": P, "f": f, "max_k": kmax,
            "stages": [{"label": s.label, "weight": s.weight, "parallel_fraction": s.parallel_fraction}
                       for s in d.stages],
        })
    else:
        pad = max(len(s.label) for s in d.stages)
        print(f"decomposition {d.name}  ({len(d.stages)} stages)")
        if d.note:
            print(f"  note: {d.note}")
        print(f"  {'stage':<{pad}}  {'weight':>8}  {'parallel':>8}")
        for s in d.stages:
            print(f"  {s.label:<{pad}}  {s.weight:>8.4g}  {s.parallel_fraction:>8.4f}")
        print(f"f = {f:.4f}")
        if kmax is not None:
            print(f"max(k) = {kmax:.4f}  (P = {P})")
    if kmax is None:
        print("error: max(k) unbounded for f=0", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_rank(args):
    P = args.p if args.p is not None else default_p()
    ranked = dec.rank_by_max_k(dec.builtin_catalog(), P)
    if args.json:
        _emit_json({"P": P, "ranking": [r._asdict() for r in ranked]})
        return EXIT_OK
    print(f"{'rank':>4}  {'algorithm':<10}  {'f':>8}  {'max(k)':>8}   (P = {P})")
    for i, r in enumerate(ranked, start=1):
        print(f"{i:>4}  {r.name:<10}  {r.f:>8.4f}  {r.max_k:>8.4f}")
    return EXIT_OK


# -- chart ----------------------------------------------------------------

def _catalog_files(paths):
    files = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.glob("*.dec")))
        else:
            files.append(p)
    return files


def chart_entries(args, P):
    if args.builtin:
        return [(d.name, dec.max_k_of(d, P)) for d in dec.builtin_catalog()]
    if args.file:
        files = _catalog_files(args.file)
        if not files:
            raise DomainError("custom catalog is empty")
        return [(d.name, dec.max_k_of(d, P)) for d in map(dec.load_decomposition, files)]
    from .harness import ComparisonReport

    entries = []
    for path in args.report:
        rep = ComparisonReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
        if rep.max_k_empirical is None:
            raise DomainError(f"{path}: empirical max(k) is unbounded (f=0)")
        entries.append((rep.algorithm, rep.max_k_empirical))
    return entries


def cmd_chart(args):
    P = args.p if args.p is not None else default_p()
    if not args.ascii and not args.out:
        raise UsageError("give --out PATH and/or --ascii")
    entries = chart_entries(args, P)
    if not entries:
        raise DomainError("nothing to chart")
    spec = ChartSpec(tuple(entries), title=f"Specialization coefficient max(k), P = {P}")
    if args.out:
        Path(args.out).write_bytes(render_svg(spec).encode("utf-8"))
        print(f"wrote {args.out}")
    if args.ascii:
        sys.stdout.write(render_ascii(spec))
    return EXIT_OK


# -- bench ----------------------------------------------------------------

def cmd_bench(args):
    from .harness import compare, load_plan, run_experiment, write_records
    from .report import format_report, plot_speedup, write_report_csv
    from .workloads import build_workload

    P = args.p_model if args.p_model is not None else default_p()
    plan = load_plan(args.plan)
    base = Path(args.plan).resolve().parent
    workload = build_workload(plan.algorithm, plan.input, plan.options, base)
    records = run_experiment(plan, workload=workload)

    out = Path(args.out_dir) if args.out_dir else Path(f"bench-{plan.algorithm}")
    out.mkdir(parents=True, exist_ok=True)
    write_records(records, out / "records.jsonl")
    report = compare(records, workload.declared, P)
    (out / "report.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    write_report_csv([report], out / "report.csv")
    if not args.no_figure:
        plot_speedup(report, out / "speedup.png")

    if args.json:
        _emit_json(report.to_dict())
    else:
        sys.stdout.write(format_report(report))
        print(f"\nrecords and report written to {out}/ (advisory: gaps are not pass/fail)")
    return EXIT_OK


# -- entry point ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amdahl-k", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", help="tabulate S, S' and k for a serial fraction")
    p.add_argument("--f", type=float, required=True, help="serial fraction in [0, 1]")
    p.add_argument("--p", type=int, help=f"baseline processors (default ${ENV_P} or {DEFAULT_P})")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dp", type=int, action="append", help="processor increment (repeatable)")
    g.add_argument("--dp-max", type=int, default=8, help="tabulate dP = 0..N (default 8)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("decompose", help="serial fraction and max(k) of a stage decomposition")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", metavar="NAME")
    g.add_argument("--file", metavar="PATH")
    p.add_argument("--p", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("rank", help="rank the built-in algorithms by max(k)")
    p.add_argument("--p", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("chart", help="bar chart of max(k)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", action="store_true", help="the five built-in decompositions")
    g.add_argument("--file", nargs="+", metavar="PATH", help="decomposition files or directories of *.dec")
    g.add_argument("--report", nargs="+", metavar="JSON", help="bench report.json files (empirical max(k))")
    p.add_argument("--out", metavar="PATH", help="SVG output path")
    p.add_argument("--ascii", action="store_true", help="print text bars")
    p.add_argument("--p", type=int)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("bench", help="run an experiment plan and compare with the model")
    p.add_argument("plan", help="experiment plan file")
    p.add_argument("--out-dir", help="where records/report/figure go (default bench-<algorithm>)")
    p.add_argument("--p-model", type=int, help="P used for max(k) in the report")
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_DOMAIN
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DomainError, UnboundedLimitError, ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
