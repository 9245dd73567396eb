"""Command-line entry point: ``gaussmeans <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from itertools import product
from typing import Sequence

from . import diagrams, hz, oracle, volumes
from .recursion import compute_w
from .verify import SUITES, run_suite

FORMATS = ("json", "csv", "text")


class UsageError(Exception):
    pass


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(out))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        os.unlink(tmp)
        raise


def _dumps(obj: object) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _check_budget(value: int, budget: int, what: str) -> None:
    if value > budget:
        raise UsageError(f"{what} = {value} exceeds the budget {budget}; raise it with --budget")


def cmd_compute_w(args: argparse.Namespace) -> str:
    g, s = args.g, args.s
    diagrams.check_stable(g, s)
    _check_budget(2 * g - 2 + s, args.budget if args.budget is not None else 5, "2g-2+s")
    total = compute_w(g, s)
    obj = diagrams.to_json_obj(total, g, s)
    if args.format == "json":
        return _dumps(obj)
    if args.format == "csv":
        rows = [(" ".join(map(str, t["white"])), " ".join(map(str, t["grey"])), t["coeff"]) for t in obj["terms"]]
        return _csv(["white", "grey", "coeff"], rows)
    return "".join(f"{t['coeff']} white={t['white']} grey={t['grey']}\n" for t in obj["terms"])


def cmd_hz_table(args: argparse.Namespace) -> str:
    _check_budget(args.gmax, args.budget if args.budget is not None else 40, "gmax")
    table = hz.hz_table(args.gmax)
    if args.format == "csv":
        return hz.b_table_csv(table)
    if args.format == "json":
        return _dumps({str(g): [str(b) for b in row] for g, row in table.items()})
    return "".join(f"{g}: {' '.join(map(str, row))}\n" for g, row in table.items())


def cmd_kappa_table(args: argparse.Namespace) -> str:
    _check_budget(args.gmax, args.budget if args.budget is not None else 40, "gmax")
    table = hz.hz_table(args.gmax)
    rows = {g: hz.b_to_kappa(g, table[g]) for g in table}
    if args.format == "csv":
        return hz.kappa_table_csv(rows)
    if args.format == "json":
        return _dumps({str(g): [str(k) for k in row] for g, row in rows.items()})
    return "".join(f"{g}: {' '.join(map(str, row))}\n" for g, row in rows.items())


def cmd_volumes(args: argparse.Namespace) -> str:
    g, s = args.g, args.s
    diagrams.check_stable(g, s)
    if s == 1:
        _check_budget(g, args.budget if args.budget is not None else 40, "g")
        qp = volumes.n_g1_polynomial(g, hz.hz_table(g)[g])
    else:
        _check_budget(2 * g - 2 + s, args.budget if args.budget is not None else oracle.MAX_EXCESS, "2g-2+s")
        qp = volumes.fitted_volume(g, s)
    if args.format == "json":
        return volumes.volume_json(g, s, qp) + "\n"
    if args.format == "csv":
        return volumes.volume_table_csv(g, s, qp, args.pmax)
    points = product(range(args.pmax + 1), repeat=s)
    return "".join(f"N({','.join(map(str, p))}) = {qp.evaluate(p)}\n" for p in points)


def cmd_moments(args: argparse.Namespace) -> str:
    try:
        valences = [int(x) for x in args.k.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"--k expects comma-separated integers: {exc}") from None
    if not valences or any(k < 1 for k in valences):
        raise UsageError("--k expects positive valences")
    budget = args.budget if args.budget is not None else oracle.WICK_BUDGET
    tally = oracle.wick_moments(valences, budget=budget)
    if args.format == "json":
        return _dumps({str(g): n for g, n in sorted(tally.items())})
    if args.format == "csv":
        return _csv(["genus", "count"], sorted(tally.items()))
    return "".join(f"genus {g}: {n}\n" for g, n in sorted(tally.items()))


def cmd_census(args: argparse.Namespace) -> str:
    diagrams.check_stable(args.g, args.s)
    graphs = oracle.shape_census(args.g, args.s)
    if args.format == "json":
        return oracle.census_json(graphs) + "\n"
    if args.format == "csv":
        rows = [(i, " ".join(map(str, gr.valences())), len(gr.edges()), gr.aut) for i, gr in enumerate(graphs)]
        return _csv(["index", "valences", "edges", "aut"], rows)
    faces = "face" if args.s == 1 else "faces"
    return f"{len(graphs)} shapes of genus {args.g} with {args.s} {faces}\n"


def cmd_verify(args: argparse.Namespace) -> tuple[str, bool]:
    results = run_suite(args.suite)
    ok = all(passed for _, passed in results)
    if args.format == "json":
        return _dumps({"passed": ok, "checks": [{"name": n, "passed": p} for n, p in results]}), ok
    if args.format == "csv":
        return _csv(["check", "passed"], [(n, str(p).lower()) for n, p in results]), ok
    lines = [f"{'PASS' if p else 'FAIL'}  {n}\n" for n, p in results]
    lines.append(f"{sum(p for _, p in results)}/{len(results)} checks passed\n")
    return "".join(lines), ok


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write to PATH atomically instead of stdout")
    common.add_argument("--budget", type=int, help="override the size cap of the command")

    parser = argparse.ArgumentParser(prog="gaussmeans", description="Gaussian means, one-backbone tables and discrete volumes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, default_format: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--format", choices=FORMATS, default=default_format)
        return p

    p = add("compute-w", "json", "diagram sum for genus g with s loop insertions")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(handler=cmd_compute_w)

    p = add("hz-table", "csv", "one-backbone coefficients b for g <= gmax")
    p.add_argument("--gmax", type=int, required=True)
    p.set_defaults(handler=cmd_hz_table)

    p = add("kappa-table", "csv", "kappa_{g,1,r} for g <= gmax")
    p.add_argument("--gmax", type=int, required=True)
    p.set_defaults(handler=cmd_kappa_table)

    p = add("volumes", "csv", "discrete volume N_{g,s} on the grid 0..pmax")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--pmax", type=int, default=8)
    p.set_defaults(handler=cmd_volumes)

    p = add("moments", "json", "genus tally of connected Wick pairings")
    p.add_argument("--k", required=True, help="comma-separated valences, e.g. 4 or 3,3")
    p.set_defaults(handler=cmd_moments)

    p = add("census", "json", "fatgraph shapes of genus g with s faces")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(handler=cmd_census)

    p = add("verify", "text", "run an invariant suite")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return exc.code if isinstance(exc.code, int) else 2
    try:
        result = args.handler(args)
    except (UsageError, diagrams.UnstableError, oracle.BudgetExceeded, oracle.OddTotalValence, ValueError) as exc:
        print(f"gaussmeans {args.command}: {exc}", file=sys.stderr)
        return 2
    ok = True
    if isinstance(result, tuple):
        result, ok = result
    _write(result, args.out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
