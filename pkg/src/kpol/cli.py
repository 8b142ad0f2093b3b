"""Command line: generate, solve, verify, benchmark and print exponents.

Exit codes: 0 success, 1 verification failure, 2 parse error (bad flags,
unreadable instance, solver not applicable), 3 unknown solver.
"""

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, fields

from kpol.adt import DIRECT, FREDMAN, adt_exponent, balance_block_size
from kpol.baselines import brute_force
from kpol.estimators import SOLVER_NAMES, run_solver
from kpol.exceptions import InsufficientData, KPolError, NonPositive, ParseError, UnknownSolver
from kpol.hopcroft import main_term_exponents
from kpol.instance import FAMILIES, dumps, load, make_instance
from kpol.plot import write_loglog_svg
from kpol.solver import kpol_exponent

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_SOLVER = 0, 1, 2, 3

CSV_HEADER = ("n", "k", "solver", "family", "seed", "decision", "sign_tests", "lookups", "ram_ops", "wall_ms")


@dataclass
class BenchRow:
    n: int
    k: int
    solver: str
    family: str
    seed: int
    decision: str
    sign_tests: int
    lookups: int
    ram_ops: int
    wall_ms: float


def bench_row(instance, result, family, seed):
    c = result.counters
    return BenchRow(
        instance.n, instance.k, result.solver, family, seed, result.decision,
        c.sign_tests, c.lookups, c.ram_ops, round(result.wall_ms, 3),
    )


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([getattr(r, f) for f in CSV_HEADER])
    return buf.getvalue()


def rows_from_csv(text):
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ParseError(f"CSV header must be {','.join(CSV_HEADER)}")
    out = []
    for rec in reader:
        try:
            out.append(BenchRow(**{f.name: f.type(rec[f.name]) for f in fields(BenchRow)}))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad CSV row {rec}: {exc}") from exc
    return out


def fit_exponent(points):
    """Least-squares slope of ``ln count`` against ``ln n``."""
    points = list(points)
    if len(points) < 2:
        raise InsufficientData("need at least two points")
    if any(n <= 0 or c <= 0 for n, c in points):
        raise NonPositive("every n and count must be positive")
    lx = [math.log(n) for n, _ in points]
    ly = [math.log(c) for _, c in points]
    mx = math.fsum(lx) / len(lx)
    my = math.fsum(ly) / len(ly)
    den = math.fsum((x - mx) ** 2 for x in lx)
    if den == 0:
        raise InsufficientData("need at least two distinct n")
    return math.fsum((x - mx) * (y - my) for x, y in zip(lx, ly)) / den


def parse_int_list(text):
    """``"8,16,32"`` or ``"4..16"`` (inclusive) or a mix of both."""
    out = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part.strip():
                out.append(int(part))
    except ValueError as exc:
        raise ParseError(f"bad integer list {text!r}") from exc
    if not out:
        raise ParseError("empty integer list")
    return out


def _solver_kwargs(args):
    return {"g": args.g, "mode": args.mode, "r": args.r, "n0": args.n0}


def _check_solver(name):
    if name not in SOLVER_NAMES:
        raise UnknownSolver(f"unknown solver {name!r}; choose from {', '.join(SOLVER_NAMES)}")


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    inst = make_instance(args.family, args.k, parse_int_list(args.n)[0], parse_int_list(args.seed)[0])
    _emit(dumps(inst), args.out)
    return EXIT_OK


def _instance_from(args):
    if args.instance:
        return load(args.instance), args.family
    return make_instance(args.family, args.k, parse_int_list(args.n)[0], parse_int_list(args.seed)[0]), args.family


def cmd_solve(args):
    _check_solver(args.solver)
    inst, family = _instance_from(args)
    res = run_solver(args.solver, inst, **_solver_kwargs(args))
    lines = [f"decision {res.decision}", f"solver {res.solver}"]
    if res.witness is not None:
        lines.append(f"witness {res.witness.as_text()}")
    c = res.counters
    lines += [f"sign_tests {c.sign_tests}", f"lookups {c.lookups}", f"ram_ops {c.ram_ops}"]
    lines += [f"phase {k} {v}" for k, v in sorted(c.phases.items())]
    lines += [f"event {k} {v}" for k, v in sorted(c.events.items())]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _agrees(inst, res, ref):
    if res.decision != ref.decision:
        return False
    return res.witness is None or res.witness.check(inst.F)


def cmd_verify(args):
    """Run the solver and brute force on every (n, seed) of the corpus; fail on any disagreement."""
    _check_solver(args.solver)
    if args.instance:
        corpus = [(load(args.instance), args.family, 0)]
    else:
        corpus = [
            (make_instance(args.family, args.k, n, seed), args.family, seed)
            for n in parse_int_list(args.n)
            for seed in parse_int_list(args.seed)
        ]
    bad = 0
    rows = []
    for inst, family, seed in corpus:
        res = run_solver(args.solver, inst, **_solver_kwargs(args))
        ref = brute_force(inst)
        ok = _agrees(inst, res, ref)
        bad += not ok
        rows.append(f"{'ok' if ok else 'DISAGREE'} n={inst.n} seed={seed} {res.decision} brute={ref.decision}")
    rows.append(f"{len(corpus) - bad}/{len(corpus)} agree")
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK if bad == 0 else EXIT_VERIFY


def run_bench(solvers, family, k, ns, seeds, trials=1, **kw):
    """``(BenchRow, SolveResult)`` per solver, n, seed and trial."""
    for solver in solvers:
        _check_solver(solver)
    out = []
    for solver in solvers:
        for n in ns:
            for seed in seeds:
                for t in range(trials):
                    s = seed + t
                    inst = make_instance(family, k, n, s)
                    res = run_solver(solver, inst, **kw)
                    out.append((bench_row(inst, res, family, s), res))
    return out


def metric_value(result, metric):
    c = result.counters
    if metric in ("sign_tests", "lookups", "ram_ops"):
        return getattr(c, metric)
    return c.events.get(metric, 0)


def bench_fits(runs, metric="sign_tests"):
    """Per solver: mean ``metric`` per n and its fitted exponent (None if not fittable)."""
    by = {}
    for row, res in runs:
        by.setdefault(row.solver, {}).setdefault(row.n, []).append(metric_value(res, metric))
    fits, series = {}, {}
    for solver, data in by.items():
        pts = [(n, sum(v) / len(v)) for n, v in sorted(data.items())]
        series[solver] = pts
        try:
            fits[solver] = fit_exponent(pts)
        except (InsufficientData, NonPositive):
            fits[solver] = None
    return fits, series


def cmd_bench(args):
    solvers = [s for s in args.solver.split(",") if s]
    runs = run_bench(
        solvers, args.family, args.k, parse_int_list(args.n), parse_int_list(args.seed), args.trials,
        **_solver_kwargs(args),
    )
    _emit(rows_to_csv([row for row, _ in runs]), args.out)
    fits, series = bench_fits(runs, args.metric)
    for solver, slope in fits.items():
        shown = "n/a" if slope is None else f"{slope:.3f}"
        print(f"fit {solver} {args.metric} exponent {shown}", file=sys.stderr)
    if args.plot:
        write_loglog_svg(args.plot, series, title=f"{args.family} k={args.k}", ylabel=args.metric)
    return EXIT_OK


def exponent_table(pairs=((2, 2), (3, 6))):
    lines = [f"kpol k={k} {kpol_exponent(k)}" for k in range(4, 13)]
    for t, s in pairs:
        m, n = main_term_exponents(t, s)
        lines.append(f"main_term t={t} s={s} {m} {n}")
    for k in (4, 5):
        lines.append(f"block k={k} {balance_block_size(k)}")
        lines.append(f"adt k={k} {adt_exponent(k)}")
    return lines


def cmd_exponents(args):
    pairs = ((2, 2), (3, 6)) if args.t is None else ((args.t, args.s or args.t),)
    _emit("\n".join(exponent_table(pairs)) + "\n", args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser():
    p = _Parser(prog="kpol", description="k-POL solvers with sign-test accounting")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, solver=True):
        sp.add_argument("--k", type=int, default=3)
        sp.add_argument("--n", default="8", help="size, list 8,16 or range 4..16")
        sp.add_argument("--seed", default="0", help="seed, list or range")
        sp.add_argument("--family", default="random", choices=FAMILIES)
        sp.add_argument("--out", default=None)
        if solver:
            sp.add_argument("--solver", default="brute")
            sp.add_argument("--g", type=int, default=None)
            sp.add_argument("--mode", default=FREDMAN, choices=(DIRECT, FREDMAN))
            sp.add_argument("--r", type=int, default=8)
            sp.add_argument("--n0", type=int, default=64)

    common(sub.add_parser("gen", help="write an instance file"), solver=False)
    sp = sub.add_parser("solve", help="run one solver")
    common(sp)
    sp.add_argument("instance", nargs="?", help="instance file (default: generate)")
    sp = sub.add_parser("verify", help="compare a solver with brute force")
    common(sp)
    sp.add_argument("instance", nargs="?", help="instance file (default: seeded corpus)")
    sp = sub.add_parser("bench", help="CSV of counters; solver may be a comma list")
    common(sp)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--plot", default=None, help="write a log-log SVG here")
    sp.add_argument("--metric", default="sign_tests", help="counter or event name to fit")
    sp = sub.add_parser("exponents", help="print the exponent table")
    sp.add_argument("--t", type=int, default=None)
    sp.add_argument("--s", type=int, default=None)
    sp.add_argument("--out", default=None)
    return p


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "verify": cmd_verify, "bench": cmd_bench, "exponents": cmd_exponents}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UnknownSolver as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (KPolError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
