"""Command-line front end.

Subcommands: ``solve`` (staffing), ``pareto`` (two-or-more-objective
staffing), ``assign`` (roster for a fixed staff), ``table`` (duty
tables), ``bench`` (canned experiments), ``validate`` (instance files
and constraint strings).

Exit codes: 0 success, 1 no feasible solution, 2 bad usage or
configuration, 3 internal error.
"""

from __future__ import annotations

import argparse
import secrets
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import io as mio
from .baselines import PSOConfig, SAConfig, ip_solve, pso_solve, sa_solve
from .bench import EXPERIMENT_IDS, run_experiment, write_report
from .constraints import parse_constraint_string
from .domain import HeadcountVector
from .errors import (
    ConfigurationError,
    InfeasibleError,
    MetricError,
    ParseError,
    SearchSpaceError,
    StructuralError,
    TableGenerationError,
)
from .evolution import EAConfig, PenaltyConfig, run_ea, solve_assignment
from .moea import run_moea
from .objectives import ObjectiveBundle, parse_objective_token
from .tablegen import SuitablePolicy, generate_table

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

SUBCOMMANDS = ("solve", "pareto", "table", "assign", "bench", "validate")


@dataclass(frozen=True)
class CliInvocation:
    """One fully parsed command line: the subcommand plus every input it
    may need.  ``options`` carries the subcommand-specific knobs
    (population size, encoding, penalty settings, table shape, ...)."""

    subcommand: str
    instance: Optional[str] = None
    constraints: Optional[str] = None
    objectives: tuple[str, ...] = ()
    solver: Optional[str] = None
    seed: Optional[int] = None
    out: Optional[str] = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigurationError(
                f"unknown subcommand {self.subcommand!r}; choose from {', '.join(SUBCOMMANDS)}"
            )
        object.__setattr__(self, "objectives", tuple(self.objectives))


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (omitted: drawn fresh and printed)")


def _resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    drawn = secrets.randbelow(2**31)
    print(f"seed: {drawn} (drawn; pass --seed to reproduce)")
    return drawn


def _constraint_text(text: str) -> str:
    """Inline constraint expression, or ``@path`` to read one from a file."""
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return fh.read().strip()
    return text


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manpower",
        description="Constraint-composable manpower scheduling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimize staffing levels")
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.add_argument("--constraints", default="k1&k2&k3&k4&k5&k6",
                   help="constraint expression, e.g. 'k1&k2&(k5|y2)', or @file")
    p.add_argument("--objective", default="salary",
                   help="total_time | salary | salary_ms | headcount:a+b (prefix '-' to flip)")
    p.add_argument("--solver", choices=("ea", "ip", "pso", "sa"), default="ea")
    p.add_argument("--encoding", choices=("ri", "bg"), default="ri")
    p.add_argument("--penalty", choices=("external", "internal"), default="external")
    p.add_argument("--penalty-coefficient", type=float, default=1e4)
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--generations", type=int, default=50)
    p.add_argument("--counts-out", help="write the winning staffing as CSV")
    p.add_argument("--trace-out", help="write the search trace as CSV")
    _add_seed(p)

    p = sub.add_parser("pareto", help="trade off several objectives")
    p.add_argument("--instance", required=True)
    p.add_argument("--constraints", default="k1&k2&k3&k4&k5&k6")
    p.add_argument("--objective", action="append", dest="objective_list", default=[],
                   help="one objective token (repeat the flag for each)")
    p.add_argument("--objectives", default=None,
                   help="comma-separated objective tokens, e.g. 'salary,-total_time'")
    p.add_argument("--population", type=int, default=60)
    p.add_argument("--generations", type=int, default=40)
    p.add_argument("--archive-out", help="write the archive as CSV")
    _add_seed(p)

    p = sub.add_parser("assign", help="evolve a roster for fixed staffing")
    p.add_argument("--instance", required=True)
    p.add_argument("--constraints", default="k1&k2&k3&k4&k5&k6")
    p.add_argument("--counts", required=True, help="comma-separated headcounts, one per job")
    p.add_argument("--population", type=int, default=60)
    p.add_argument("--generations", type=int, default=40)
    p.add_argument("--out", help="write the roster as CSV")
    _add_seed(p)

    p = sub.add_parser("table", help="generate a duty table")
    p.add_argument("--members", required=True,
                   help="member count ('8') or comma-separated names ('ann,bob,cid')")
    p.add_argument("--days", type=int, required=True)
    p.add_argument("--per-day", type=int, required=True)
    p.add_argument("--max-assignments", type=int, default=None)
    p.add_argument("--out", help="write the table as CSV")
    _add_seed(p)

    p = sub.add_parser("bench", help="run a canned experiment")
    p.add_argument("--experiment", choices=EXPERIMENT_IDS, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--out", help="directory for report.json, comparison.csv, and trace CSVs")
    _add_seed(p)

    p = sub.add_parser("validate", help="check an instance file (and optional constraints)")
    p.add_argument("--instance", required=True)
    p.add_argument("--constraints", default=None)

    return parser


def _invocation_from(args: argparse.Namespace) -> CliInvocation:
    shared = {"command", "instance", "constraints", "objective", "objectives",
              "objective_list", "solver", "seed", "out"}
    options = {k: v for k, v in vars(args).items() if k not in shared}
    objectives: list[str] = []
    if args.command == "solve":
        objectives.append(args.objective)
    elif args.command == "pareto":
        if getattr(args, "objectives", None):
            objectives.extend(t.strip() for t in args.objectives.split(",") if t.strip())
        objectives.extend(getattr(args, "objective_list", []))
    return CliInvocation(
        subcommand=args.command,
        instance=getattr(args, "instance", None),
        constraints=getattr(args, "constraints", None),
        objectives=tuple(objectives),
        solver=getattr(args, "solver", None),
        seed=getattr(args, "seed", None),
        out=getattr(args, "out", None),
        options=options,
    )


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_solve(inv: CliInvocation) -> int:
    opts = inv.options
    inst = mio.load_instance(inv.instance)
    text = _constraint_text(inv.constraints)
    expr = parse_constraint_string(text)
    bundle = ObjectiveBundle((parse_objective_token(inv.objectives[0], inst),))
    seed = _resolve_seed(inv.seed)
    penalty = PenaltyConfig(method=opts["penalty"], coefficient=opts["penalty_coefficient"])
    if inv.solver == "ea":
        cfg = EAConfig(
            population_size=opts["population"],
            generations=opts["generations"],
            encoding=opts["encoding"],
            penalty=penalty,
            seed=seed,
        )
        result = run_ea(inst, bundle, expr, cfg)
    elif inv.solver == "ip":
        result = ip_solve(inst, bundle, expr)
    elif inv.solver == "pso":
        result = pso_solve(inst, bundle, expr, PSOConfig(seed=seed, penalty=penalty))
    else:
        result = sa_solve(inst, bundle, expr, SAConfig(seed=seed, penalty=penalty))

    print(f"solver: {inv.solver}  objective: {inv.objectives[0]}  constraints: {text}")
    print(f"counts: {','.join(str(c) for c in result.counts.counts)}")
    print(f"value: {result.value:g}")
    print(f"feasible: {result.feasible}  violation: {result.violation:g}")
    print(f"evaluations: {result.evaluations}")
    if opts.get("counts_out"):
        mio.write_counts_csv(result.counts, inst, opts["counts_out"])
        print(f"wrote {opts['counts_out']}")
    if opts.get("trace_out"):
        mio.write_trace_csv(result.trace, opts["trace_out"])
        print(f"wrote {opts['trace_out']}")
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def _cmd_pareto(inv: CliInvocation) -> int:
    opts = inv.options
    inst = mio.load_instance(inv.instance)
    text = _constraint_text(inv.constraints)
    expr = parse_constraint_string(text)
    if len(inv.objectives) < 2:
        raise ConfigurationError("pareto needs at least two objectives")
    bundle = ObjectiveBundle(tuple(parse_objective_token(t, inst) for t in inv.objectives))
    seed = _resolve_seed(inv.seed)
    cfg = EAConfig(population_size=opts["population"], generations=opts["generations"], seed=seed)
    result = run_moea(inst, bundle, expr, cfg)
    print(f"objectives: {','.join(inv.objectives)}  constraints: {text}")
    print(f"archive: {len(result.archive)} non-dominated staffings")
    print(f"hypervolume: {result.trace.points[-1].best:g}")
    for e in result.archive:
        objs = ", ".join(f"{v:g}" for v in e.objectives)
        print(f"  counts {','.join(str(c) for c in e.counts.counts)}  ->  {objs}")
    if opts.get("archive_out"):
        labels = [o.label for o in bundle]
        mio.write_archive_csv(result.archive, inst, labels, opts["archive_out"])
        print(f"wrote {opts['archive_out']}")
    return EXIT_OK if result.archive else EXIT_INFEASIBLE


def _cmd_assign(inv: CliInvocation) -> int:
    opts = inv.options
    inst = mio.load_instance(inv.instance)
    text = _constraint_text(inv.constraints)
    expr = parse_constraint_string(text)
    try:
        counts = HeadcountVector(tuple(int(x) for x in opts["counts"].split(",")))
    except ValueError as exc:
        raise ConfigurationError(f"bad --counts: {exc}") from None
    if len(counts) != inst.n_jobs:
        raise ConfigurationError(
            f"--counts has {len(counts)} entries but the instance has {inst.n_jobs} jobs"
        )
    seed = _resolve_seed(inv.seed)
    cfg = EAConfig(
        population_size=opts["population"], generations=opts["generations"],
        encoding="bg", seed=seed,
    )
    result = solve_assignment(counts, inst, expr, cfg)
    print(f"roster for counts {opts['counts']} under {text}")
    print(f"value: {result.value:g}")
    print(f"feasible: {result.feasible}  violation: {result.violation:g}")
    if inv.out:
        mio.write_tensor_csv(result.tensor, inst, inv.out)
        print(f"wrote {inv.out}")
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def _cmd_table(inv: CliInvocation) -> int:
    opts = inv.options
    spec = opts["members"].strip()
    if "," in spec or not spec.isdigit():
        members = tuple(m.strip() for m in spec.split(",") if m.strip())
    else:
        members = tuple(f"m{i}" for i in range(int(spec)))
    seed = _resolve_seed(inv.seed)
    policy = SuitablePolicy(max_assignments=opts["max_assignments"])
    table = generate_table(members, opts["days"], opts["per_day"], policy, seed=seed)
    for day, chosen in enumerate(table.picks):
        print(f"day {day}: {', '.join(chosen)}")
    if inv.out:
        mio.write_table_csv(table, inv.out)
        print(f"wrote {inv.out}")
    return EXIT_OK


def _cmd_bench(inv: CliInvocation) -> int:
    opts = inv.options
    seed = _resolve_seed(inv.seed)
    report = run_experiment(opts["experiment"], seed=seed, trials=opts["trials"])
    for row in report.rows:
        acc = f"{row.accuracy_pct}%" if row.accuracy_pct is not None else "-"
        print(
            f"{row.solver:10s} best={row.best:<12g} median={row.median:<12g} "
            f"feasible={row.feasible_rate:.0%} accuracy={acc} rank={row.rank}"
        )
    for key, value in report.notes.items():
        print(f"{key}: {value}")
    if inv.out:
        write_report(report, inv.out)
        print(f"wrote {inv.out}/report.json, comparison.csv, and trace CSVs")
    return EXIT_OK


def _cmd_validate(inv: CliInvocation) -> int:
    problems = mio.validate_instance(inv.instance)
    if inv.constraints is not None:
        try:
            expr = parse_constraint_string(_constraint_text(inv.constraints))
        except ParseError as exc:
            problems.append(f"constraints: {exc}")
        else:
            if not problems:
                inst = mio.load_instance(inv.instance)
                from .constraints import collect_atoms, ConstraintKind

                for c in collect_atoms(expr):
                    if c.kind is ConstraintKind.EMERGENCY and inst.emergency is None:
                        problems.append("constraints use y1 but the instance has no emergency block")
                    if c.kind is ConstraintKind.MULTI_SHIFT and not inst.multi_shift:
                        problems.append("constraints use o1 but the instance is single-shift")
    if problems:
        for p in problems:
            print(f"problem: {p}")
        return EXIT_USAGE
    print("ok")
    return EXIT_OK


# ---------------------------------------------------------------------------


_HANDLERS = {
    "solve": _cmd_solve,
    "pareto": _cmd_pareto,
    "assign": _cmd_assign,
    "table": _cmd_table,
    "bench": _cmd_bench,
    "validate": _cmd_validate,
}


def main(argv: Union[Sequence[str], CliInvocation, None] = None) -> int:
    """Entry point: takes raw arguments (or ``None`` for ``sys.argv``),
    or an already-parsed :class:`CliInvocation`."""
    try:
        if isinstance(argv, CliInvocation):
            invocation = argv
        else:
            args = _build_parser().parse_args(argv)
            invocation = _invocation_from(args)
        return _HANDLERS[invocation.subcommand](invocation)
    except (InfeasibleError, TableGenerationError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigurationError, ParseError, StructuralError, MetricError,
            SearchSpaceError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else is a bug, not user error
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
