"""Single-objective staffing with penalty-function evolution.

Finds the cheapest headcount per job on the six-job reference week,
compares the evolutionary answer against the exact branch-and-prune
solver, contrasts the two genome encodings and the two penalty styles,
and finishes with the urgent-task reserve arithmetic.

Run:  python3 demos/02_staffing_solve.py [--seed N]
"""

import argparse

from manpower import (
    Direction,
    EAConfig,
    Objective,
    ObjectiveBundle,
    ObjectiveKind,
    PenaltyConfig,
    accuracy,
    apply_emergency,
    f2_total_salary,
    full_attendance,
    ip_solve,
    parse_constraint_string,
    run_ea,
    total_work_time,
)
from manpower.instances import reference_instance


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    inst = reference_instance()
    expr = parse_constraint_string("k1&k2&k3&k4&k5&k6")
    salary = ObjectiveBundle((Objective(ObjectiveKind.TOTAL_SALARY, Direction.MINIMIZE),))

    # -- exact reference ----------------------------------------------------
    exact = ip_solve(inst, salary, expr)
    print(f"exact optimum: counts={exact.counts.counts}  weekly bill={exact.value:g}")
    print(f"  (searched with {exact.evaluations} full evaluations thanks to pruning)\n")

    # -- evolutionary search, both encodings --------------------------------
    for encoding in ("ri", "bg"):
        cfg = EAConfig(encoding=encoding, seed=args.seed)
        res = run_ea(inst, salary, expr, cfg)
        curve = res.trace.best_curve()
        print(f"evolution [{encoding}]: counts={res.counts.counts}  value={res.value:g}  "
              f"accuracy={accuracy(exact.value, res.value)}%")
        print(f"  best-so-far curve: start {curve[0]:g} -> "
              f"gen10 {curve[10]:g} -> final {curve[-1]:g}")
    print()

    # -- barrier penalty stays strictly inside the feasible region ----------
    barrier = PenaltyConfig(method="internal", barrier_coefficient=1.0)
    res = run_ea(inst, salary, expr, EAConfig(seed=args.seed, penalty=barrier))
    print(f"barrier penalty: counts={res.counts.counts}  value={res.value:g}  "
          f"feasible={res.feasible}")
    print("  (every individual it ever visited satisfied all six rules)\n")

    # -- urgent-task reserve: solve with y1, then withdraw the reserve ------
    reserved = parse_constraint_string("k1&k2&k3&k4&k5&k6&y1")
    res = run_ea(inst, salary, reserved, EAConfig(seed=args.seed))
    hc = res.counts
    t = total_work_time(full_attendance(hc, inst), inst)
    c = f2_total_salary(hc, inst)
    hc2, t2, c2 = apply_emergency(hc, t, c, inst.emergency, inst)
    print(f"with reserve rule y1: counts={hc.counts}  bill={c:g}")
    print(f"after sending {inst.emergency.alpha} people to the urgent task:")
    print(f"  counts={hc2.counts}  hours {t:g} -> {t2:g}  cost {c:g} -> {c2:g}")


if __name__ == "__main__":
    main()
