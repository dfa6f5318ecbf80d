"""Composable scheduling rules.

Every staffing rule is an atom (k1..k6, y1, y2, o1, o2) that can be
combined with ``&``, ``|`` and ``!``.  Each atom answers two questions:
*does the plan satisfy me?* (a boolean) and *by how much does it miss?*
(a graded violation that optimizers can descend).  This script walks
through both views on the six-job reference week.

Run:  python3 demos/01_constraint_algebra.py
"""

from manpower import (
    HeadcountVector,
    atom,
    boundary_distance,
    eval_expr,
    format_expr,
    full_attendance,
    parse_constraint_string,
    violation_expr,
)
from manpower.instances import reference_instance


def main() -> None:
    inst = reference_instance()
    print("jobs:", ", ".join(f"{j.code}={j.name}" for j in inst.jobs))
    print(f"horizon: {inst.horizon_days} days, staff cap: {inst.max_total_staff}\n")

    # -- two candidate staffing plans -------------------------------------
    lean = HeadcountVector((1, 2, 1, 2, 1, 2))   # the cost optimum
    bare = HeadcountVector((1, 2, 1, 2, 1, 1))   # one cleaner short

    basic = parse_constraint_string("k1&k2&k3&k4&k5&k6")
    print(f"rule set: {format_expr(basic)}")
    for label, hc in (("lean", lean), ("bare", bare)):
        ok = eval_expr(basic, None, hc, inst)
        miss = violation_expr(basic, None, hc, inst)
        print(f"  {label} {hc.counts}: satisfied={ok}  violation={miss:g}")
    print("The bare plan undershoots the weekly salary floor; the graded")
    print("violation tells the optimizer how far away it is.\n")

    # -- composition: OR relaxes, NOT negates ------------------------------
    relaxed = parse_constraint_string("k1&k2&k3&k6&(k4|k5)")
    print(f"relaxed rule set: {format_expr(relaxed)}")
    print("  bare plan now satisfied?", eval_expr(relaxed, None, bare, inst))
    print("  (an OR branch is satisfied when its cheapest side is)\n")

    over_cap = HeadcountVector((6, 15, 8, 12, 10, 9))
    not_capped = ~atom("k5")
    print(f"negation {format_expr(not_capped)} on {over_cap.counts}:",
          eval_expr(not_capped, None, over_cap, inst))

    # -- operator sugar builds the same trees as the parser ----------------
    sugar = atom("k1") & atom("k2") | ~atom("k5")
    print("\noperator sugar:", format_expr(sugar))
    assert format_expr(sugar) == format_expr(parse_constraint_string("k1&k2|!k5"))

    # -- rosters are graded too --------------------------------------------
    roster = full_attendance(lean, inst)
    print("\nfull-attendance roster for the lean plan:")
    print("  k2 (every job staffed daily) violation:",
          violation_expr(atom("k2"), roster, lean, inst))
    print("  k6 (no long rest runs) violation:",
          violation_expr(atom("k6"), roster, lean, inst))

    # -- distance to the feasible boundary (used by the barrier penalty) ---
    print("\nhow much slack does the lean plan have before a rule breaks?")
    for code in ("k3", "k4", "k5"):
        d = boundary_distance(atom(code).constraint, None, lean, inst)
        print(f"  {code}: {d:g}")


if __name__ == "__main__":
    main()
