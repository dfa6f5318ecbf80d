"""Duty tables: who actually shows up on which day.

Once headcounts are fixed, day-by-day duty still has to be dealt out.
Two generators cover the common cases: a deterministic rotation that
walks a circle of people through a fixed set of posts, and a randomized
table that deals days out under pluggable admissibility rules (nobody
twice per day, per-person assignment caps, custom vetoes).  Generated
tables can be replayed for validation and lifted into a full attendance
roster for rule checking.

Run:  python3 demos/04_duty_tables.py [--seed N]
"""

import argparse

from manpower import (
    RotationSpec,
    SuitablePolicy,
    atom,
    default_max_assignments,
    eval_expr,
    generate_rotation,
    generate_table,
    rotation_matrix,
    table_to_tensor,
    validate_table,
)
from manpower.instances import micro_instance


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    # -- deterministic rotation: 5 people, 3 posts, 5 days -------------------
    rotation = generate_rotation(
        RotationSpec(positions=3, people=5), days=5,
        members=("ann", "bob", "cid", "dee", "eli"),
    )
    print("rotation (3 posts walked by 5 people):")
    for day, chosen in enumerate(rotation.picks):
        print(f"  day {day}: {', '.join(chosen)}")
    print("  loads:", dict(sorted(rotation.assignment_counts().items())))
    print("everyone serves exactly 3 of the 15 slots — perfectly fair.")
    print("raw index matrix:", rotation_matrix(RotationSpec(positions=3, people=5), days=5)
          .ravel().tolist(), "\n")

    # -- randomized table with admissibility rules ---------------------------
    members = ("ann", "bob", "cid", "dee", "eli", "fay")
    days, per_day = 7, 2
    cap = default_max_assignments(days, len(members), per_day)
    policy = SuitablePolicy(max_assignments=cap)
    table = generate_table(members, days, per_day, policy, seed=args.seed)
    print(f"random table ({per_day} on duty per day, at most {cap} days each):")
    for day, chosen in enumerate(table.picks):
        print(f"  day {day}: {', '.join(chosen)}")
    print("  loads:", dict(sorted(table.assignment_counts().items())))
    print("  replay validation:", validate_table(table, policy))

    # -- a custom veto: ann never works weekends (days 5, 6) -----------------
    no_weekend_ann = SuitablePolicy(
        max_assignments=cap + 1,
        allow=lambda state, member, day: not (member == "ann" and day >= 5),
    )
    table2 = generate_table(members, days, per_day, no_weekend_ann, seed=args.seed)
    weekend = [m for day in (5, 6) for m in table2.picks[day]]
    print(f"\nwith a weekend veto for ann, days 5-6 staff: {weekend}")

    # -- lift a table into a roster and check rules --------------------------
    inst = micro_instance()
    helpers = generate_table(("h0", "h1"), inst.horizon_days, 1,
                             SuitablePolicy(), seed=args.seed)
    tensor = table_to_tensor(helpers, inst, job_code="b")
    hc = tensor.headcounts()
    print("\nlifted roster satisfies 'job b staffed daily'?",
          eval_expr(atom("k2", jobs=("b",)), tensor, hc, inst))


if __name__ == "__main__":
    main()
