"""Ready-made problem instances.

:func:`reference_instance` is a six-job week used throughout the
examples and benchmarks: a store staffed by a manager, clerks, guards,
salesclerks, tallyclerks, and a cleaner, with realistic wage spreads and
an urgent-task reserve drawn from the sales floor.
:func:`random_micro_instance` builds tiny instances that are feasible by
construction, small enough for exact search, for head-to-head solver
tests.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .domain import EmergencySpec, Job, ProblemInstance


def reference_instance(multi_shift: bool = False, emergency: bool = True) -> ProblemInstance:
    """Six jobs over a seven-day week, capped at 60 staff in total."""
    jobs = (
        Job("a", "manager", wage_per_shift=(30, 30, 30, 60), headcount_min=1, headcount_max=6,
            shift_hours=(4, 4, 4, 8)),
        Job("b", "clerk", wage_per_shift=(15, 15, 15, 0), headcount_min=2, headcount_max=15,
            shift_hours=(4, 4, 4, 0)),
        Job("c", "guard", wage_per_shift=(12, 12, 12, 24), headcount_min=1, headcount_max=8,
            shift_hours=(4, 4, 4, 8)),
        Job("d", "salesclerk", wage_per_shift=(0, 14, 14, 28), headcount_min=2, headcount_max=12,
            shift_hours=(0, 4, 4, 8)),
        Job("e", "tallyclerk", wage_per_shift=(13, 13, 0, 26), headcount_min=1, headcount_max=10,
            shift_hours=(4, 4, 0, 8)),
        Job("f", "cleaner", wage_per_shift=(10, 0, 10, 0), headcount_min=1, headcount_max=9,
            shift_hours=(4, 0, 4, 0)),
    )
    spec = (
        EmergencySpec(alpha=3, time_cost=50.0, bonus=200.0, punishment=80.0,
                      daily_probability=0.1, jobs=("d", "e"))
        if emergency
        else None
    )
    return ProblemInstance(
        jobs=jobs,
        horizon_days=7,
        max_total_staff=60,
        work_time_bounds=((140, 500), (168, 1000), (140, 700), (224, 1100), (112, 900), (56, 500)),
        salary_bounds=(3500, 15000),
        rest_cap=3,
        emergency=spec,
        multi_shift=multi_shift,
    )


def micro_instance(multi_shift: bool = False) -> ProblemInstance:
    """Two jobs over two days; 24 headcount combinations in total."""
    jobs = (
        Job("a", "operator", wage_per_shift=(10, 10, 10, 20), headcount_min=1, headcount_max=4,
            shift_hours=(4, 4, 4, 8)),
        Job("b", "helper", wage_per_shift=(5, 5, 5, 0), headcount_min=1, headcount_max=6,
            shift_hours=(4, 4, 4, 0)),
    )
    return ProblemInstance(
        jobs=jobs,
        horizon_days=2,
        max_total_staff=8,
        work_time_bounds=((40, 200), (24, 150)),
        salary_bounds=(100, 900),
        rest_cap=1,
        emergency=EmergencySpec(alpha=1, time_cost=5.0, bonus=10.0, punishment=4.0,
                                daily_probability=0.2),
        multi_shift=multi_shift,
    )


def random_micro_instance(
    rng: np.random.Generator,
    n_jobs: Optional[int] = None,
    multi_shift: bool = False,
    with_emergency: bool = False,
) -> ProblemInstance:
    """A small random instance that is feasible by construction.

    A target headcount vector is drawn first; every window (working
    time, salary, staffing cap) is then widened to contain the target,
    so the box always holds at least one point satisfying the usual
    AND-composition of the basic constraints.
    """
    k = int(n_jobs) if n_jobs is not None else int(rng.integers(2, 4))
    horizon = int(rng.integers(2, 4))
    jobs = []
    lows, highs, targets = [], [], []
    for j in range(k):
        lo = int(rng.integers(1, 3))
        hi = lo + int(rng.integers(1, 4))
        target = int(rng.integers(lo, hi + 1))
        hours = [int(h) for h in rng.integers(0, 5, size=3)] + [int(rng.integers(1, 9))]
        wages = [int(w) for w in rng.integers(0, 20, size=4)]
        if sum(wages) == 0:
            wages[3] = 5
        jobs.append(
            Job(
                code=chr(ord("a") + j),
                name=f"job{j}",
                wage_per_shift=tuple(wages),
                headcount_min=lo,
                headcount_max=hi,
                shift_hours=tuple(hours),
            )
        )
        lows.append(lo)
        highs.append(hi)
        targets.append(target)

    def hours_at(n: int, job: Job) -> float:
        return n * sum(job.shift_hours) * horizon

    work_bounds = []
    for j, job in enumerate(jobs):
        centre = hours_at(targets[j], job)
        low = hours_at(lows[j], job) if rng.random() < 0.5 else centre
        high = centre + float(rng.integers(0, int(centre) + 2))
        work_bounds.append((low, high))
    salary_at = lambda counts: horizon * sum(n * job.daily_wage for n, job in zip(counts, jobs))
    target_salary = salary_at(targets)
    salary_lo = 0.0 if rng.random() < 0.5 else max(0.0, target_salary - float(rng.integers(0, 50)))
    salary_hi = target_salary + float(rng.integers(1, 200))
    max_total = max(sum(targets), sum(lows)) + int(rng.integers(0, 3))

    spec = None
    if with_emergency:
        spec = EmergencySpec(
            alpha=1,
            time_cost=float(rng.integers(1, 10)),
            bonus=float(rng.integers(0, 20)),
            punishment=float(rng.integers(0, 20)),
            daily_probability=float(rng.uniform(0, 0.5)),
        )

    return ProblemInstance(
        jobs=tuple(jobs),
        horizon_days=horizon,
        max_total_staff=max_total,
        work_time_bounds=tuple(work_bounds),
        salary_bounds=(salary_lo, salary_hi),
        rest_cap=int(rng.integers(1, horizon + 1)),
        emergency=spec,
        multi_shift=multi_shift,
    )
