"""Objective functions over headcount vectors and attendance tensors.

Three built-in economics are provided:

* total working time — hours delivered over the horizon,
* total salary under day-rate pay — every allocated employee is paid the
  full daily wage for every horizon day,
* multi-shift salary — pay accrues per attended slot, so partial days
  cost less.

Objectives carry a direction; ``signed_value`` maps everything onto
minimization so optimizers never need to branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .domain import (
    AttendanceTensor,
    HeadcountVector,
    ProblemInstance,
    daily_work_hours,
    full_attendance,
    total_work_time,
)
from .errors import ConfigurationError


class ObjectiveKind(str, Enum):
    TOTAL_TIME = "total_time"
    TOTAL_SALARY = "total_salary"
    MULTISHIFT_SALARY = "multishift_salary"
    HEADCOUNT_SUBSET = "headcount_subset"
    CUSTOM = "custom"


class Direction(str, Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


@dataclass(frozen=True)
class Objective:
    kind: ObjectiveKind
    direction: Direction = Direction.MINIMIZE
    job_indices: tuple[int, ...] | None = None
    func: Callable[[HeadcountVector, AttendanceTensor | None, ProblemInstance], float] | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind is ObjectiveKind.CUSTOM and self.func is None:
            raise ConfigurationError("custom objective needs a callable")
        if self.kind is ObjectiveKind.HEADCOUNT_SUBSET and not self.job_indices:
            raise ConfigurationError("headcount_subset objective needs job indices")
        if self.job_indices is not None:
            object.__setattr__(self, "job_indices", tuple(self.job_indices))
        if not self.label:
            object.__setattr__(self, "label", self.kind.value)


@dataclass(frozen=True)
class ObjectiveBundle:
    """Ordered list of objectives evaluated together."""

    objectives: tuple[Objective, ...]

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        if not self.objectives:
            raise ConfigurationError("bundle needs at least one objective")

    def __len__(self) -> int:
        return len(self.objectives)

    def __iter__(self):
        return iter(self.objectives)


# ---------------------------------------------------------------------------
# built-in economics


def f1_job_time(tensor: AttendanceTensor, job: int | str, inst: ProblemInstance) -> float:
    """Hours delivered on one job over the horizon: each attended slot
    contributes its duration.  Summed over all jobs this equals
    :func:`manpower.domain.total_work_time`."""
    j = inst.job_index(job) if isinstance(job, str) else int(job)
    durations = np.asarray(inst.jobs[j].shift_hours, dtype=float)
    mask = tensor.job_of_employee == j
    return float((tensor.day_slots()[mask] * durations).sum())


def f2_total_salary(hc: HeadcountVector, inst: ProblemInstance) -> float:
    """Wage bill under day-rate pay: allocated headcount is paid the full
    daily wage for every day of the horizon, attended or not."""
    return float(inst.horizon_days * sum(n * j.daily_wage for n, j in zip(hc.counts, inst.jobs)))


def f3_multishift_salary(tensor: AttendanceTensor, inst: ProblemInstance) -> float:
    """Wage bill when pay accrues per attended slot."""
    wages = np.array([j.wage_per_shift for j in inst.jobs], dtype=float)
    per_emp = wages[tensor.job_of_employee]  # (employees, 4)
    return float((tensor.day_slots() * per_emp[:, None, :]).sum())


def tensor_salary(tensor: AttendanceTensor, inst: ProblemInstance) -> float:
    """Salary realized by a tensor: slot-accrued in multi-shift mode,
    attended-day day-rate otherwise."""
    if inst.multi_shift:
        return f3_multishift_salary(tensor, inst)
    daily = np.array([j.daily_wage for j in inst.jobs], dtype=float)
    return float((tensor.day_attendance().sum(axis=1) * daily[tensor.job_of_employee]).sum())


def headcount_subset(hc: HeadcountVector, job_indices: Sequence[int]) -> float:
    return float(sum(hc.counts[i] for i in job_indices))


def total_time_headcount(hc: HeadcountVector, inst: ProblemInstance) -> float:
    """Full-attendance working time implied by a headcount vector alone."""
    return float(
        inst.horizon_days * sum(n * daily_work_hours(j) for n, j in zip(hc.counts, inst.jobs))
    )


def headcount_upper_bound(inst: ProblemInstance, job: int | str) -> int:
    """Staffing ceiling for one job: its share of the total seat budget,
    apportioned proportionally to the per-job minimums and rounded down."""
    j = inst.job_index(job) if isinstance(job, str) else int(job)
    lows = [jb.headcount_min for jb in inst.jobs]
    denom = sum(lows)
    if denom <= 0:
        raise ConfigurationError("headcount minimums sum to zero; cannot apportion seats")
    return math.floor(lows[j] / denom * inst.max_total_staff)


def headcount_upper_bounds(inst: ProblemInstance) -> tuple[int, ...]:
    """Vector of :func:`headcount_upper_bound` over every job."""
    return tuple(headcount_upper_bound(inst, j) for j in range(len(inst.jobs)))


# ---------------------------------------------------------------------------
# evaluation


def evaluate(obj: Objective, hc: HeadcountVector, tensor: AttendanceTensor | None, inst: ProblemInstance) -> float:
    """Raw objective value in its natural units (unsigned)."""
    if obj.kind is ObjectiveKind.TOTAL_TIME:
        if tensor is not None:
            return total_work_time(tensor, inst)
        return total_time_headcount(hc, inst)
    if obj.kind is ObjectiveKind.TOTAL_SALARY:
        if tensor is not None and inst.multi_shift:
            return tensor_salary(tensor, inst)
        return f2_total_salary(hc, inst)
    if obj.kind is ObjectiveKind.MULTISHIFT_SALARY:
        if tensor is None:
            # full attendance makes slot pay equal day-rate pay
            return f2_total_salary(hc, inst)
        return f3_multishift_salary(tensor, inst)
    if obj.kind is ObjectiveKind.HEADCOUNT_SUBSET:
        return headcount_subset(hc, obj.job_indices)
    return float(obj.func(hc, tensor, inst))


def signed_value(obj: Objective, hc: HeadcountVector, tensor: AttendanceTensor | None, inst: ProblemInstance) -> float:
    """Objective mapped onto minimization (maximization is negated)."""
    raw = evaluate(obj, hc, tensor, inst)
    return raw if obj.direction is Direction.MINIMIZE else -raw


def evaluate_bundle(
    bundle: ObjectiveBundle,
    hc: HeadcountVector,
    tensor: AttendanceTensor | None,
    inst: ProblemInstance,
) -> tuple[float, ...]:
    return tuple(signed_value(o, hc, tensor, inst) for o in bundle)


def parse_objective_token(token: str, inst: ProblemInstance) -> Objective:
    """Parse a CLI objective token.

    Accepts ``total_time``, ``salary``, ``salary_ms``, or
    ``headcount:a+c`` (sum of the named jobs' headcounts, maximized).
    A leading ``-`` flips the default direction.
    """
    tok = token.strip()
    direction = None
    if tok.startswith("-"):
        direction = "flip"
        tok = tok[1:]
    if tok.startswith("headcount:"):
        codes = [c for c in tok[len("headcount:"):].split("+") if c]
        if not codes:
            raise ConfigurationError(f"objective {token!r}: no job codes after 'headcount:'")
        try:
            idx = tuple(inst.job_index(c) for c in codes)
        except KeyError as exc:
            raise ConfigurationError(f"objective {token!r}: {exc.args[0]}") from None
        base = Direction.MAXIMIZE
        obj_kind, label = ObjectiveKind.HEADCOUNT_SUBSET, tok
        job_indices = idx
    else:
        table = {
            "total_time": (ObjectiveKind.TOTAL_TIME, Direction.MINIMIZE),
            "salary": (ObjectiveKind.TOTAL_SALARY, Direction.MINIMIZE),
            "salary_ms": (ObjectiveKind.MULTISHIFT_SALARY, Direction.MINIMIZE),
        }
        if tok not in table:
            raise ConfigurationError(f"unknown objective {token!r}")
        obj_kind, base = table[tok]
        label, job_indices = tok, None
    if direction == "flip":
        base = Direction.MAXIMIZE if base is Direction.MINIMIZE else Direction.MINIMIZE
        label = "-" + label
    return Objective(kind=obj_kind, direction=base, job_indices=job_indices, label=label)
