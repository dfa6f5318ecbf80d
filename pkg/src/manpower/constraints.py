"""Composable scheduling constraints.

Ten atomic predicates cover duty exclusivity, job coverage, working-time
and salary windows, staffing and rest caps, urgent-task withdrawal
capacity, per-job headcount windows, multi-shift coverage, and
cross-job cooperation.  Atoms compose with ``&`` (and), ``|`` (or), and
``!`` (not) into expression trees, either programmatically or through
:func:`parse_constraint_string`.

Every atom has two faces kept deliberately separate:

* :func:`eval_atom` — a fast vectorized yes/no check,
* :func:`violation_atom` — a loop-based magnitude of how badly the atom
  fails (0.0 exactly when satisfied).

The two are implemented independently so each can serve as a check on
the other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence

import numpy as np

from .domain import (
    SLOTS_PER_DAY,
    AttendanceTensor,
    HeadcountVector,
    ProblemInstance,
    daily_work_hours,
)
from .errors import ConfigurationError, InfeasibleError, ParseError
from .objectives import f2_total_salary, tensor_salary


class ConstraintKind(str, Enum):
    """Atomic constraint codes, in the order they are usually composed."""

    SINGLE_DUTY = "k1"          # nobody holds two jobs in the same slot
    EVERY_JOB_OCCUPIED = "k2"   # each job staffed every day
    WORK_TIME_RANGE = "k3"      # per-job hours within window
    SALARY_RANGE = "k4"         # total wage bill within window
    STAFF_CAP = "k5"            # total headcount within the cap
    REST_CAP = "k6"             # consecutive rest days within the cap
    EMERGENCY = "y1"            # enough spare staff for a withdrawal
    HEADCOUNT_RANGE = "y2"      # per-job headcount within window
    MULTI_SHIFT = "o1"          # everyone covers >= 1 slot per day
    COOPERATION = "o2"          # named jobs can jointly lend staff


ATOM_CODES = tuple(k.value for k in ConstraintKind)


@dataclass(frozen=True)
class AtomicConstraint:
    """One predicate, optionally restricted to a subset of job codes.

    ``count`` only matters for cooperation (o2): the number of employees
    the subset must be able to lend (default 1).
    """

    kind: ConstraintKind
    jobs: tuple[str, ...] | None = None
    count: int | None = None

    def __post_init__(self):
        if self.jobs is not None:
            object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.count is not None and self.count < 1:
            raise ConfigurationError("constraint count must be positive")

    @property
    def parameterized(self) -> bool:
        return self.jobs is not None or self.count is not None


class Expr:
    """Base class for constraint expression trees."""

    __slots__ = ()

    def __and__(self, other: "Expr") -> "And":
        return And(self, other)

    def __or__(self, other: "Expr") -> "Or":
        return Or(self, other)

    def __invert__(self) -> "Not":
        return Not(self)


@dataclass(frozen=True)
class Atom(Expr):
    constraint: AtomicConstraint


@dataclass(frozen=True)
class And(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Or(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr


ConstraintExpr = Expr
"""Public name for constraint expression trees (atoms composed with
And/Or/Not); useful in signatures where ``Expr`` reads too generically."""


def atom(code: str | ConstraintKind, jobs: Sequence[str] | None = None, count: int | None = None) -> Atom:
    kind = code if isinstance(code, ConstraintKind) else ConstraintKind(code)
    return Atom(AtomicConstraint(kind, tuple(jobs) if jobs is not None else None, count))


def conjunction(*codes: str | ConstraintKind) -> Expr:
    """Left-folded AND of the named atoms, e.g. ``conjunction("k1", "k5")``."""
    if not codes:
        raise ConfigurationError("conjunction needs at least one atom")
    expr: Expr = atom(codes[0])
    for code in codes[1:]:
        expr = And(expr, atom(code))
    return expr


def collect_atoms(expr: Expr) -> list[AtomicConstraint]:
    """All atomic constraints in the tree, left to right."""
    out: list[AtomicConstraint] = []
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            out.append(node.constraint)
        elif isinstance(node, (And, Or)):
            stack.extend((node.right, node.left))
        elif isinstance(node, Not):
            stack.append(node.operand)
        else:
            raise ConfigurationError(f"unknown expression node {type(node).__name__}")
    return out


def is_conjunction(expr: Expr) -> bool:
    """True when the tree uses only AND and atoms (no OR, no NOT)."""
    if isinstance(expr, Atom):
        return True
    if isinstance(expr, And):
        return is_conjunction(expr.left) and is_conjunction(expr.right)
    return False


# ---------------------------------------------------------------------------
# shared lookups


def _subset_indices(c: AtomicConstraint, inst: ProblemInstance) -> list[int]:
    if c.jobs is None:
        return list(range(inst.n_jobs))
    return [inst.job_index(code) for code in c.jobs]


def _counts_in_play(hc: HeadcountVector | None, tensor: AttendanceTensor | None, inst: ProblemInstance) -> tuple[int, ...]:
    """Headcounts the predicates judge: tensor rows win over the vector."""
    if tensor is not None:
        return tensor.headcounts().counts
    if hc is None:
        raise ConfigurationError("need a headcount vector or a tensor")
    return hc.counts


def _spare_capacity(counts: Sequence[int], jobs: Sequence[int], inst: ProblemInstance) -> int:
    """Employees the given jobs can lend while each job keeps its own
    headcount floor (and never drops to zero)."""
    spare = 0
    for j in jobs:
        floor = max(1, inst.jobs[j].headcount_min)
        spare += max(0, counts[j] - floor)
    return spare


def _emergency_spec(inst: ProblemInstance):
    if inst.emergency is None:
        raise ConfigurationError("instance has no emergency parameters (y1)")
    return inst.emergency


# ---------------------------------------------------------------------------
# predicate evaluation (vectorized)


def eval_atom(
    c: AtomicConstraint,
    tensor: AttendanceTensor | None,
    hc: HeadcountVector | None,
    inst: ProblemInstance,
) -> bool:
    """Yes/no check of one atom against a tensor, or against a headcount
    vector under the full-attendance assumption when ``tensor`` is None."""
    kind = c.kind

    if kind is ConstraintKind.SINGLE_DUTY:
        if tensor is None:
            return True
        return bool(np.all(tensor.entries.sum(axis=2) <= 1))

    if kind is ConstraintKind.EVERY_JOB_OCCUPIED:
        subset = _subset_indices(c, inst)
        if tensor is None:
            counts = _counts_in_play(hc, tensor, inst)
            return all(counts[j] >= 1 for j in subset)
        day_att = tensor.day_attendance()
        for j in subset:
            rows = tensor.job_of_employee == j
            if not rows.any() or not day_att[rows].any(axis=0).all():
                return False
        return True

    if kind is ConstraintKind.WORK_TIME_RANGE:
        subset = _subset_indices(c, inst)
        hours = _job_hours(tensor, hc, inst)
        return all(
            inst.work_time_bounds[j][0] <= hours[j] <= inst.work_time_bounds[j][1]
            for j in subset
        )

    if kind is ConstraintKind.SALARY_RANGE:
        if tensor is not None:
            v = tensor_salary(tensor, inst)
        else:
            v = f2_total_salary(hc, inst)
        lo, hi = inst.salary_bounds
        return lo <= v <= hi

    if kind is ConstraintKind.STAFF_CAP:
        return sum(_counts_in_play(hc, tensor, inst)) <= inst.max_total_staff

    if kind is ConstraintKind.REST_CAP:
        if tensor is None:
            return True
        runs = _max_rest_runs(tensor.day_attendance())
        return bool(np.all(runs <= inst.rest_cap))

    if kind is ConstraintKind.EMERGENCY:
        spec = _emergency_spec(inst)
        counts = _counts_in_play(hc, tensor, inst)
        affected = (
            [inst.job_index(code) for code in spec.jobs]
            if spec.jobs is not None
            else list(range(inst.n_jobs))
        )
        return _spare_capacity(counts, affected, inst) >= spec.alpha

    if kind is ConstraintKind.HEADCOUNT_RANGE:
        counts = _counts_in_play(hc, tensor, inst)
        return all(
            inst.jobs[j].headcount_min <= counts[j] <= inst.jobs[j].headcount_max
            for j in _subset_indices(c, inst)
        )

    if kind is ConstraintKind.MULTI_SHIFT:
        if not inst.multi_shift:
            raise ConfigurationError("multi-shift coverage (o1) on a single-shift instance")
        if tensor is None:
            return True
        return bool(tensor.day_attendance().all())

    if kind is ConstraintKind.COOPERATION:
        counts = _counts_in_play(hc, tensor, inst)
        need = c.count if c.count is not None else 1
        return _spare_capacity(counts, _subset_indices(c, inst), inst) >= need

    raise ConfigurationError(f"unknown constraint kind {kind!r}")


def _job_hours(tensor: AttendanceTensor | None, hc: HeadcountVector | None, inst: ProblemInstance) -> np.ndarray:
    """Hours worked per job over the horizon."""
    if tensor is None:
        counts = _counts_in_play(hc, tensor, inst)
        return np.array(
            [counts[j] * daily_work_hours(inst.jobs[j]) * inst.horizon_days for j in range(inst.n_jobs)]
        )
    hours = np.zeros(inst.n_jobs)
    day_slots = tensor.day_slots()
    durations = np.array([j.shift_hours for j in inst.jobs], dtype=float)
    for j in range(inst.n_jobs):
        rows = tensor.job_of_employee == j
        if rows.any():
            hours[j] = float((day_slots[rows] * durations[j]).sum())
    return hours


def _max_rest_runs(day_att: np.ndarray) -> np.ndarray:
    """Longest run of consecutive rest days, per employee row."""
    runs = np.zeros(day_att.shape[0], dtype=np.int64)
    for i in range(day_att.shape[0]):
        rest = 1 - day_att[i]
        if rest.any():
            padded = np.concatenate(([0], rest, [0]))
            edges = np.flatnonzero(np.diff(padded))
            runs[i] = int((edges[1::2] - edges[0::2]).max())
    return runs


# ---------------------------------------------------------------------------
# violation magnitudes (loop-based, kept independent of eval_atom)


def violation_atom(
    c: AtomicConstraint,
    tensor: AttendanceTensor | None,
    hc: HeadcountVector | None,
    inst: ProblemInstance,
) -> float:
    """How badly the atom fails; 0.0 exactly when it holds.

    Counting atoms report offending cells or days; window atoms report
    the distance to the nearest bound.
    """
    kind = c.kind

    if kind is ConstraintKind.SINGLE_DUTY:
        if tensor is None:
            return 0.0
        bad = 0
        for employee in range(tensor.n_employees):
            for slot in range(tensor.entries.shape[1]):
                if int(tensor.entries[employee, slot, :].sum()) > 1:
                    bad += 1
        return float(bad)

    if kind is ConstraintKind.EVERY_JOB_OCCUPIED:
        subset = _subset_indices(c, inst)
        if tensor is None:
            counts = _counts_in_play(hc, tensor, inst)
            empty = sum(1 for j in subset if counts[j] < 1)
            return float(empty * inst.horizon_days)
        gaps = 0
        for day in range(tensor.days):
            for j in subset:
                staffed = False
                for employee in range(tensor.n_employees):
                    if tensor.job_of_employee[employee] != j:
                        continue
                    lo = day * SLOTS_PER_DAY
                    if any(tensor.entries[employee, lo + s, j] for s in range(SLOTS_PER_DAY)):
                        staffed = True
                        break
                if not staffed:
                    gaps += 1
        return float(gaps)

    if kind is ConstraintKind.WORK_TIME_RANGE:
        total = 0.0
        for j in _subset_indices(c, inst):
            worked = _loop_job_hours(tensor, hc, inst, j)
            lo, hi = inst.work_time_bounds[j]
            total += _interval_distance(worked, lo, hi)
        return total

    if kind is ConstraintKind.SALARY_RANGE:
        v = _loop_salary(tensor, hc, inst)
        lo, hi = inst.salary_bounds
        return _interval_distance(v, lo, hi)

    if kind is ConstraintKind.STAFF_CAP:
        total = sum(_counts_in_play(hc, tensor, inst))
        return float(max(0, total - inst.max_total_staff))

    if kind is ConstraintKind.REST_CAP:
        if tensor is None:
            return 0.0
        excess = 0
        for employee in range(tensor.n_employees):
            worked = [
                any(
                    tensor.entries[employee, day * SLOTS_PER_DAY + s, :].any()
                    for s in range(SLOTS_PER_DAY)
                )
                for day in range(tensor.days)
            ]
            for is_rest, group in itertools.groupby(worked, key=lambda w: not w):
                if is_rest:
                    excess += max(0, len(list(group)) - inst.rest_cap)
        return float(excess)

    if kind is ConstraintKind.EMERGENCY:
        spec = _emergency_spec(inst)
        counts = _counts_in_play(hc, tensor, inst)
        affected = (
            [inst.job_index(code) for code in spec.jobs]
            if spec.jobs is not None
            else list(range(inst.n_jobs))
        )
        spare = 0
        for j in affected:
            keep = inst.jobs[j].headcount_min
            if keep < 1:
                keep = 1
            if counts[j] > keep:
                spare += counts[j] - keep
        return float(max(0, spec.alpha - spare))

    if kind is ConstraintKind.HEADCOUNT_RANGE:
        counts = _counts_in_play(hc, tensor, inst)
        total = 0.0
        for j in _subset_indices(c, inst):
            total += _interval_distance(
                float(counts[j]), inst.jobs[j].headcount_min, inst.jobs[j].headcount_max
            )
        return total

    if kind is ConstraintKind.MULTI_SHIFT:
        if not inst.multi_shift:
            raise ConfigurationError("multi-shift coverage (o1) on a single-shift instance")
        if tensor is None:
            return 0.0
        idle = 0
        for employee in range(tensor.n_employees):
            for day in range(tensor.days):
                lo = day * SLOTS_PER_DAY
                if not any(
                    tensor.entries[employee, lo + s, :].any() for s in range(SLOTS_PER_DAY)
                ):
                    idle += 1
        return float(idle)

    if kind is ConstraintKind.COOPERATION:
        counts = _counts_in_play(hc, tensor, inst)
        need = c.count if c.count is not None else 1
        spare = 0
        for j in _subset_indices(c, inst):
            keep = inst.jobs[j].headcount_min
            if keep < 1:
                keep = 1
            if counts[j] > keep:
                spare += counts[j] - keep
        return float(max(0, need - spare))

    raise ConfigurationError(f"unknown constraint kind {kind!r}")


def _interval_distance(v: float, lo: float, hi: float) -> float:
    if v < lo:
        return lo - v
    if v > hi:
        return v - hi
    return 0.0


def _loop_job_hours(tensor: AttendanceTensor | None, hc: HeadcountVector | None, inst: ProblemInstance, j: int) -> float:
    job = inst.jobs[j]
    if tensor is None:
        counts = _counts_in_play(hc, tensor, inst)
        return counts[j] * sum(job.shift_hours) * inst.horizon_days
    worked = 0.0
    for employee in range(tensor.n_employees):
        if tensor.job_of_employee[employee] != j:
            continue
        for slot in range(tensor.entries.shape[1]):
            if tensor.entries[employee, slot, j]:
                worked += job.shift_hours[slot % SLOTS_PER_DAY]
    return worked


def _loop_salary(tensor: AttendanceTensor | None, hc: HeadcountVector | None, inst: ProblemInstance) -> float:
    if tensor is None:
        counts = _counts_in_play(hc, tensor, inst)
        return sum(
            counts[j] * sum(inst.jobs[j].wage_per_shift) * inst.horizon_days
            for j in range(inst.n_jobs)
        )
    bill = 0.0
    for employee in range(tensor.n_employees):
        j = int(tensor.job_of_employee[employee])
        job = inst.jobs[j]
        for day in range(tensor.days):
            lo = day * SLOTS_PER_DAY
            slots = [int(tensor.entries[employee, lo + s, j]) for s in range(SLOTS_PER_DAY)]
            if inst.multi_shift:
                bill += sum(b * w for b, w in zip(slots, job.wage_per_shift))
            elif any(slots):
                bill += sum(job.wage_per_shift)
    return bill


# ---------------------------------------------------------------------------
# expression evaluation


def eval_expr(
    expr: Expr,
    tensor: AttendanceTensor | None,
    hc: HeadcountVector | None,
    inst: ProblemInstance,
) -> bool:
    if isinstance(expr, Atom):
        return eval_atom(expr.constraint, tensor, hc, inst)
    if isinstance(expr, And):
        return eval_expr(expr.left, tensor, hc, inst) and eval_expr(expr.right, tensor, hc, inst)
    if isinstance(expr, Or):
        return eval_expr(expr.left, tensor, hc, inst) or eval_expr(expr.right, tensor, hc, inst)
    if isinstance(expr, Not):
        return not eval_expr(expr.operand, tensor, hc, inst)
    raise ConfigurationError(f"unknown expression node {type(expr).__name__}")


def violation_expr(
    expr: Expr,
    tensor: AttendanceTensor | None,
    hc: HeadcountVector | None,
    inst: ProblemInstance,
) -> float:
    """Aggregate violation: AND sums, OR takes the easiest branch, NOT is
    an indicator (1.0 when the operand holds, else 0.0)."""
    if isinstance(expr, Atom):
        return violation_atom(expr.constraint, tensor, hc, inst)
    if isinstance(expr, And):
        return violation_expr(expr.left, tensor, hc, inst) + violation_expr(expr.right, tensor, hc, inst)
    if isinstance(expr, Or):
        return min(
            violation_expr(expr.left, tensor, hc, inst),
            violation_expr(expr.right, tensor, hc, inst),
        )
    if isinstance(expr, Not):
        return 0.0 if violation_expr(expr.operand, tensor, hc, inst) > 0.0 else 1.0
    raise ConfigurationError(f"unknown expression node {type(expr).__name__}")


# ---------------------------------------------------------------------------
# barrier geometry (for interior penalty methods)


def boundary_distance(
    c: AtomicConstraint,
    tensor: AttendanceTensor | None,
    hc: HeadcountVector | None,
    inst: ProblemInstance,
) -> float:
    """Distance from the feasible boundary: positive strictly inside,
    0.0 on the boundary or outside.  Structural atoms with no usable
    geometry report +inf when satisfied."""
    kind = c.kind

    if kind in (ConstraintKind.SINGLE_DUTY, ConstraintKind.EVERY_JOB_OCCUPIED, ConstraintKind.MULTI_SHIFT):
        return float("inf") if eval_atom(c, tensor, hc, inst) else 0.0

    if kind is ConstraintKind.WORK_TIME_RANGE:
        hours = _job_hours(tensor, hc, inst)
        d = min(
            min(hours[j] - inst.work_time_bounds[j][0], inst.work_time_bounds[j][1] - hours[j])
            for j in _subset_indices(c, inst)
        )
        return max(0.0, float(d))

    if kind is ConstraintKind.SALARY_RANGE:
        v = tensor_salary(tensor, inst) if tensor is not None else f2_total_salary(hc, inst)
        lo, hi = inst.salary_bounds
        return max(0.0, float(min(v - lo, hi - v)))

    if kind is ConstraintKind.STAFF_CAP:
        return max(0.0, float(inst.max_total_staff - sum(_counts_in_play(hc, tensor, inst))))

    if kind is ConstraintKind.REST_CAP:
        if tensor is None:
            return float(inst.rest_cap)
        runs = _max_rest_runs(tensor.day_attendance())
        slack = inst.rest_cap - (int(runs.max()) if runs.size else 0)
        return max(0.0, float(slack))

    if kind is ConstraintKind.EMERGENCY:
        spec = _emergency_spec(inst)
        counts = _counts_in_play(hc, tensor, inst)
        affected = (
            [inst.job_index(code) for code in spec.jobs]
            if spec.jobs is not None
            else list(range(inst.n_jobs))
        )
        return max(0.0, float(_spare_capacity(counts, affected, inst) - spec.alpha))

    if kind is ConstraintKind.HEADCOUNT_RANGE:
        counts = _counts_in_play(hc, tensor, inst)
        d = min(
            min(
                counts[j] - inst.jobs[j].headcount_min,
                inst.jobs[j].headcount_max - counts[j],
            )
            for j in _subset_indices(c, inst)
        )
        return max(0.0, float(d))

    if kind is ConstraintKind.COOPERATION:
        counts = _counts_in_play(hc, tensor, inst)
        need = c.count if c.count is not None else 1
        return max(0.0, float(_spare_capacity(counts, _subset_indices(c, inst), inst) - need))

    raise ConfigurationError(f"unknown constraint kind {kind!r}")


# ---------------------------------------------------------------------------
# urgent-task arithmetic


def apply_emergency(
    hc: HeadcountVector,
    t_total: float,
    cost: float,
    spec,
    inst: ProblemInstance,
) -> tuple[HeadcountVector, float, float]:
    """Withdraw ``alpha`` employees for an urgent task and restate the
    working-time and wage totals.

    Staff leave the currently largest affected job first (ties go to the
    earlier job).  Time drops by the task's time cost; the wage bill
    loses the bonus and gains the punishment charge.
    """
    affected = (
        [inst.job_index(code) for code in spec.jobs]
        if spec.jobs is not None
        else list(range(inst.n_jobs))
    )
    counts = list(hc.counts)
    available = sum(counts[j] for j in affected)
    if available < spec.alpha:
        raise InfeasibleError(
            f"urgent task needs {spec.alpha} employees but the affected jobs hold {available}"
        )
    for _ in range(spec.alpha):
        j = max(affected, key=lambda i: (counts[i], -i))
        counts[j] -= 1
    adjusted_time = float(t_total) - float(spec.time_cost)
    adjusted_cost = float(cost) - float(spec.bonus) + float(spec.punishment)
    return HeadcountVector(tuple(counts)), adjusted_time, adjusted_cost


@dataclass
class RestCounter:
    """Incremental tracker of consecutive rest days for one employee."""

    cap: int
    current: int = 0
    longest: int = 0

    def update(self, worked: bool) -> None:
        if worked:
            self.current = 0
        else:
            self.current += 1
            if self.current > self.longest:
                self.longest = self.current

    @property
    def exceeded(self) -> bool:
        return self.longest > self.cap


# ---------------------------------------------------------------------------
# string form


_PRECEDENCE = {Or: 1, And: 2, Not: 3, Atom: 3}


class _Parser:
    """Recursive-descent parser for the constraint grammar:

    expr  := term ('|' term)*
    term  := factor ('&' factor)*
    factor:= '!' factor | atom | '(' expr ')'
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Expr:
        expr = self._or()
        self._skip_ws()
        if self.pos != len(self.text):
            raise ParseError(
                f"unexpected {self.text[self.pos]!r} after a complete expression",
                offset=self.pos,
            )
        return expr

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> Optional[str]:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _or(self) -> Expr:
        expr = self._and()
        while self._peek() == "|":
            self.pos += 1
            expr = Or(expr, self._and())
        return expr

    def _and(self) -> Expr:
        expr = self._factor()
        while self._peek() == "&":
            self.pos += 1
            expr = And(expr, self._factor())
        return expr

    def _factor(self) -> Expr:
        ch = self._peek()
        if ch == "!":
            self.pos += 1
            return Not(self._factor())
        if ch == "(":
            self.pos += 1
            expr = self._or()
            if self._peek() != ")":
                raise ParseError("expected ')'", offset=self.pos)
            self.pos += 1
            return expr
        return self._atom()

    def _atom(self) -> Expr:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        token = self.text[start : self.pos]
        if not token:
            raise ParseError("expected a constraint atom, '!', or '('", offset=start)
        if token not in ATOM_CODES:
            raise ParseError(f"unknown constraint atom {token!r}", offset=start)
        return Atom(AtomicConstraint(ConstraintKind(token)))


def parse_constraint_string(text: str) -> Expr:
    """Parse ``"k1&k2|!(k5)"``-style strings.  Precedence: ``!`` over
    ``&`` over ``|``; parentheses group.  Offsets in errors are 0-based."""
    return _Parser(text).parse()


def format_expr(expr: Expr) -> str:
    """Canonical compact string; parsing it back yields the same tree."""

    def fmt(node: Expr) -> str:
        if isinstance(node, Atom):
            if node.constraint.parameterized:
                raise ConfigurationError(
                    "parameterized atoms (job subsets / counts) have no string form"
                )
            return node.constraint.kind.value
        if isinstance(node, Not):
            inner = fmt(node.operand)
            if isinstance(node.operand, (And, Or)):
                return f"!({inner})"
            return f"!{inner}"
        if isinstance(node, (And, Or)):
            op = "&" if isinstance(node, And) else "|"
            mine = _PRECEDENCE[type(node)]
            left = fmt(node.left)
            if _PRECEDENCE[type(node.left)] < mine:
                left = f"({left})"
            right = fmt(node.right)
            if _PRECEDENCE[type(node.right)] <= mine:
                right = f"({right})"
            return f"{left}{op}{right}"
        raise ConfigurationError(f"unknown expression node {type(node).__name__}")

    return fmt(expr)
