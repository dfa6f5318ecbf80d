"""Core data model: jobs, problem instances, and the attendance solution space.

A scheduling horizon is a run of days, each split into four shift slots in
the fixed order (MOR, AFT, EVN, MID).  The solution space is a binary
tensor indexed (employee, shift slot, job): entry 1 means the employee
attends that slot on that job.  Every employee belongs to exactly one job
channel, so slices along the job axis ("channel matrices") carry all the
information and can be recombined losslessly.

In single-shift mode attendance is decided per day: the four slots of a
day carry the same bit.  In multi-shift mode each slot is independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import StructuralError

SHIFT_NAMES = ("MOR", "AFT", "EVN", "MID")
SLOTS_PER_DAY = 4

# Default slot durations partition a 20-hour operating day; overridable
# per job.
DEFAULT_SHIFT_HOURS = (4.0, 4.0, 4.0, 8.0)


def _as_float4(values: Sequence[float], what: str) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if len(out) != SLOTS_PER_DAY:
        raise ValueError(f"{what} must have {SLOTS_PER_DAY} entries, got {len(out)}")
    if any(v < 0 for v in out):
        raise ValueError(f"{what} must be nonnegative")
    return out


@dataclass(frozen=True)
class Job:
    """One job type with its per-slot wages, per-slot durations, and
    headcount bounds."""

    code: str
    name: str
    wage_per_shift: tuple[float, ...]
    headcount_min: int
    headcount_max: int
    shift_hours: tuple[float, ...] = DEFAULT_SHIFT_HOURS

    def __post_init__(self):
        object.__setattr__(self, "wage_per_shift", _as_float4(self.wage_per_shift, "wage_per_shift"))
        object.__setattr__(self, "shift_hours", _as_float4(self.shift_hours, "shift_hours"))
        if not self.code:
            raise ValueError("job code must be nonempty")
        if self.headcount_min < 0:
            raise ValueError(f"job {self.code}: headcount_min must be nonnegative")
        if self.headcount_max < 1:
            raise ValueError(f"job {self.code}: headcount_max must be positive")
        if self.headcount_min > self.headcount_max:
            raise ValueError(f"job {self.code}: headcount_min > headcount_max")
        if not any(h > 0 for h in self.shift_hours):
            raise ValueError(f"job {self.code}: all shift hours are zero")

    @property
    def daily_hours(self) -> float:
        return sum(self.shift_hours)

    @property
    def daily_wage(self) -> float:
        """Wage of a full attended day (sum of the four per-slot wages)."""
        return sum(self.wage_per_shift)


@dataclass(frozen=True)
class EmergencySpec:
    """Parameters of an urgent-task withdrawal: ``alpha`` employees are
    pulled from work, costing ``time_cost`` hours, with a bonus paid and a
    punishment charged on the wage bill.  ``jobs`` restricts which job
    codes supply the withdrawn staff (None = any job)."""

    alpha: int
    time_cost: float
    bonus: float
    punishment: float
    daily_probability: float = 0.0
    jobs: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError("alpha must be a positive integer")
        if self.time_cost < 0 or self.bonus < 0 or self.punishment < 0:
            raise ValueError("emergency costs must be nonnegative")
        if not 0.0 <= self.daily_probability <= 1.0:
            raise ValueError("daily_probability must be in [0, 1]")
        if self.jobs is not None:
            object.__setattr__(self, "jobs", tuple(self.jobs))


@dataclass(frozen=True)
class ProblemInstance:
    """Full parameterization of one scheduling problem."""

    jobs: tuple[Job, ...]
    horizon_days: int
    max_total_staff: int
    work_time_bounds: tuple[tuple[float, float], ...]
    salary_bounds: tuple[float, float]
    rest_cap: int
    emergency: EmergencySpec | None = None
    multi_shift: bool = False

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        object.__setattr__(
            self, "work_time_bounds", tuple((float(a), float(b)) for a, b in self.work_time_bounds)
        )
        object.__setattr__(self, "salary_bounds", tuple(float(x) for x in self.salary_bounds))
        if not self.jobs:
            raise ValueError("instance needs at least one job")
        if self.horizon_days < 1:
            raise ValueError("horizon_days must be positive")
        if self.max_total_staff < 1:
            raise ValueError("max_total_staff must be positive")
        if self.rest_cap < 0:
            raise ValueError("rest_cap must be nonnegative")
        if len(self.work_time_bounds) != len(self.jobs):
            raise ValueError("work_time_bounds must have one (low, high) pair per job")
        for job, (lo, hi) in zip(self.jobs, self.work_time_bounds):
            if lo > hi:
                raise ValueError(f"job {job.code}: work time lower bound exceeds upper bound")
        lo, hi = self.salary_bounds
        if lo > hi:
            raise ValueError("salary lower bound exceeds upper bound")
        if sum(j.headcount_min for j in self.jobs) > self.max_total_staff:
            raise ValueError("sum of job headcount minimums exceeds max_total_staff")
        codes = [j.code for j in self.jobs]
        if len(set(codes)) != len(codes):
            raise ValueError("duplicate job codes")
        if self.emergency is not None:
            if self.emergency.alpha > self.max_total_staff:
                raise ValueError("emergency alpha exceeds max_total_staff")
            if self.emergency.jobs is not None:
                unknown = set(self.emergency.jobs) - set(codes)
                if unknown:
                    raise ValueError(f"emergency references unknown job codes {sorted(unknown)}")

    @property
    def n_jobs(self) -> int:
        return len(self.jobs)

    @property
    def slots(self) -> int:
        return SLOTS_PER_DAY * self.horizon_days

    def job_index(self, code: str) -> int:
        for i, job in enumerate(self.jobs):
            if job.code == code:
                return i
        raise KeyError(f"unknown job code {code!r}")

    def headcount_bounds(self) -> tuple[tuple[int, int], ...]:
        return tuple((j.headcount_min, j.headcount_max) for j in self.jobs)


@dataclass(frozen=True)
class HeadcountVector:
    """Number of employees allocated to each job, in job order."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts):
            raise ValueError("headcounts must be nonnegative")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.counts)


def employee_jobs(counts: HeadcountVector | Sequence[int]) -> np.ndarray:
    """Global employee-index -> job-index map.

    Employees are identified by (job, ordinal within job); the global
    numbering concatenates jobs in order, so job 0's employees come first.
    """
    c = counts.counts if isinstance(counts, HeadcountVector) else tuple(counts)
    return np.repeat(np.arange(len(c), dtype=np.int64), c)


@dataclass(frozen=True, eq=False)
class AttendanceTensor:
    """Binary solution-space tensor, shape (employees, slots, jobs).

    ``job_of_employee`` maps each employee row to its single job channel;
    entries outside that channel must be zero (one job per employee).
    Immutable: the backing arrays are marked read-only.
    """

    entries: np.ndarray
    job_of_employee: np.ndarray

    def __post_init__(self):
        entries = np.ascontiguousarray(self.entries, dtype=np.uint8)
        jobs = np.ascontiguousarray(self.job_of_employee, dtype=np.int64)
        if entries.ndim != 3:
            raise StructuralError(f"entries must be 3-D, got shape {entries.shape}")
        n_emp, slots, n_jobs = entries.shape
        if slots % SLOTS_PER_DAY != 0:
            raise StructuralError(f"slot axis length {slots} is not a multiple of {SLOTS_PER_DAY}")
        if jobs.shape != (n_emp,):
            raise StructuralError("job_of_employee must have one entry per employee")
        if n_emp and (jobs.min() < 0 or (n_jobs and jobs.max() >= n_jobs)):
            raise StructuralError("job_of_employee indices out of range")
        if entries.size and entries.max() > 1:
            raise StructuralError("entries must be binary")
        if n_emp:
            off = entries.copy()
            off[np.arange(n_emp), :, jobs] = 0
            if off.any():
                raise StructuralError("attendance outside an employee's own job channel")
        entries.flags.writeable = False
        jobs.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "job_of_employee", jobs)

    # -- construction -------------------------------------------------

    @classmethod
    def zeros(cls, counts: HeadcountVector | Sequence[int], days: int, n_jobs: int | None = None) -> "AttendanceTensor":
        jobs = employee_jobs(counts)
        k = n_jobs if n_jobs is not None else (len(counts.counts) if isinstance(counts, HeadcountVector) else len(counts))
        return cls(np.zeros((len(jobs), SLOTS_PER_DAY * days, k), dtype=np.uint8), jobs)

    @classmethod
    def from_day_attendance(cls, day_attendance: np.ndarray, job_of_employee: Sequence[int], n_jobs: int) -> "AttendanceTensor":
        """Build a single-shift tensor from a per-day bit matrix
        (employees x days); each day bit is copied into all four slots."""
        day = np.asarray(day_attendance, dtype=np.uint8)
        if day.ndim != 2:
            raise StructuralError("day_attendance must be 2-D (employees x days)")
        jobs = np.asarray(job_of_employee, dtype=np.int64)
        n_emp, days = day.shape
        slot = np.repeat(day, SLOTS_PER_DAY, axis=1)
        entries = np.zeros((n_emp, SLOTS_PER_DAY * days, n_jobs), dtype=np.uint8)
        if n_emp:
            entries[np.arange(n_emp), :, jobs] = slot
        return cls(entries, jobs)

    @classmethod
    def from_slot_attendance(cls, slot_attendance: np.ndarray, job_of_employee: Sequence[int], n_jobs: int) -> "AttendanceTensor":
        """Build a tensor from a per-slot bit matrix (employees x slots)."""
        slot = np.asarray(slot_attendance, dtype=np.uint8)
        if slot.ndim != 2:
            raise StructuralError("slot_attendance must be 2-D (employees x slots)")
        jobs = np.asarray(job_of_employee, dtype=np.int64)
        n_emp = slot.shape[0]
        entries = np.zeros((n_emp, slot.shape[1], n_jobs), dtype=np.uint8)
        if n_emp:
            entries[np.arange(n_emp), :, jobs] = slot
        return cls(entries, jobs)

    # -- views ---------------------------------------------------------

    @property
    def n_employees(self) -> int:
        return self.entries.shape[0]

    @property
    def days(self) -> int:
        return self.entries.shape[1] // SLOTS_PER_DAY

    @property
    def n_jobs(self) -> int:
        return self.entries.shape[2]

    def slot_attendance(self) -> np.ndarray:
        """Each employee's own-channel bits, shape (employees, slots)."""
        if not self.n_employees:
            return np.zeros((0, self.entries.shape[1]), dtype=np.uint8)
        return self.entries[np.arange(self.n_employees), :, self.job_of_employee]

    def day_slots(self) -> np.ndarray:
        """Own-channel bits reshaped to (employees, days, 4)."""
        return self.slot_attendance().reshape(self.n_employees, self.days, SLOTS_PER_DAY)

    def day_attendance(self) -> np.ndarray:
        """1 where the employee attends at least one slot of the day."""
        return (self.day_slots().sum(axis=2) > 0).astype(np.uint8)

    def rest_counts(self) -> np.ndarray:
        """Per-employee count of days with no attended slot."""
        return self.days - self.day_attendance().sum(axis=1)

    def is_single_shift_consistent(self) -> bool:
        ds = self.day_slots()
        return bool(np.all(ds == ds[:, :, :1]))

    def headcounts(self) -> HeadcountVector:
        """Allocated employees per job (rows mapped to each channel)."""
        return HeadcountVector(tuple(int(x) for x in np.bincount(self.job_of_employee, minlength=self.n_jobs)))

    def validate(self, inst: ProblemInstance) -> None:
        """Check dimensional and mode consistency against an instance."""
        if self.days != inst.horizon_days:
            raise StructuralError(f"tensor spans {self.days} days, instance {inst.horizon_days}")
        if self.n_jobs != inst.n_jobs:
            raise StructuralError(f"tensor has {self.n_jobs} job channels, instance {inst.n_jobs}")
        if not inst.multi_shift and not self.is_single_shift_consistent():
            raise StructuralError("slot bits vary within a day in single-shift mode")

    def __eq__(self, other) -> bool:
        if not isinstance(other, AttendanceTensor):
            return NotImplemented
        return np.array_equal(self.entries, other.entries) and np.array_equal(
            self.job_of_employee, other.job_of_employee
        )


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """One job's slice of the tensor: rows are employees, columns are
    shift slots (working time)."""

    job: int
    matrix: np.ndarray
    job_of_employee: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.uint8)
        if m.ndim != 2:
            raise StructuralError("channel matrix must be 2-D")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "job_of_employee", np.asarray(self.job_of_employee, dtype=np.int64))


def separate_channels(tensor: AttendanceTensor) -> list[ChannelMatrix]:
    """Split the tensor along the job axis, one matrix per job."""
    return [
        ChannelMatrix(j, tensor.entries[:, :, j], tensor.job_of_employee)
        for j in range(tensor.n_jobs)
    ]


def combine_channels(mats: Iterable[ChannelMatrix]) -> AttendanceTensor:
    """Reassemble channel matrices into a tensor; exact inverse of
    :func:`separate_channels`."""
    mats = list(mats)
    if not mats:
        raise StructuralError("no channel matrices to combine")
    shape = mats[0].matrix.shape
    jobs_map = mats[0].job_of_employee
    for m in mats[1:]:
        if m.matrix.shape != shape:
            raise StructuralError(f"ragged channel matrices: {m.matrix.shape} vs {shape}")
        if not np.array_equal(m.job_of_employee, jobs_map):
            raise StructuralError("channel matrices disagree on the employee-job map")
    indices = sorted(m.job for m in mats)
    if indices != list(range(len(mats))):
        raise StructuralError(f"channel indices must be 0..{len(mats) - 1}, got {indices}")
    entries = np.zeros((shape[0], shape[1], len(mats)), dtype=np.uint8)
    for m in mats:
        entries[:, :, m.job] = m.matrix
    return AttendanceTensor(entries, jobs_map)


def daily_work_hours(job: Job) -> float:
    """Hours of one fully attended day: the sum of the four slot durations."""
    return float(sum(job.shift_hours))


def total_work_time(tensor: AttendanceTensor, inst: ProblemInstance) -> float:
    """Total hours worked over the horizon.

    Each attended slot contributes that slot's duration for the
    employee's job; in single-shift mode (all four slot bits equal) this
    reduces to attended-days times the job's daily hours.
    """
    if not tensor.n_employees:
        return 0.0
    durations = np.array([j.shift_hours for j in inst.jobs], dtype=float)
    per_emp = durations[tensor.job_of_employee]  # (employees, 4)
    return float((tensor.day_slots() * per_emp[:, None, :]).sum())


def full_attendance(counts: HeadcountVector | Sequence[int], inst: ProblemInstance) -> AttendanceTensor:
    """Tensor in which every allocated employee attends every slot."""
    jobs = employee_jobs(counts)
    day = np.ones((len(jobs), inst.horizon_days), dtype=np.uint8)
    return AttendanceTensor.from_day_attendance(day, jobs, inst.n_jobs)
