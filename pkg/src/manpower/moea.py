"""Elite multi-objective search (non-dominated sorting + crowding).

Individuals are ranked by constraint-domination: feasible beats
infeasible, less violation beats more, and among feasible candidates
ordinary Pareto dominance on the (min-oriented) objective vector
decides.  An external archive accumulates every feasible non-dominated
headcount vector ever seen, so its hypervolume can only grow.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constraints import Expr, violation_expr
from .domain import HeadcountVector, ProblemInstance
from .errors import StructuralError
from .evolution import (
    EAConfig,
    Genome,
    RunTrace,
    TracePoint,
    _crossover,
    _mutate,
    decode,
    random_genome,
)
from .objectives import ObjectiveBundle, evaluate_bundle


@dataclass(frozen=True)
class ScoredIndividual:
    """A candidate with its objective vector and total violation."""

    counts: HeadcountVector
    objectives: tuple[float, ...]
    violation: float = 0.0


def _unpack(x) -> tuple[float, tuple[float, ...]]:
    if isinstance(x, ScoredIndividual):
        return x.violation, x.objectives
    return 0.0, tuple(float(v) for v in x)


def dominates(a, b) -> bool:
    """Constraint-domination.  Accepts :class:`ScoredIndividual` or bare
    objective vectors (treated as feasible)."""
    va, fa = _unpack(a)
    vb, fb = _unpack(b)
    if len(fa) != len(fb):
        raise StructuralError(f"objective arity mismatch: {len(fa)} vs {len(fb)}")
    if va == 0.0 and vb > 0.0:
        return True
    if va > 0.0 and vb == 0.0:
        return False
    if va > 0.0 and vb > 0.0:
        return va < vb
    better_somewhere = False
    for x, y in zip(fa, fb):
        if x > y:
            return False
        if x < y:
            better_somewhere = True
    return better_somewhere


def non_dominated_sort(pop: Sequence) -> list[list[int]]:
    """Indices of ``pop`` split into fronts; front 0 is non-dominated."""
    n = len(pop)
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    count = [0] * n
    fronts: list[list[int]] = [[]]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if dominates(pop[i], pop[j]):
                dominated_by[i].append(j)
            elif dominates(pop[j], pop[i]):
                count[i] += 1
        if count[i] == 0:
            fronts[0].append(i)
    k = 0
    while fronts[k]:
        nxt: list[int] = []
        for i in fronts[k]:
            for j in dominated_by[i]:
                count[j] -= 1
                if count[j] == 0:
                    nxt.append(j)
        fronts.append(nxt)
        k += 1
    fronts.pop()
    return fronts


def crowding(objectives: Sequence[Sequence[float]]) -> np.ndarray:
    """Crowding distances for one front; boundary points get +inf."""
    n = len(objectives)
    dist = np.zeros(n)
    if n == 0:
        return dist
    objs = np.asarray(objectives, dtype=float)
    if n <= 2:
        dist[:] = np.inf
        return dist
    for m in range(objs.shape[1]):
        order = np.argsort(objs[:, m], kind="stable")
        lo, hi = objs[order[0], m], objs[order[-1], m]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if hi > lo:
            spread = hi - lo
            for pos in range(1, n - 1):
                i = order[pos]
                if np.isinf(dist[i]):
                    continue
                dist[i] += (objs[order[pos + 1], m] - objs[order[pos - 1], m]) / spread
    return dist


# ---------------------------------------------------------------------------
# archive


@dataclass(frozen=True)
class ArchiveEntry:
    counts: HeadcountVector
    objectives: tuple[float, ...]


class ParetoArchive:
    """Cumulative store of feasible non-dominated headcount vectors.

    Deduplicates by counts (objectives are a function of counts here),
    so re-encountered points are free.  Dominated entries are evicted;
    the archive's hypervolume never decreases.
    """

    def __init__(self):
        self._entries: list[ArchiveEntry] = []
        self._seen: set[tuple[int, ...]] = set()

    def offer(self, counts: HeadcountVector, objectives: tuple[float, ...], violation: float) -> bool:
        if violation > 0.0:
            return False
        key = counts.counts
        if key in self._seen:
            return False
        self._seen.add(key)
        for e in self._entries:
            if dominates(e.objectives, objectives) or e.objectives == objectives:
                return False
        self._entries = [e for e in self._entries if not dominates(objectives, e.objectives)]
        self._entries.append(ArchiveEntry(counts, objectives))
        return True

    def entries(self) -> tuple[ArchiveEntry, ...]:
        return tuple(sorted(self._entries, key=lambda e: e.objectives))

    def __len__(self) -> int:
        return len(self._entries)


def hypervolume(points: Sequence[Sequence[float]], ref: Sequence[float]) -> float:
    """Volume dominated by min-oriented ``points`` up to ``ref`` (the
    union of boxes [p, ref]); points not strictly below ``ref`` in every
    coordinate are ignored."""
    ref = tuple(float(r) for r in ref)
    pts = sorted(
        {
            tuple(float(v) for v in p)
            for p in points
            if len(p) == len(ref) and all(v < r for v, r in zip(p, ref))
        }
    )
    if not pts:
        return 0.0

    def volume(pts: list[tuple[float, ...]], ref: tuple[float, ...]) -> float:
        if len(ref) == 1:
            return ref[0] - min(p[0] for p in pts)
        pts = sorted(set(pts))  # ascending in the leading coordinate
        total = 0.0
        for i, p in enumerate(pts):
            upper = pts[i + 1][0] if i + 1 < len(pts) else ref[0]
            width = upper - p[0]
            if width > 0.0:
                total += width * volume([q[1:] for q in pts[: i + 1]], ref[1:])
        return total

    return volume(pts, ref)


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class MOEAResult:
    archive: tuple[ArchiveEntry, ...]
    trace: RunTrace
    evaluations: int
    seed: int
    reference_point: tuple[float, ...]


def run_moea(
    inst: ProblemInstance,
    bundle: ObjectiveBundle,
    expr: Expr,
    cfg: EAConfig,
) -> MOEAResult:
    """Evolve a population toward the feasible Pareto front of the
    bundled objectives under the constraint expression."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    bounds = inst.headcount_bounds()
    start = time.perf_counter()
    archive = ParetoArchive()
    evaluations = 0

    def assess(genome: Genome) -> ScoredIndividual:
        nonlocal evaluations
        evaluations += 1
        hc = decode(genome)
        objs = evaluate_bundle(bundle, hc, None, inst)
        violation = violation_expr(expr, None, hc, inst)
        archive.offer(hc, objs, violation)
        return ScoredIndividual(hc, objs, violation)

    population = [random_genome(rng, bounds, cfg.encoding) for _ in range(cfg.population_size)]
    scored = [assess(g) for g in population]

    # freeze the hypervolume reference after the first evaluation sweep
    worst = np.max([s.objectives for s in scored], axis=0)
    ref = tuple(float(w) + 1.0 for w in worst)

    def trace_point(gen: int) -> TracePoint:
        hv = hypervolume([e.objectives for e in archive.entries()], ref)
        return TracePoint(gen, hv, float(len(archive)), evaluations,
                          (time.perf_counter() - start) * 1e3)

    points = [trace_point(0)]

    for gen in range(1, cfg.generations + 1):
        ranks, crowd = _rank_and_crowd(scored)

        def pick() -> Genome:
            i, j = int(rng.integers(len(population))), int(rng.integers(len(population)))
            if ranks[i] != ranks[j]:
                return population[i] if ranks[i] < ranks[j] else population[j]
            return population[i] if crowd[i] >= crowd[j] else population[j]

        offspring: list[Genome] = []
        while len(offspring) < cfg.population_size:
            pa, pb = pick(), pick()
            if rng.random() < cfg.crossover_rate:
                pa, pb = _crossover(rng, pa, pb)
            offspring.append(_mutate(rng, pa, cfg.mutation_rate))
            if len(offspring) < cfg.population_size:
                offspring.append(_mutate(rng, pb, cfg.mutation_rate))
        scored_offspring = [assess(g) for g in offspring]

        pool = population + offspring
        pool_scored = scored + scored_offspring
        population, scored = _environmental_selection(pool, pool_scored, cfg.population_size)
        points.append(trace_point(gen))

    return MOEAResult(
        archive=archive.entries(),
        trace=RunTrace(tuple(points)),
        evaluations=evaluations,
        seed=cfg.seed,
        reference_point=ref,
    )


def _rank_and_crowd(scored: Sequence[ScoredIndividual]) -> tuple[np.ndarray, np.ndarray]:
    fronts = non_dominated_sort(scored)
    ranks = np.zeros(len(scored), dtype=np.int64)
    crowd = np.zeros(len(scored))
    for r, front in enumerate(fronts):
        dists = crowding([scored[i].objectives for i in front])
        for i, d in zip(front, dists):
            ranks[i] = r
            crowd[i] = d
    return ranks, crowd


def _environmental_selection(
    pool: list[Genome],
    pool_scored: list[ScoredIndividual],
    size: int,
) -> tuple[list[Genome], list[ScoredIndividual]]:
    """Keep the best ``size`` of parents+offspring: whole fronts while
    they fit, then the most isolated members of the first overflowing
    front."""
    fronts = non_dominated_sort(pool_scored)
    keep: list[int] = []
    for front in fronts:
        if len(keep) + len(front) <= size:
            keep.extend(front)
            continue
        dists = crowding([pool_scored[i].objectives for i in front])
        order = sorted(range(len(front)), key=lambda k: -dists[k])
        keep.extend(front[k] for k in order[: size - len(keep)])
        break
    return [pool[i] for i in keep], [pool_scored[i] for i in keep]
