"""Multi-objective machinery against brute-force oracles."""

import itertools

import numpy as np
import pytest

from manpower import (
    Direction,
    EAConfig,
    HeadcountVector,
    Objective,
    ObjectiveBundle,
    ObjectiveKind,
    ParetoArchive,
    ScoredIndividual,
    StructuralError,
    conjunction,
    crowding,
    dominates,
    evaluate_bundle,
    hypervolume,
    non_dominated_sort,
    run_moea,
    violation_expr,
)
from manpower.instances import micro_instance, random_micro_instance


def brute_force_fronts(pop):
    """Peel non-dominated layers by direct pairwise comparison."""
    remaining = list(range(len(pop)))
    fronts = []
    while remaining:
        layer = [
            i
            for i in remaining
            if not any(dominates(pop[j], pop[i]) for j in remaining if j != i)
        ]
        fronts.append(sorted(layer))
        remaining = [i for i in remaining if i not in layer]
    return fronts


class TestDominance:
    def test_pareto_cases(self):
        assert dominates((1.0, 2.0), (2.0, 3.0))
        assert dominates((1.0, 3.0), (1.0, 4.0))
        assert not dominates((1.0, 2.0), (1.0, 2.0))
        assert not dominates((1.0, 4.0), (2.0, 3.0))
        assert not dominates((2.0, 3.0), (1.0, 4.0))

    def test_feasibility_rules(self):
        feas = ScoredIndividual(HeadcountVector((1,)), (5.0, 5.0), 0.0)
        bad = ScoredIndividual(HeadcountVector((2,)), (0.0, 0.0), 2.0)
        worse = ScoredIndividual(HeadcountVector((3,)), (0.0, 0.0), 3.0)
        assert dominates(feas, bad)
        assert not dominates(bad, feas)
        assert dominates(bad, worse)
        assert not dominates(worse, bad)

    def test_arity_mismatch_raises(self):
        with pytest.raises(StructuralError):
            dominates((1.0, 2.0), (1.0, 2.0, 3.0))


class TestSorting:
    def test_known_layers(self):
        pts = [(1.0, 1.0), (2.0, 2.0), (0.5, 3.0), (3.0, 0.5), (2.0, 3.0)]
        fronts = non_dominated_sort(pts)
        assert sorted(fronts[0]) == [0, 2, 3]
        assert sorted(fronts[1]) == [1]
        assert sorted(fronts[2]) == [4]

    def test_matches_brute_force_on_random_sets(self):
        rng = np.random.Generator(np.random.PCG64(31))
        for _ in range(100):
            n = int(rng.integers(1, 40))
            d = int(rng.integers(2, 4))
            pts = [tuple(float(x) for x in rng.integers(0, 8, size=d)) for _ in range(n)]
            got = [sorted(f) for f in non_dominated_sort(pts)]
            want = brute_force_fronts(pts)
            assert got == want

    def test_every_index_appears_once(self):
        rng = np.random.Generator(np.random.PCG64(8))
        pts = [tuple(float(x) for x in rng.random(3)) for _ in range(30)]
        fronts = non_dominated_sort(pts)
        flat = sorted(i for f in fronts for i in f)
        assert flat == list(range(30))


class TestCrowding:
    def test_boundaries_are_infinite(self):
        d = crowding([(0.0, 4.0), (1.0, 2.0), (2.0, 1.0), (4.0, 0.0)])
        assert d[0] == np.inf and d[3] == np.inf
        assert np.isfinite(d[1]) and np.isfinite(d[2])

    def test_interior_normalized_span(self):
        d = crowding([(0.0, 4.0), (1.0, 2.0), (4.0, 0.0)])
        # middle point: (4-0)/4 + (4-0)/4 = 2
        assert d[1] == pytest.approx(2.0)

    def test_pairs_and_singletons_infinite(self):
        assert all(np.isinf(crowding([(1.0, 1.0)])))
        assert all(np.isinf(crowding([(1.0, 1.0), (2.0, 0.0)])))

    def test_degenerate_axis_ignored(self):
        d = crowding([(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)])
        assert d[1] == pytest.approx(1.0)  # only the first axis spreads


class TestHypervolume:
    def test_staircase_2d(self):
        pts = [(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]
        assert hypervolume(pts, (4.0, 4.0)) == pytest.approx(6.0)

    def test_single_point_box(self):
        assert hypervolume([(1.0, 1.0, 1.0)], (3.0, 4.0, 5.0)) == pytest.approx(2 * 3 * 4)

    def test_dominated_points_add_nothing(self):
        base = hypervolume([(1.0, 1.0)], (5.0, 5.0))
        with_dup = hypervolume([(1.0, 1.0), (2.0, 2.0), (1.0, 1.0)], (5.0, 5.0))
        assert with_dup == pytest.approx(base)

    def test_points_outside_ref_ignored(self):
        assert hypervolume([(6.0, 1.0)], (5.0, 5.0)) == 0.0
        assert hypervolume([(5.0, 1.0)], (5.0, 5.0)) == 0.0

    def test_matches_grid_oracle_2d(self):
        rng = np.random.Generator(np.random.PCG64(17))
        for _ in range(30):
            pts = [tuple(float(v) for v in rng.integers(0, 10, size=2)) for _ in range(6)]
            ref = (10.0, 10.0)
            # integer grid: count unit cells dominated by some point
            cells = 0
            for x in range(10):
                for y in range(10):
                    if any(p[0] <= x and p[1] <= y for p in pts):
                        cells += 1
            assert hypervolume(pts, ref) == pytest.approx(float(cells))

    def test_matches_grid_oracle_3d(self):
        rng = np.random.Generator(np.random.PCG64(18))
        for _ in range(10):
            pts = [tuple(float(v) for v in rng.integers(0, 6, size=3)) for _ in range(5)]
            ref = (6.0, 6.0, 6.0)
            cells = sum(
                1
                for x in range(6)
                for y in range(6)
                for z in range(6)
                if any(p[0] <= x and p[1] <= y and p[2] <= z for p in pts)
            )
            assert hypervolume(pts, ref) == pytest.approx(float(cells))


class TestArchive:
    def test_keeps_only_non_dominated(self):
        a = ParetoArchive()
        assert a.offer(HeadcountVector((1,)), (2.0, 2.0), 0.0)
        assert a.offer(HeadcountVector((2,)), (1.0, 3.0), 0.0)
        assert not a.offer(HeadcountVector((3,)), (3.0, 3.0), 0.0)  # dominated
        assert a.offer(HeadcountVector((4,)), (1.0, 1.0), 0.0)  # dominates all
        assert [e.objectives for e in a.entries()] == [(1.0, 1.0)]

    def test_rejects_infeasible_and_duplicates(self):
        a = ParetoArchive()
        assert not a.offer(HeadcountVector((1,)), (0.0, 0.0), 1.0)
        assert a.offer(HeadcountVector((2,)), (1.0, 1.0), 0.0)
        assert not a.offer(HeadcountVector((2,)), (1.0, 1.0), 0.0)  # same counts

    def test_hypervolume_never_decreases(self):
        rng = np.random.Generator(np.random.PCG64(5))
        a = ParetoArchive()
        ref = (12.0, 12.0)
        last = 0.0
        for i in range(300):
            objs = tuple(float(v) for v in rng.integers(0, 10, size=2))
            a.offer(HeadcountVector((i,)), objs, 0.0)
            hv = hypervolume([e.objectives for e in a.entries()], ref)
            assert hv >= last - 1e-12
            last = hv


class TestRunMOEA:
    BUNDLE = ObjectiveBundle(
        (
            Objective(ObjectiveKind.TOTAL_SALARY, Direction.MINIMIZE),
            Objective(ObjectiveKind.TOTAL_TIME, Direction.MAXIMIZE),
        )
    )
    BASIC = conjunction("k1", "k2", "k3", "k4", "k5", "k6")

    def test_archive_entries_are_feasible_and_non_dominated(self):
        inst = micro_instance()
        res = run_moea(inst, self.BUNDLE, self.BASIC, EAConfig(population_size=30, generations=20, seed=0))
        assert len(res.archive) >= 1
        for e in res.archive:
            assert violation_expr(self.BASIC, None, e.counts, inst) == 0.0
            assert e.objectives == evaluate_bundle(self.BUNDLE, e.counts, None, inst)
        for a, b in itertools.permutations(res.archive, 2):
            assert not dominates(a.objectives, b.objectives)

    def test_recovers_exhaustive_front_on_micro(self):
        rng = np.random.Generator(np.random.PCG64(55))
        inst = random_micro_instance(rng)
        truth = set()
        feasible = []
        for combo in itertools.product(*[range(lo, hi + 1) for lo, hi in inst.headcount_bounds()]):
            hc = HeadcountVector(combo)
            if violation_expr(self.BASIC, None, hc, inst) == 0.0:
                feasible.append(evaluate_bundle(self.BUNDLE, hc, None, inst))
        for p in feasible:
            if not any(q != p and dominates(q, p) for q in feasible):
                truth.add(p)
        res = run_moea(inst, self.BUNDLE, self.BASIC, EAConfig(population_size=40, generations=30, seed=2))
        found = {e.objectives for e in res.archive}
        assert found == truth

    def test_seed_determinism(self):
        inst = micro_instance()
        cfg = EAConfig(population_size=24, generations=12, seed=9)
        a = run_moea(inst, self.BUNDLE, self.BASIC, cfg)
        b = run_moea(inst, self.BUNDLE, self.BASIC, cfg)
        assert [e.counts.counts for e in a.archive] == [e.counts.counts for e in b.archive]
        assert [p.best for p in a.trace.points] == [p.best for p in b.trace.points]

    def test_hypervolume_trace_monotone(self):
        inst = micro_instance()
        res = run_moea(inst, self.BUNDLE, self.BASIC, EAConfig(population_size=20, generations=15, seed=4))
        curve = [p.best for p in res.trace.points]
        assert all(b >= a - 1e-12 for a, b in zip(curve, curve[1:]))
