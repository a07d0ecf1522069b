"""Tests for the rescue grid environment and its exact oracles.

The routing oracles are checked against brute-force enumeration over
permutations and partitions on small instances.
"""
import itertools
import json

import numpy as np
import pytest

from swarmplan.assign import Assignment, UNASSIGNED
from swarmplan.rescue import (
    GridState,
    RescueConfig,
    RescueEnv,
    RescueError,
    build_constraints,
    chebyshev,
    closest_baseline,
    dp_subset_paths,
    extract_features,
    low_level_move,
    mvr_exact,
    plan_policy,
    run_episode,
    spawn,
    step,
)

# Critical value of the chi-squared distribution with 255 degrees of
# freedom at p = 0.01 (Wilson-Hilferty approximation, cross-checked
# against standard tables).
CHI2_255_P01 = 310.46


def make_state(ambulances, victims, grid_size=16):
    return GridState(grid_size, list(ambulances),
                     [(x, y, False) for x, y in victims])


class TestSpawn:
    def test_reproducible_and_counts(self):
        cfg = RescueConfig(2, 4, seed=7)
        a, b = spawn(cfg), spawn(cfg)
        assert a == b
        assert a.n == 2 and a.m == 4
        assert not any(p for _, _, p in a.victims)

    def test_coordinates_on_grid(self):
        for s in range(50):
            st = spawn(RescueConfig(3, 5, seed=s))
            for x, y in st.ambulances:
                assert 0 <= x < 16 and 0 <= y < 16
            for x, y, _ in st.victims:
                assert 0 <= x < 16 and 0 <= y < 16

    def test_cell_occupancy_uniform(self):
        counts = np.zeros(256)
        for s in range(5000):
            st = spawn(RescueConfig(2, 4, seed=100000 + s))
            for x, y in st.ambulances:
                counts[x * 16 + y] += 1
            for x, y, _ in st.victims:
                counts[x * 16 + y] += 1
        expected = counts.sum() / 256
        chi2 = ((counts - expected) ** 2 / expected).sum()
        assert chi2 < CHI2_255_P01


class TestLowLevelMove:
    def test_diagonal(self):
        assert low_level_move((0, 0), (3, 5)) == (1, 1)

    def test_stay(self):
        assert low_level_move((4, 4), (4, 4)) == (0, 0)

    def test_reaches_in_chebyshev_steps(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            pos = tuple(rng.integers(0, 16, 2))
            target = tuple(rng.integers(0, 16, 2))
            d = chebyshev(pos, target)
            for _ in range(d):
                dx, dy = low_level_move(pos, target)
                pos = (pos[0] + dx, pos[1] + dy)
            assert pos == target


class TestStep:
    def test_arrival_pickup(self):
        st = make_state([(0, 1)], [(0, 2)])
        nxt, reward, done = step(st, Assignment(np.array([0])))
        assert nxt.ambulances == [(0, 2)]
        assert nxt.victims[0][2]
        assert reward == -0.01
        assert done

    def test_contingent_pickup(self):
        # Ambulance assigned to the far victim passes over the near one.
        st = make_state([(0, 0)], [(0, 1), (0, 2)])
        nxt, _, done = step(st, Assignment(np.array([1])))
        assert nxt.victims[0][2]  # swept en route
        assert not nxt.victims[1][2]
        assert not done

    def test_two_leg_episode_length(self):
        cfg = RescueConfig(1, 2, seed=0)
        st = make_state([(0, 0)], [(0, 3), (0, 5)])
        total = 0.0
        steps = 0
        done = False
        while not done:
            j = 0 if not st.victims[0][2] else 1
            st, r, done = step(st, Assignment(np.array([j])), cfg.max_steps)
            total += r
            steps += 1
        assert steps == 5
        assert abs(total + 0.05) < 1e-12

    def test_unassigned_stays(self):
        st = make_state([(3, 3)], [(0, 0)])
        nxt, _, _ = step(st, Assignment(np.array([UNASSIGNED])))
        assert nxt.ambulances == [(3, 3)]

    def test_target_picked_victim_is_legal(self):
        st = GridState(16, [(5, 5)], [(0, 0, True), (9, 9, False)])
        nxt, _, done = step(st, Assignment(np.array([0])))
        assert nxt.ambulances == [(4, 4)]
        assert not done

    def test_invalid_index_raises(self):
        st = make_state([(0, 0)], [(1, 1)])
        with pytest.raises(RescueError):
            step(st, Assignment(np.array([5])))
        with pytest.raises(RescueError):
            step(st, Assignment(np.array([0, 0])))

    def test_spawn_overlap_swept_first_step(self):
        st = make_state([(2, 2)], [(2, 2), (9, 9)])
        nxt, _, _ = step(st, Assignment(np.array([1])))
        assert nxt.victims[0][2]
        assert nxt.ambulances == [(3, 3)]

    def test_max_steps_cap(self):
        cfg = RescueConfig(1, 1, seed=0, max_steps=3)
        env = RescueEnv(cfg)
        env.state = make_state([(0, 0)], [(15, 15)])
        done = False
        info = {}
        while not done:
            _, _, done, info = env.step(Assignment(np.array([UNASSIGNED])))
        assert env.state.step_count == 3
        assert info["capped"]

    def test_picked_flags_monotone(self):
        st = spawn(RescueConfig(2, 4, seed=3))
        prev_picked = [False] * st.m
        done = False
        while not done:
            st, _, done = step(st, closest_baseline(st))
            picked = [p for _, _, p in st.victims]
            assert all(q or not p for p, q in zip(prev_picked, picked))
            prev_picked = picked


class TestConstraintsAndFeatures:
    def test_fresh_constraints(self):
        st = spawn(RescueConfig(2, 4, seed=1))
        cons = build_constraints(st)
        np.testing.assert_array_equal(cons.mu, np.ones((2, 4)))
        np.testing.assert_array_equal(cons.u, np.ones(4))

    def test_picked_victim_zero_capacity(self):
        st = GridState(16, [(0, 0)], [(1, 1, True), (2, 2, False)])
        np.testing.assert_array_equal(build_constraints(st).u, [0.0, 1.0])

    def test_features(self):
        st = GridState(16, [(15, 0)], [(3, 3, True)])
        agents, tasks = extract_features(st)
        np.testing.assert_allclose(agents, [[1.0, 0.0]])
        np.testing.assert_allclose(tasks, [[0.2, 0.2, 1.0]])


class TestEpisodes:
    def test_determinism(self):
        a = run_episode(RescueConfig(2, 4, seed=11), closest_baseline)
        b = run_episode(RescueConfig(2, 4, seed=11), closest_baseline)
        assert a == b

    def test_return_couples_to_length(self):
        steps, total, _ = run_episode(RescueConfig(2, 4, seed=4), closest_baseline)
        assert abs(total - (-0.01 * steps)) < 1e-9

    def test_baseline_terminates_under_cap(self):
        for s in range(2000):
            _, _, capped = run_episode(RescueConfig(2, 4, seed=s), closest_baseline)
            assert not capped

    def test_trace_export(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        steps, _, _ = run_episode(RescueConfig(2, 4, seed=9), closest_baseline,
                                  trace_path=path)
        records = [json.loads(line) for line in path.read_text().splitlines()]
        assert len(records) == steps
        assert records[0]["step"] == 0
        assert set(records[0]) == {"step", "ambulances", "victims", "assignment", "reward"}


class TestClosestBaseline:
    def test_nearest(self):
        st = make_state([(0, 0)], [(0, 2), (5, 5)])
        assert closest_baseline(st).target[0] == 0

    def test_tie_lowest_index(self):
        st = make_state([(0, 0)], [(2, 0), (0, 2)])
        assert closest_baseline(st).target[0] == 0

    def test_ignores_picked(self):
        st = GridState(16, [(0, 0)], [(0, 1, True), (5, 5, False)])
        assert closest_baseline(st).target[0] == 1

    def test_all_picked_unassigned(self):
        st = GridState(16, [(0, 0)], [(0, 1, True)])
        assert closest_baseline(st).target[0] == UNASSIGNED


def brute_path(positions, start_v):
    """Min path length visiting all positions starting at start_v."""
    rest = [k for k in range(len(positions)) if k != start_v]
    best = np.inf
    for perm in itertools.permutations(rest):
        cost = 0
        cur = start_v
        for v in perm:
            cost += chebyshev(positions[cur], positions[v])
            cur = v
        best = min(best, cost)
    return best


def brute_mvr(ambulances, victims):
    """Min makespan over all victim partitions and visit orders."""
    n, m = len(ambulances), len(victims)
    best = np.inf
    for labels in itertools.product(range(n), repeat=m):
        worst = 0
        for i in range(n):
            mine = [v for v in range(m) if labels[v] == i]
            if not mine:
                continue
            cost = min(
                chebyshev(ambulances[i], victims[s])
                + brute_path([victims[v] for v in mine], k)
                for k, s in enumerate(mine)
            )
            worst = max(worst, cost)
        best = min(best, worst)
    return best


class TestSubsetPaths:
    def test_line_sweep(self):
        paths = dp_subset_paths([(0, 0), (3, 0), (5, 0)])
        full = (1 << 3) - 1
        assert paths.table[full, 0] == 5

    def test_single_victim(self):
        paths = dp_subset_paths([(7, 7)])
        assert paths.table[1, 0] == 0

    def test_singleton_zero(self):
        paths = dp_subset_paths([(1, 2), (3, 4), (5, 6)])
        for v in range(3):
            assert paths.table[1 << v, v] == 0

    def test_matches_permutation_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            m = int(rng.integers(2, 7))
            positions = [tuple(rng.integers(0, 16, 2)) for _ in range(m)]
            paths = dp_subset_paths(positions)
            full = (1 << m) - 1
            for v in range(m):
                assert paths.table[full, v] == brute_path(positions, v)

    def test_monotone_in_subset(self):
        rng = np.random.default_rng(18)
        positions = [tuple(rng.integers(0, 16, 2)) for _ in range(5)]
        paths = dp_subset_paths(positions)
        for mask in range(1, 1 << 5):
            for v in range(5):
                if mask & (1 << v):
                    for w in range(5):
                        if not mask & (1 << w):
                            assert (paths.table[mask | (1 << w), v]
                                    >= paths.table[mask, v])


class TestMvrExact:
    def test_two_leg_example(self):
        st = make_state([(0, 0)], [(0, 3), (0, 5)])
        assert mvr_exact(st).makespan == 5

    def test_opposite_corners(self):
        st = make_state([(0, 0), (15, 15)], [(1, 1), (14, 14)])
        assert mvr_exact(st).makespan == 1

    def test_routes_partition_victims(self):
        for s in range(30):
            st = spawn(RescueConfig(2, 4, seed=s))
            plan = mvr_exact(st)
            flat = sorted(j for r in plan.routes for j in r)
            assert flat == list(range(st.m))

    def test_matches_partition_oracle(self):
        rng = np.random.default_rng(19)
        for _ in range(40):
            n = int(rng.integers(1, 3))
            m = int(rng.integers(1, 6))
            ambulances = [tuple(rng.integers(0, 16, 2)) for _ in range(n)]
            victims = [tuple(rng.integers(0, 16, 2)) for _ in range(m)]
            st = make_state(ambulances, victims)
            assert mvr_exact(st).makespan == brute_mvr(ambulances, victims)

    def test_dominates_baseline(self):
        for s in range(100):
            cfg = RescueConfig(2, 4, seed=s)
            plan = mvr_exact(spawn(cfg))
            length, _, _ = run_episode(cfg, closest_baseline)
            assert plan.makespan <= length

    def test_execution_takes_exactly_makespan(self):
        for s in range(100):
            cfg = RescueConfig(3, 6, seed=s)
            plan = mvr_exact(spawn(cfg))
            length, _, capped = run_episode(cfg, plan_policy(plan))
            assert not capped
            assert length == max(plan.makespan, 1)

    def test_skips_picked_victims(self):
        st = GridState(16, [(0, 0)], [(5, 5, True), (0, 2, False)])
        plan = mvr_exact(st)
        assert plan.makespan == 2
        assert plan.routes == [[1]]

    def test_budget_guard(self):
        st = make_state([(0, 0)] * 9, [(1, 1)])
        with pytest.raises(RescueError):
            mvr_exact(st)
        st = make_state([(0, 0)], [(i, 0) for i in range(16)])
        with pytest.raises(RescueError):
            mvr_exact(st)
