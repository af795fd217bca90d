"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every expected value here is pinned: closure verdicts must be Ok with zero
counterexamples, exact thresholds must equal the closed form exactly (integer
equality, no tolerance), and the randomized-match criteria demand zero
violations over their full sample sizes.  Run with `pytest tests/test_acceptance.py -v -s`.
"""

import math
import random

import pytest

from revspy.cycle_strategy import UnicyclicSpyStrategy
from revspy.engine import GameConfig, Team, play_match
from revspy.families import (
    all_trees_up_to,
    cycle_graph,
    disjoint_union,
    nonisomorphic_trees,
    path_graph,
    random_tree,
    unicyclic_graphs,
)
from revspy.graphs import classify, decompose_unicyclic, find_cycle
from revspy.rev_strategy import LongCycleRevStrategy, RandomRevStrategy, RandomSpyStrategy
from revspy.solver import sigma_exact, sigma_formula, solve_safety, trivial_bounds, verify_strategy
from revspy.tree_strategy import TreeSpyStrategy


def report(criterion: int, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
    assert passed, detail


class TestCriterion1:
    def test_tree_strategy_closure(self):
        """Trees with <= 6 vertices, m in {2,3}, r <= 6, s = floor(r/m): all Ok."""
        checked = 0
        for g in all_trees_up_to(6):
            for m in (2, 3):
                for r in range(1, 7):
                    res = verify_strategy(g, GameConfig(m=m, r=r, s=r // m), TreeSpyStrategy)
                    assert res.ok, f"counterexample on n={g.n} edges={g.edges()} m={m} r={r}"
                    checked += 1
        report(1, True, f"tree strategy Ok on all {checked} (tree, m, r) instances")


class TestCriterion2:
    def test_cycle_follower_closure_with_displacement(self):
        """C3..C6, m in {2,3}, r <= 6, s = ceil(r/m): Ok, displacement <= 1."""
        seen = {"max": 0}

        class Checked(UnicyclicSpyStrategy):
            def respond(self, pos):
                out = super().respond(pos)
                seen["max"] = max(seen["max"], self.last_max_displacement)
                assert self.last_max_displacement <= 1
                return out

        checked = 0
        for n in (3, 4, 5, 6):
            g = cycle_graph(n)
            for m in (2, 3):
                for r in range(1, 7):
                    res = verify_strategy(g, GameConfig(m=m, r=r, s=-(-r // m)), Checked)
                    assert res.ok, f"counterexample on C{n} m={m} r={r}"
                    checked += 1
        report(2, seen["max"] <= 1, f"follower Ok on {checked} cycle instances, max displacement {seen['max']}")


class TestCriterion3:
    def test_cycle_characterization(self):
        """sigma_exact == sigma_formula on cycles l in 3..6, m=2, r in {3,5,7}."""
        agree = 0
        for length in (3, 4, 5, 6):
            g = cycle_graph(length)
            for r in (3, 5, 7):
                if r > 2 * length:
                    continue
                exact = sigma_exact(g, 2, r).sigma
                formula = sigma_formula(g, 2, r).sigma
                assert exact == formula, f"C{length} r={r}: exact {exact} != formula {formula}"
                agree += 1
        assert sigma_exact(cycle_graph(5), 2, 7).sigma == 3
        report(3, True, f"{agree} cycle instances agree; sigma(C5,2,7)=3 exactly")


class TestCriterion4:
    def test_c5_plus_p2_threshold(self):
        g = disjoint_union(cycle_graph(5), path_graph(2))
        res = sigma_exact(g, 2, 7)
        assert res.sigma == 4, f"sigma(C5+P2,2,7) = {res.sigma}, want 4"
        report(4, True, "sigma(C5 + P2, 2, 7) = 4 exactly")

    def test_composite_large_mode_closures(self):
        """Triangle+pendant and C4+pendant families (n <= 6), s = ceil(r/m)."""
        graphs = []
        for length in (3, 4):
            for t in (1, 2):
                if length + t <= 6:
                    graphs.extend(unicyclic_graphs(length, t))
        checked = 0
        for g in graphs:
            for r in range(1, 7):
                res = verify_strategy(g, GameConfig(m=2, r=r, s=-(-r // 2)), UnicyclicSpyStrategy)
                assert res.ok, f"counterexample on edges={g.edges()} r={r}"
                checked += 1
        report(4, True, f"composite Large mode Ok on {checked} instances over {len(graphs)} graphs")


class TestCriterion5:
    def test_unicyclic_boundary_sweep(self):
        """Exact threshold matches the l <= max(floor(r/m)-t+2, 3) boundary."""
        m = 2
        rows = []
        instances = []
        for length in (3, 4, 5):
            for t in (0, 1, 2):
                instances.extend(unicyclic_graphs(length, t))
        instances.append(disjoint_union(cycle_graph(5), path_graph(2)))
        instances.append(disjoint_union(cycle_graph(4), path_graph(2)))
        disagreements = 0
        for g in instances:
            length = len(find_cycle(g))
            t = g.n - length
            for r in (1, 3, 5, 7):
                if r > m * g.n or r % m == 0:
                    continue
                expected = r // m if (length <= max(r // m - t + 2, 3) or r < m) else -(-r // m)
                exact = sigma_exact(g, m, r).sigma
                rows.append((g.edges(), r, exact, expected))
                if exact != expected:
                    disagreements += 1
        assert disagreements == 0, f"boundary disagreements: {[x for x in rows if x[2] != x[3]]}"
        report(5, True, f"boundary verdicts match on all {len(rows)} sweep rows")


class TestCriterion6:
    def test_distraction_halving_thousand_matches(self):
        """Halving and spell-length bounds over 1000 randomized long-cycle matches."""
        rng = random.Random(2026)
        halvings = 0
        spells = 0
        for match in range(1000):
            m = rng.choice([2, 3, 4, 5])
            s = rng.choice([1, 2, 3])
            length = s + 3 + rng.randrange(3)
            g = cycle_graph(length)
            cfg = GameConfig(m=m, r=s * m + 1, s=s)
            rev = LongCycleRevStrategy()
            play_match(g, cfg, rev, RandomSpyStrategy(rng.randrange(10**9)), max_rounds=25)
            for before, after in rev.halving_log:
                assert after <= -(-before // 2), f"halving violated: {before} -> {after}"
                halvings += 1
            for spell in rev.distract_spells:
                assert spell <= math.ceil(math.log2(m)), f"distraction ran {spell} rounds at m={m}"
                spells += 1
        report(6, True, f"1000 matches: {halvings} halving checks, {spells} spells, zero violations")


class TestCriterion7:
    def test_tree_invariants_thousand_matches(self):
        """Placement equations hold after every spy action; transcripts replay."""

        checks = {"count": 0}

        class Checked(TreeSpyStrategy):
            def place(self, g, cfg, observed):
                out = super().place(g, cfg, observed)
                self.invariants_ok()
                checks["count"] += 1
                return out

            def respond(self, pos):
                out = super().respond(pos)
                self.invariants_ok()
                checks["count"] += 1
                return out

        rng = random.Random(77)
        for match in range(1000):
            n = rng.randrange(2, 8)
            g = random_tree(n, rng)
            m = rng.choice([2, 3])
            r = rng.randrange(1, 7)
            out, tr = play_match(
                g, GameConfig(m=m, r=r, s=r // m), RandomRevStrategy(rng.randrange(10**9)),
                Checked(), max_rounds=15,
            )
            assert out.winner is Team.SPIES
            assert tr.replay(g)
        report(7, True, f"1000 tree matches: {checks['count']} invariant checkpoints, all replays valid")

    def test_unicyclic_cycle_condition_thousand_matches(self):
        """Large-mode internal ledgers stay consistent; transcripts replay."""
        rng = random.Random(78)
        pool = []
        for length in (3, 4, 5):
            for t in (0, 1, 2):
                pool.extend(unicyclic_graphs(length, t))
        for match in range(1000):
            g = rng.choice(pool)
            m = rng.choice([2, 3])
            r = rng.randrange(1, 7)
            spy = UnicyclicSpyStrategy()
            # Large-mode ledgers assert the cycle condition after every round;
            # any breakage raises out of play_match
            out, tr = play_match(
                g, GameConfig(m=m, r=r, s=-(-r // m)), RandomRevStrategy(rng.randrange(10**9)),
                spy, max_rounds=15,
            )
            assert out.winner is Team.SPIES
            if spy.mode == "Large" and spy.units is not None:
                assert len(spy.units.slots) == m * spy.units.spy_count
            assert tr.replay(g)
        report(7, True, "1000 unicyclic Large-mode matches: cycle condition held, replays valid")


class TestCriterion8:
    def test_trivial_bounds_and_monotonicity(self):
        """Exact thresholds inside the trivial bounds; spy wins monotone in s."""
        instances = [
            (cycle_graph(4), 2, 5),
            (cycle_graph(5), 2, 7),
            (cycle_graph(5), 3, 5),
            (unicyclic_graphs(3, 1)[0], 2, 3),
            (unicyclic_graphs(4, 1)[0], 2, 5),
            (nonisomorphic_trees(5)[1], 2, 4),
        ]
        bound_checks = 0
        for g, m, r in instances:
            lo, hi = trivial_bounds(g, m, r)
            res = sigma_exact(g, m, r)
            assert lo <= res.sigma <= hi, f"sigma escaped bounds on {g.edges()}"
            bound_checks += 1
            winners = [solve_safety(g, GameConfig(m=m, r=r, s=s)).winner for s in range(0, hi + 1)]
            for a, b in zip(winners, winners[1:]):
                assert not (a is Team.SPIES and b is Team.REVOLUTIONARIES), (
                    f"monotonicity flip on {g.edges()} m={m} r={r}: {winners}"
                )
        report(8, True, f"{bound_checks} instances inside trivial bounds, all probe sequences monotone")
