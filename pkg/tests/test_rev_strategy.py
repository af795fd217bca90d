import math
import random

import pytest

from revspy.engine import GameConfig, Position, Team, play_match
from revspy.graphs import Graph
from revspy.rev_strategy import (
    FloodRevStrategy,
    LongCycleRevStrategy,
    PreconditionViolated,
    RandomSpyStrategy,
    UnicyclicRevStrategy,
    flood_placement,
)
from revspy.solver import PolicySpyStrategy, solve_safety
from revspy.cycle_strategy import UnicyclicSpyStrategy

from conftest import cycle, path


class TestFlood:
    def test_three_meetings(self):
        assert flood_placement(path(4), 2, 6) == (2, 2, 2, 0)

    def test_capped_by_vertices(self):
        assert flood_placement(path(3), 2, 7) == (3, 2, 2)

    def test_below_meeting_size(self):
        assert flood_placement(path(3), 2, 1) == (1, 0, 0)


class TestLongCycleScript:
    def test_preconditions(self):
        with pytest.raises(PreconditionViolated):
            LongCycleRevStrategy().place(path(4), GameConfig(m=2, r=5, s=2), None)
        with pytest.raises(PreconditionViolated):
            LongCycleRevStrategy().place(cycle(4), GameConfig(m=2, r=5, s=2), None)
        with pytest.raises(PreconditionViolated):
            LongCycleRevStrategy().place(cycle(6), GameConfig(m=2, r=6, s=2), None)

    def test_beats_optimal_spies_on_c6(self):
        g = cycle(6)
        cfg = GameConfig(m=2, r=7, s=3)
        res = solve_safety(g, cfg)
        assert res.winner is Team.REVOLUTIONARIES
        out, tr = play_match(g, cfg, LongCycleRevStrategy(), PolicySpyStrategy(res.winset), max_rounds=150)
        assert out.winner is Team.REVOLUTIONARIES
        assert tr.replay(g)

    def test_beats_underpowered_follower_on_c7(self):
        g = cycle(7)
        cfg = GameConfig(m=2, r=7, s=3)
        out, _ = play_match(g, cfg, LongCycleRevStrategy(), UnicyclicSpyStrategy(), max_rounds=200)
        assert out.winner is Team.REVOLUTIONARIES

    @pytest.mark.parametrize("seed", range(12))
    def test_halving_against_random_spies(self, seed):
        rng = random.Random(seed)
        m = rng.choice([2, 3, 4])
        s = rng.choice([1, 2, 3])
        length = s + 3 + rng.randrange(3)
        g = cycle(length)
        cfg = GameConfig(m=m, r=s * m + 1, s=s)
        rev = LongCycleRevStrategy()
        play_match(g, cfg, rev, RandomSpyStrategy(seed), max_rounds=50)
        for before, after in rev.halving_log:
            assert after <= -(-before // 2), f"halving broke: {before} -> {after}"
        for spell in rev.distract_spells:
            assert spell <= math.ceil(math.log2(m))

    def test_crowd_never_exceeds_m_per_vertex(self):
        g = cycle(6)
        cfg = GameConfig(m=2, r=7, s=3)
        rev = LongCycleRevStrategy()
        out, tr = play_match(g, cfg, rev, RandomSpyStrategy(5), max_rounds=40)
        for e in tr.entries:
            if e.team is Team.REVOLUTIONARIES and rev.script.phase in ("Distract", "Shorten"):
                assert max(e.counts) <= cfg.m + (cfg.m - 1)


class TestUnicyclicScript:
    def test_c5_plus_p2_pins_two_meetings(self, c5_plus_p2):
        cfg = GameConfig(m=2, r=7, s=3)
        rev = UnicyclicRevStrategy()
        vec = rev.place(c5_plus_p2, cfg, None)
        assert vec[5] == 2 and vec[6] == 2

    def test_c5_plus_p2_beats_optimal_spies(self, c5_plus_p2):
        cfg = GameConfig(m=2, r=7, s=3)
        res = solve_safety(c5_plus_p2, cfg)
        assert res.winner is Team.REVOLUTIONARIES
        out, _ = play_match(
            c5_plus_p2, cfg, UnicyclicRevStrategy(), PolicySpyStrategy(res.winset), max_rounds=200
        )
        assert out.winner is Team.REVOLUTIONARIES

    def test_c6_pendant_beats_optimal_spies(self):
        g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 6)])
        cfg = GameConfig(m=2, r=5, s=2)
        res = solve_safety(g, cfg)
        assert res.winner is Team.REVOLUTIONARIES
        out, _ = play_match(g, cfg, UnicyclicRevStrategy(), PolicySpyStrategy(res.winset), max_rounds=200)
        assert out.winner is Team.REVOLUTIONARIES

    def test_degenerate_no_off_cycle(self, c5):
        # t = 0: k = 0, the pure cycle script runs (l = 5 >= s+3)
        rev = UnicyclicRevStrategy()
        vec = rev.place(c5, GameConfig(m=2, r=5, s=2), None)
        assert sum(vec) == 5 and not rev.script.pinned

    def test_short_cycle_rejected(self, c4):
        with pytest.raises(PreconditionViolated):
            UnicyclicRevStrategy().place(c4, GameConfig(m=2, r=5, s=2), None)

    def test_precondition_on_divisibility(self, c5_plus_p2):
        with pytest.raises(PreconditionViolated):
            UnicyclicRevStrategy().place(c5_plus_p2, GameConfig(m=2, r=6, s=3), None)
