import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revspy.engine import (
    GameConfig,
    IllegalMove,
    Outcome,
    OutcomeReason,
    Position,
    SumMismatch,
    Team,
    Transcript,
    default_max_rounds,
    play_match,
    team_move_feasible,
    unguarded_meetings,
    validate_team_move,
)
from revspy.rev_strategy import FloodRevStrategy, RandomRevStrategy, RandomSpyStrategy
from revspy.tree_strategy import TreeSpyStrategy

from conftest import cycle, path


def brute_force_successors(g, counts):
    """Independent oracle: enumerate each unit's move choices directly."""
    units = [v for v, c in enumerate(counts) for _ in range(c)]
    out = set()
    for choice in itertools.product(*[[v, *g.adjacency[v]] for v in units]):
        vec = [0] * g.n
        for v in choice:
            vec[v] += 1
        out.add(tuple(vec))
    return out


class TestValidateTeamMove:
    def test_p3_step_and_stay(self, p3):
        flow = validate_team_move(p3, (1, 0, 1), (0, 1, 1))
        assert flow.apply((1, 0, 1)) == (0, 1, 1)
        assert flow.stay[2] == 1

    def test_two_edge_move_rejected(self, p3):
        with pytest.raises(IllegalMove):
            validate_team_move(p3, (1, 0, 0), (0, 0, 1))

    def test_p2_both_traverse(self):
        p2 = path(2)
        flow = validate_team_move(p2, (2, 0), (0, 2))
        assert flow.traverse == ((0, 1, 2),)

    def test_sum_mismatch(self, p3):
        with pytest.raises(SumMismatch):
            validate_team_move(p3, (1, 0, 0), (1, 1, 0))

    def test_matches_brute_force_oracle(self, p3, c4):
        for g, counts in [(p3, (1, 0, 1)), (p3, (2, 1, 0)), (c4, (1, 1, 0, 1))]:
            reachable = brute_force_successors(g, counts)
            for after in itertools.product(range(sum(counts) + 1), repeat=g.n):
                if sum(after) != sum(counts):
                    continue
                assert team_move_feasible(g, counts, after) == (after in reachable)

    @settings(max_examples=60, deadline=None)
    @given(data=st.data())
    def test_symmetric_feasibility(self, data):
        n = data.draw(st.integers(3, 5))
        g = cycle(n)
        before = tuple(data.draw(st.integers(0, 2)) for _ in range(n))
        after_units = data.draw(
            st.lists(st.integers(0, n - 1), min_size=sum(before), max_size=sum(before))
        )
        after = [0] * n
        for v in after_units:
            after[v] += 1
        after = tuple(after)
        assert team_move_feasible(g, before, after) == team_move_feasible(g, after, before)


class TestUnguardedMeetings:
    def test_basic(self):
        assert unguarded_meetings(Position((2, 0), (0, 1)), 2) == {0}
        assert unguarded_meetings(Position((2, 0), (1, 0)), 2) == set()
        assert unguarded_meetings(Position((1, 1), (0, 0)), 2) == set()

    def test_spy_monotone(self):
        pos = Position((2, 2, 0), (0, 0, 0))
        base = unguarded_meetings(pos, 2)
        fewer = unguarded_meetings(Position(pos.rev, (1, 0, 0)), 2)
        assert fewer <= base

    def test_rev_monotone_elsewhere(self):
        pos = Position((2, 1, 0), (0, 0, 0))
        base = unguarded_meetings(pos, 2)
        more = unguarded_meetings(Position((2, 2, 0), (0, 0, 0)), 2)
        assert base - {1} <= more


class TestPlayMatch:
    def test_tree_spies_survive(self, p3):
        out, tr = play_match(
            p3, GameConfig(m=2, r=2, s=1), RandomRevStrategy(7), TreeSpyStrategy(), max_rounds=40
        )
        assert out.winner is Team.SPIES and out.reason is OutcomeReason.HORIZON_SURVIVED
        assert tr.replay(p3)

    def test_no_meeting_possible_when_r_below_m(self, c4):
        out, _ = play_match(
            c4, GameConfig(m=3, r=2, s=0), RandomRevStrategy(1), RandomSpyStrategy(2), max_rounds=20
        )
        assert out.winner is Team.SPIES

    def test_flood_beats_underpowered_spies(self, c4):
        out, _ = play_match(
            c4, GameConfig(m=2, r=4, s=1), FloodRevStrategy(), RandomSpyStrategy(3), max_rounds=5
        )
        assert out.winner is Team.REVOLUTIONARIES
        assert out.reason is OutcomeReason.UNGUARDED_MEETING

    def test_illegal_strategy_forfeits(self, p3):
        class Teleporter:
            team = Team.REVOLUTIONARIES

            def place(self, g, cfg, observed):
                return (1, 1, 0)

            def respond(self, pos):
                # both units jump to the far end: not a legal one-edge move
                return (0, 0, sum(pos.rev))

        out, tr = play_match(
            p3, GameConfig(m=2, r=2, s=1), Teleporter(), RandomSpyStrategy(0), max_rounds=9
        )
        assert out.winner is Team.SPIES
        assert out.reason is OutcomeReason.ILLEGAL_STRATEGY_MOVE
        assert out.offender is Team.REVOLUTIONARIES
        assert tr.entries[-1].note == "rejected"

    def test_conservation_and_replay(self, c5):
        out, tr = play_match(
            c5, GameConfig(m=2, r=5, s=2), RandomRevStrategy(11), RandomSpyStrategy(12), max_rounds=30
        )
        for e in tr.entries:
            if e.note.startswith("rejected"):
                continue
            want = 5 if e.team is Team.REVOLUTIONARIES else 2
            assert sum(e.counts) == want
        assert tr.replay(c5)

    def test_default_horizon(self, p3):
        assert default_max_rounds(p3, GameConfig(m=2, r=2, s=1)) == 4 * 6


class TestTranscript:
    def test_round_trip(self, p3):
        _, tr = play_match(
            p3, GameConfig(m=2, r=2, s=1), RandomRevStrategy(5), TreeSpyStrategy(), max_rounds=6,
            graph_label="p3.txt", seed=5,
        )
        text = tr.to_text()
        assert text.startswith("graph=p3.txt m=2 r=2 s=1 seed=5")
        assert text.rstrip().splitlines()[-1].startswith("outcome=")
        back = Transcript.from_text(text)
        assert [(e.round, e.team, e.counts) for e in back.entries] == [
            (e.round, e.team, e.counts) for e in tr.entries
        ]
        assert back.replay(p3)

    def test_outcome_strings(self):
        o = Outcome(Team.REVOLUTIONARIES, OutcomeReason.UNGUARDED_MEETING, 3, vertex=1)
        assert str(o) == "Revolutionaries:UnguardedMeeting(vertex=1,round=3)"
        o2 = Outcome(Team.SPIES, OutcomeReason.HORIZON_SURVIVED, 40)
        assert str(o2) == "Spies:HorizonSurvived(rounds=40)"
