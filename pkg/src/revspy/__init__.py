"""Revolutionaries and spies on graphs: engine, strategies, exact solver."""

from ._core import BACKEND as KERNEL_BACKEND
from .engine import GameConfig, MoveFlow, Outcome, Position, Team, Transcript, play_match, unguarded_meetings, validate_team_move
from .graphs import Graph, GraphClass, classify, decompose_unicyclic, find_cycle, parse_graph, root_tree
from .solver import sigma_exact, sigma_formula, solve_safety, team_successors, verify_strategy

__all__ = [
    "KERNEL_BACKEND",
    "GameConfig",
    "Graph",
    "GraphClass",
    "MoveFlow",
    "Outcome",
    "Position",
    "Team",
    "Transcript",
    "classify",
    "decompose_unicyclic",
    "find_cycle",
    "parse_graph",
    "play_match",
    "root_tree",
    "sigma_exact",
    "sigma_formula",
    "solve_safety",
    "team_successors",
    "unguarded_meetings",
    "validate_team_move",
    "verify_strategy",
]
