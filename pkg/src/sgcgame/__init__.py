"""Exact tools for the circular coloring game on signed graphs."""
from .core import NEG, POS, GraphError, SignedGraph, build_graph, cycle_rank, generate, walk_sign
from .game import ANDJIGA, SALOME, CircleParams, GameState, apply_move, legal_moves, new_game, status
from .solver import Solver, best_move, chi_estimate, naive_salome_wins, salome_wins, win_table
from .switching import (
    canonicalize,
    classify,
    count_switching_classes,
    is_antibalanced,
    is_balanced,
    switch,
    switching_equivalent,
)

__version__ = "0.1.0"
