"""Rules of the signed circular coloring game.

Colors are the ``p = k*d`` points ``0..p-1`` of a discrete circle. A positive
edge needs its endpoints at circular distance at least ``d``; a negative edge
needs them at distance at most ``d``. Distance exactly ``d`` satisfies both.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import POS, SignedGraph

SALOME = "salome"
ANDJIGA = "andjiga"
PLAYERS = (SALOME, ANDJIGA)

ONGOING = "ongoing"
SALOME_WIN = "salome_win"
ANDJIGA_WIN = "andjiga_win"

# Andjiga wins when the player to move has no legal move at all ...
MOVER_STUCK = "mover-stuck"
# ... or, in the variant, as soon as some uncolored vertex has no legal color.
DEAD_VERTEX = "dead-vertex"
RULES = (MOVER_STUCK, DEAD_VERTEX)

DEFAULT_COLORING_MAX_N = 12


class IllegalMove(ValueError):
    """A move that breaks the rules. ``edge``/``sign`` name the violated
    constraint when there is one."""

    def __init__(self, message: str, edge: tuple[int, int] | None = None, sign: int | None = None):
        super().__init__(message)
        self.edge = edge
        self.sign = sign


def other(player: str) -> str:
    return ANDJIGA if player == SALOME else SALOME


def check_player(player: str) -> str:
    if player not in PLAYERS:
        raise ValueError(f"unknown player {player!r}; expected salome or andjiga")
    return player


def check_rules(rules: str) -> str:
    if rules not in RULES:
        raise ValueError(f"unknown rules variant {rules!r}; expected one of {', '.join(RULES)}")
    return rules


@dataclass(frozen=True)
class CircleParams:
    p: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"separation d must be >= 1, got {self.d}")
        if self.p < 2 * self.d:
            raise ValueError(f"need p >= 2d, got p={self.p}, d={self.d}")

    @property
    def k(self) -> Fraction:
        return Fraction(self.p, self.d)


def circular_distance(a: int, b: int, p: int) -> int:
    if not (0 <= a < p and 0 <= b < p):
        raise ValueError(f"color points must lie in [0, {p}), got {a} and {b}")
    x = abs(a - b)
    return min(x, p - x)


def edge_ok(sign: int, a: int, b: int, params: CircleParams) -> bool:
    dist = circular_distance(a, b, params.p)
    return dist >= params.d if sign == POS else dist <= params.d


@dataclass(frozen=True)
class GameState:
    graph: SignedGraph
    params: CircleParams
    coloring: tuple[int | None, ...]
    to_move: str

    @property
    def uncolored(self) -> list[int]:
        return [v for v, c in enumerate(self.coloring) if c is None]


def _violation(g: SignedGraph, params: CircleParams, coloring: Sequence[int | None], v: int, c: int):
    p, d = params.p, params.d
    for u, s in g.adjacency[v]:
        cu = coloring[u]
        if cu is None:
            continue
        x = abs(c - cu)
        dist = min(x, p - x)  # circular_distance without the range checks
        if (dist < d) if s == POS else (dist > d):
            return (min(u, v), max(u, v)), s
    return None


def new_game(g: SignedGraph, params: CircleParams, first: str = SALOME) -> GameState:
    return GameState(g, params, (None,) * g.n, check_player(first))


def make_state(g: SignedGraph, params: CircleParams, coloring: Sequence[int | None], to_move: str) -> GameState:
    """A state with a given partial coloring, checked against every edge."""
    if len(coloring) != g.n:
        raise ValueError(f"coloring has {len(coloring)} entries for {g.n} vertices")
    for v, c in enumerate(coloring):
        if c is not None and not 0 <= c < params.p:
            raise ValueError(f"vertex {v}: color {c} out of range [0, {params.p})")
    for u, v, s in g.edges:
        cu, cv = coloring[u], coloring[v]
        if cu is not None and cv is not None and not edge_ok(s, cu, cv, params):
            raise IllegalMove(f"coloring violates {'+' if s == POS else '-'} edge {u}-{v}", (u, v), s)
    return GameState(g, params, tuple(coloring), check_player(to_move))


def legal_color(state: GameState, v: int, c: int) -> bool:
    if state.coloring[v] is not None:
        raise ValueError(f"vertex {v} is already colored")
    if not 0 <= c < state.params.p:
        raise ValueError(f"color {c} out of range [0, {state.params.p})")
    return _violation(state.graph, state.params, state.coloring, v, c) is None


def legal_moves(state: GameState) -> list[tuple[int, int]]:
    return [(v, c) for v in state.uncolored for c in range(state.params.p) if legal_color(state, v, c)]


def apply_move(state: GameState, v: int, c: int) -> GameState:
    if not 0 <= v < state.graph.n:
        raise IllegalMove(f"vertex {v} out of range [0, {state.graph.n})")
    if state.coloring[v] is not None:
        raise IllegalMove(f"vertex {v} is already colored")
    if not 0 <= c < state.params.p:
        raise IllegalMove(f"color {c} out of range [0, {state.params.p})")
    bad = _violation(state.graph, state.params, state.coloring, v, c)
    if bad is not None:
        (a, b), s = bad
        kind = "positive edge needs distance >=" if s == POS else "negative edge needs distance <="
        raise IllegalMove(f"color {c} at vertex {v} breaks edge {a}-{b}: {kind} {state.params.d}", (a, b), s)
    coloring = list(state.coloring)
    coloring[v] = c
    return GameState(state.graph, state.params, tuple(coloring), other(state.to_move))


def _colorable(state: GameState, v: int) -> bool:
    return any(legal_color(state, v, c) for c in range(state.params.p))


def dead_vertices(state: GameState) -> list[int]:
    return [v for v in state.uncolored if not _colorable(state, v)]


def status(state: GameState, rules: str = MOVER_STUCK) -> str:
    check_rules(rules)
    uncolored = state.uncolored
    if not uncolored:
        return SALOME_WIN
    if rules == DEAD_VERTEX:
        stuck = not all(_colorable(state, v) for v in uncolored)
    else:
        stuck = not any(_colorable(state, v) for v in uncolored)
    return ANDJIGA_WIN if stuck else ONGOING


def coloring_exists(g: SignedGraph, params: CircleParams, max_n: int = DEFAULT_COLORING_MAX_N) -> bool:
    """Whether any complete coloring satisfies every edge (plain backtracking)."""
    if g.n > max_n:
        raise ValueError(f"n={g.n} exceeds the coloring search bound of {max_n}")
    coloring: list[int | None] = [None] * g.n

    def extend(v: int) -> bool:
        if v == g.n:
            return True
        for c in range(params.p):
            if _violation(g, params, coloring, v, c) is None:
                coloring[v] = c
                if extend(v + 1):
                    return True
                coloring[v] = None
        return False

    return extend(0)
