"""Exact optimal play for the signed circular coloring game.

``Solver`` is a boolean minimax over partial colorings with a transposition
table. Its key is the coloring mapped to the lexicographically least image
under the ``2p`` rotations and reflections of the color circle: edge
constraints depend only on circular distance, so every such image has the
same game value. ``naive_salome_wins`` is an unrelated plain recursion over
the rule functions in ``game`` and serves as the oracle.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .core import POS, SignedGraph
from .game import (
    ANDJIGA,
    MOVER_STUCK,
    ONGOING,
    SALOME,
    SALOME_WIN,
    CircleParams,
    GameState,
    apply_move,
    check_player,
    check_rules,
    circular_distance,
    legal_moves,
    new_game,
    status,
)

MAX_N = 10
MAX_P = 16
NAIVE_MAX_N = 6
NAIVE_MAX_P = 8


class BoundError(ValueError):
    """An instance is too large for the requested solver."""

    def __init__(self, dimension: str, value: int, bound: int):
        super().__init__(f"{dimension}={value} exceeds the solver bound of {bound}")
        self.dimension = dimension
        self.value = value
        self.bound = bound


def _check_bounds(g: SignedGraph, params: CircleParams, max_n: int, max_p: int) -> None:
    if g.n > max_n:
        raise BoundError("n", g.n, max_n)
    if params.p > max_p:
        raise BoundError("p", params.p, max_p)


class Solver:
    """Memoized solver for one (graph, circle, rules) triple.

    The transposition table persists across calls, so solving both move
    orders or many states of one game reuses work. ``nodes`` counts expanded
    (non-cached) positions.

    Two reductions shrink the table. ``symmetry`` identifies colorings that
    differ by a rotation or reflection of the circle. ``tempo`` forgets the
    color of a vertex whose neighbors are all colored (it constrains nothing
    any more) and treats uncolored vertices with all neighbors colored as
    interchangeable spare moves, of which only one is explored.
    """

    def __init__(
        self,
        g: SignedGraph,
        params: CircleParams,
        rules: str = MOVER_STUCK,
        symmetry: bool = True,
        max_n: int = MAX_N,
        max_p: int = MAX_P,
        tempo: bool = True,
    ):
        _check_bounds(g, params, max_n, max_p)
        self.g = g
        self.params = params
        self.rules = check_rules(rules)
        self.symmetry = symmetry
        self.tempo = tempo
        self.nodes = 0
        self.memo: dict[tuple[tuple[int, ...], bool], bool] = {}
        p, d = params.p, params.d
        self._full = (1 << p) - 1
        near = [0] * p
        far = [0] * p
        for a in range(p):
            for b in range(p):
                dist = circular_distance(a, b, p)
                if dist >= d:
                    far[a] |= 1 << b
                if dist <= d:
                    near[a] |= 1 << b
        # color relabelings sending c to 0, by rotation and by reflection; the
        # tail keeps the markers p (settled), -2 (spare) and -1 (uncolored)
        self._maps = [
            ([(x - c) % p for x in range(p)] + [p, -2, -1], [(c - x) % p for x in range(p)] + [p, -2, -1])
            for c in range(p)
        ]
        self._adj = [sum(1 << u for u, _ in g.adjacency[v]) for v in range(g.n)]
        # per vertex: (neighbor, allowed-color mask indexed by the neighbor's color)
        self._nbrs = [tuple((u, far if s == POS else near) for u, s in g.adjacency[v]) for v in range(g.n)]

    def _key(self, col: tuple[int, ...], open_: int) -> tuple[int, ...]:
        p = self.params.p
        if self.tempo:
            adj = self._adj
            col = tuple(c if adj[v] & open_ else (p if c >= 0 else -2) for v, c in enumerate(col))
        if not self.symmetry:
            return col
        for c in col:
            if 0 <= c < p:
                break
        else:
            return col
        rot, ref = self._maps[c]
        return min(tuple(map(rot.__getitem__, col)), tuple(map(ref.__getitem__, col)))

    def _allowed(self, col: tuple[int, ...], v: int) -> int:
        mask = self._full
        for u, table in self._nbrs[v]:
            cu = col[u]
            if cu >= 0:
                mask &= table[cu]
        return mask

    def _wins(self, col: tuple[int, ...], salome: bool) -> bool:
        open_ = 0
        for v, c in enumerate(col):
            if c < 0:
                open_ |= 1 << v
        key = (self._key(col, open_), salome)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        moves = []
        spare = False
        for v, c in enumerate(col):
            if c < 0:
                mask = self._allowed(col, v)
                if mask == 0:
                    # constraints only accumulate: a dead vertex stays dead, so
                    # both rule variants are lost for Salome here
                    self.memo[key] = False
                    return False
                if self.tempo and not self._adj[v] & open_:
                    if spare:
                        continue
                    spare = True
                    mask &= -mask
                moves.append((v, mask))
        if not moves:
            result = True
        else:
            result = not salome
            for v, mask in moves:
                c = 0
                while mask:
                    if mask & 1:
                        child = col[:v] + (c,) + col[v + 1 :]
                        if self._wins(child, not salome) == salome:
                            result = salome
                            break
                    mask >>= 1
                    c += 1
                if result == salome:
                    break
        self.memo[key] = result
        return result

    def wins_from(self, coloring: Iterable[int | None], to_move: str) -> bool:
        """Whether Salome wins with optimal play from a partial coloring."""
        col = tuple(-1 if c is None else c for c in coloring)
        return self._wins(col, check_player(to_move) == SALOME)

    def salome_wins(self, first: str = SALOME) -> bool:
        return self.wins_from((None,) * self.g.n, first)


def salome_wins(
    g: SignedGraph,
    params: CircleParams,
    first: str = SALOME,
    rules: str = MOVER_STUCK,
    symmetry: bool = True,
    max_n: int = MAX_N,
    max_p: int = MAX_P,
    tempo: bool = True,
) -> bool:
    return Solver(g, params, rules, symmetry, max_n, max_p, tempo).salome_wins(first)


def solve(
    g: SignedGraph,
    params: CircleParams,
    first: str = SALOME,
    rules: str = MOVER_STUCK,
    symmetry: bool = True,
    tempo: bool = True,
) -> tuple[bool, int]:
    """``(salome_wins, expanded node count)`` for a fresh solver."""
    s = Solver(g, params, rules, symmetry, tempo=tempo)
    return s.salome_wins(first), s.nodes


def naive_salome_wins(g: SignedGraph, params: CircleParams, first: str = SALOME, rules: str = MOVER_STUCK) -> bool:
    """Unmemoized full recursion through ``game.legal_moves``/``apply_move``."""
    _check_bounds(g, params, NAIVE_MAX_N, NAIVE_MAX_P)
    check_rules(rules)

    def value(state: GameState) -> bool:
        st = status(state, rules)
        if st != ONGOING:
            return st == SALOME_WIN
        outcomes = (value(apply_move(state, v, c)) for v, c in legal_moves(state))
        return any(outcomes) if state.to_move == SALOME else all(outcomes)

    return value(new_game(g, params, first))


def best_move(state: GameState, rules: str = MOVER_STUCK, solver: Solver | None = None) -> tuple[int, int]:
    """An optimal move for the player to move; the first legal move in
    (vertex, color) order among those with the best value."""
    if solver is None:
        solver = Solver(state.graph, state.params, rules)
    moves = legal_moves(state)
    if not moves or status(state, solver.rules) != ONGOING:
        raise ValueError("no move to make: the game is over")
    want = state.to_move == SALOME
    for v, c in moves:
        nxt = apply_move(state, v, c)
        if solver.wins_from(nxt.coloring, nxt.to_move) == want:
            return v, c
    return moves[0]


# -- parameter sweeps --------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    p: int
    d: int
    salome_wins: bool | None
    nodes: int = 0
    seconds: float = 0.0
    error: str | None = None

    def as_dict(self, timing: bool = True) -> dict:
        out = {"p": self.p, "d": self.d, "winner": None, "nodes": self.nodes}
        if self.salome_wins is not None:
            out["winner"] = SALOME if self.salome_wins else ANDJIGA
        if self.error:
            out["error"] = self.error
        if timing:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class WinTable:
    graph: SignedGraph
    first: str
    rules: str
    cells: dict[tuple[int, int], Cell] = field(default_factory=dict)

    def winner(self, p: int, d: int) -> bool | None:
        return self.cells[(p, d)].salome_wins

    def winners(self) -> dict[tuple[int, int], bool | None]:
        return {pd: c.salome_wins for pd, c in sorted(self.cells.items())}

    def as_dict(self, timing: bool = True) -> dict:
        return {
            "n": self.graph.n,
            "edges": [[u, v, s] for u, v, s in self.graph.edges],
            "first": self.first,
            "rules": self.rules,
            "cells": [c.as_dict(timing) for _, c in sorted(self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0]))],
        }


def _solve_cell(args: tuple) -> Cell:
    g, p, d, first, rules, symmetry = args
    t0 = time.perf_counter()
    try:
        s = Solver(g, CircleParams(p, d), rules, symmetry)
        won = s.salome_wins(first)
    except BoundError as exc:
        return Cell(p, d, None, error=str(exc))
    return Cell(p, d, won, s.nodes, time.perf_counter() - t0)


def pmap(fn, items: list, threads: int = 1) -> list:
    """Order-preserving map, in worker processes when ``threads > 1``."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def grid_cells(p_values: Iterable[int], d_values: Iterable[int]) -> list[tuple[int, int]]:
    """Valid ``(p, d)`` pairs (``p >= 2d``), ordered by d then p."""
    ps = sorted(set(p_values))
    return [(p, d) for d in sorted(set(d_values)) for p in ps if p >= 2 * d]


def win_table(
    g: SignedGraph,
    p_values: Iterable[int],
    d_values: Iterable[int],
    first: str = SALOME,
    rules: str = MOVER_STUCK,
    symmetry: bool = True,
    threads: int = 1,
) -> WinTable:
    """Solve every valid cell; a cell over the solver bounds records its error."""
    check_player(first)
    check_rules(rules)
    jobs = [(g, p, d, first, rules, symmetry) for p, d in grid_cells(p_values, d_values)]
    cells = pmap(_solve_cell, jobs, threads)
    return WinTable(g, first, rules, {(c.p, c.d): c for c in cells})


@dataclass(frozen=True)
class ChiEstimate:
    """Grid estimate of the circular game chromatic number.

    ``per_d`` maps each d to the sorted p values in ``2d..p_hi[d]`` where
    Salome wins. ``estimate`` is the largest per-d minimum winning ratio; a d
    with no win in range contributes the strict lower bound
    ``(p_hi[d] + 1) / d`` and sets ``truncated``, so ``estimate`` is always a
    lower bound on the supremum over the tested d.
    """

    per_d: dict[int, tuple[int, ...]]
    p_hi: dict[int, int]
    estimate: Fraction
    truncated: bool
    monotone: bool
    first: str

    def min_ratio(self, d: int) -> Fraction | None:
        wins = self.per_d[d]
        return Fraction(wins[0], d) if wins else None

    def as_dict(self) -> dict:
        return {
            "first": self.first,
            "estimate": str(self.estimate),
            "truncated": self.truncated,
            "monotone": self.monotone,
            "per_d": {str(d): list(w) for d, w in sorted(self.per_d.items())},
            "p_max": {str(d): hi for d, hi in sorted(self.p_hi.items())},
        }


def p_upper(d: int, p_max: int | None, ratio_max: int | None) -> int:
    hi = p_max if p_max is not None else ratio_max * d
    if ratio_max is not None:
        hi = min(hi, ratio_max * d)
    return hi


def chi_from_winners(
    winners: dict[tuple[int, int], bool | None], d_values: Iterable[int], p_hi: dict[int, int], first: str
) -> ChiEstimate:
    per_d = {d: tuple(p for p in range(2 * d, p_hi[d] + 1) if winners.get((p, d))) for d in sorted(set(d_values))}
    bounds = [Fraction(w[0], d) if w else Fraction(p_hi[d] + 1, d) for d, w in per_d.items()]
    monotone = all(list(w) == list(range(w[0], p_hi[d] + 1)) for d, w in per_d.items() if w)
    truncated = not all(per_d.values())
    return ChiEstimate(per_d, dict(p_hi), max(bounds), truncated, monotone, first)


def chi_estimate(
    g: SignedGraph,
    d_max: int,
    p_max: int | None = None,
    first: str = SALOME,
    rules: str = MOVER_STUCK,
    ratio_max: int | None = None,
    symmetry: bool = True,
    threads: int = 1,
) -> ChiEstimate:
    """Scan every p in ``2d..p_hi(d)`` for ``d = 1..d_max``, where ``p_hi`` is
    ``p_max`` capped at ``ratio_max * d``. No monotonicity in p is assumed."""
    if p_max is None and ratio_max is None:
        raise ValueError("give p_max, ratio_max or both")
    d_values = range(1, d_max + 1)
    p_hi = {d: p_upper(d, p_max, ratio_max) for d in d_values}
    if any(p_hi[d] < 2 * d for d in d_values):
        raise ValueError("p range is empty for some d; raise p_max")
    jobs = [(g, p, d, first, rules, symmetry) for d in d_values for p in range(2 * d, p_hi[d] + 1)]
    cells = pmap(_solve_cell, jobs, threads)
    for c in cells:
        if c.error:
            raise BoundError("p", c.p, MAX_P) if c.p > MAX_P else ValueError(c.error)
    return chi_from_winners({(c.p, c.d): c.salome_wins for c in cells}, d_values, p_hi, first)
