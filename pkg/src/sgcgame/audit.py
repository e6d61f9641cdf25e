"""Claim audits over exhaustive families of small signed graphs.

Each suite treats one published statement about the circular game chromatic
number (or about switching classes) as a hypothesis, evaluates it on every
instance of a small family over a finite ``(p, d)`` grid, and returns an
``AuditReport``. Finite grids can only confirm a claim on the grid, never
prove it. Before a refutation is issued, the first counterexample cells of
each instance that fit the naive oracle's bounds are re-solved by it; any
disagreement downgrades the instance to inconclusive.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import IO, Callable, Iterable

from .core import (
    NEG,
    POS,
    SignedGraph,
    build_graph,
    connected_graphs,
    generate,
    is_bipartite,
    trees,
)
from .game import MOVER_STUCK, PLAYERS, SALOME, CircleParams
from .solver import (
    NAIVE_MAX_N,
    NAIVE_MAX_P,
    BoundError,
    ChiEstimate,
    Solver,
    chi_from_winners,
    naive_salome_wins,
    pmap,
)
from .switching import count_switching_classes, enumerate_classes_bruteforce, is_antibalanced, is_balanced, switch

SCHEMA = "sgcgame.audit/1"

CONFIRMED = "confirmed-on-grid"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive-truncated"

# naive re-solves per instance; each can take about a second at the oracle's bounds
NAIVE_CHECKS_PER_INSTANCE = 2


@dataclass(frozen=True)
class Grid:
    """Cells ``(p, d)`` for ``d`` in ``d_values`` and ``2d <= p <= p_hi(d)``,
    where ``p_hi(d)`` is ``ratio_max * d`` capped at ``p_max``."""

    d_values: tuple[int, ...] = (1, 2, 3)
    ratio_max: int | None = 4
    p_max: int | None = None
    firsts: tuple[str, ...] = PLAYERS
    rules: str = MOVER_STUCK

    def __post_init__(self) -> None:
        if self.ratio_max is None and self.p_max is None:
            raise ValueError("a grid needs ratio_max, p_max or both")

    def p_hi(self, d: int) -> int:
        hi = self.ratio_max * d if self.ratio_max is not None else self.p_max
        return min(hi, self.p_max) if self.p_max is not None else hi

    def cells(self) -> list[tuple[int, int]]:
        return [(p, d) for d in self.d_values for p in range(2 * d, self.p_hi(d) + 1)]

    def as_dict(self) -> dict:
        return {
            "d": list(self.d_values),
            "ratio_max": self.ratio_max,
            "p_max": self.p_max,
            "first": list(self.firsts),
            "rules": self.rules,
        }


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    family: str
    predicate: str


@dataclass
class AuditReport:
    claim: Claim
    grid: dict
    seed: int
    verdict: str = CONFIRMED
    instances_tested: int = 0
    excluded: int = 0
    instances: list[dict] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    runtime: float = 0.0
    timestamp: str | None = None

    def as_dict(self, timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "claim": self.claim.id,
            "statement": self.claim.statement,
            "family": self.claim.family,
            "predicate": self.claim.predicate,
            "grid": self.grid,
            "seed": self.seed,
            "verdict": self.verdict,
            "instances_tested": self.instances_tested,
            "excluded": self.excluded,
            "instances": self.instances,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }
        if timing:
            out["runtime"] = round(self.runtime, 3)
            out["timestamp"] = self.timestamp
        return out

    def to_line(self, timing: bool = False) -> str:
        return json.dumps(self.as_dict(timing), sort_keys=True, separators=(",", ":"))


def combine(verdicts: Iterable[str]) -> str:
    vs = list(verdicts)
    if REFUTED in vs:
        return REFUTED
    if INCONCLUSIVE in vs:
        return INCONCLUSIVE
    return CONFIRMED


def graph_text(g: SignedGraph) -> str:
    """Compact ``n:u-v±,...`` form used inside reports."""
    return f"{g.n}:" + ",".join(f"{u}-{v}{'+' if s == POS else '-'}" for u, v, s in g.edges)


def _winner(x: bool | None) -> str | None:
    return None if x is None else ("salome" if x else "andjiga")


def _solve_job(job: tuple) -> bool | None:
    g, p, d, first, rules = job
    try:
        return Solver(g, CircleParams(p, d), rules).salome_wins(first)
    except BoundError:
        return None


class Engine:
    """Shared cache of solved cells (and naive re-solves) for one audit run,
    so a cell appearing in several suites is solved once and reported
    identically everywhere."""

    def __init__(self, grid: Grid, threads: int = 1):
        self.grid = grid
        self.threads = threads
        self._cells: dict[tuple, bool | None] = {}
        self._naive: dict[tuple, bool | None] = {}

    def prefetch(self, graphs: Iterable[SignedGraph]) -> None:
        jobs = []
        for g in graphs:
            for first in self.grid.firsts:
                for p, d in self.grid.cells():
                    key = (g, p, d, first, self.grid.rules)
                    if key not in self._cells:
                        self._cells[key] = None
                        jobs.append(key)
        for key, won in zip(jobs, pmap(_solve_job, jobs, self.threads)):
            self._cells[key] = won

    def winner(self, g: SignedGraph, p: int, d: int, first: str) -> bool | None:
        key = (g, p, d, first, self.grid.rules)
        if key not in self._cells:
            self._cells[key] = _solve_job(key)
        return self._cells[key]

    def table(self, g: SignedGraph, first: str) -> dict[tuple[int, int], bool | None]:
        return {(p, d): self.winner(g, p, d, first) for p, d in self.grid.cells()}

    def chi(self, g: SignedGraph, first: str) -> ChiEstimate:
        p_hi = {d: self.grid.p_hi(d) for d in self.grid.d_values}
        return chi_from_winners(self.table(g, first), self.grid.d_values, p_hi, first)

    def naive(self, g: SignedGraph, p: int, d: int, first: str) -> bool | None:
        """Naive oracle's winner, or None when the cell is outside its bounds."""
        if g.n > NAIVE_MAX_N or p > NAIVE_MAX_P:
            return None
        key = (g, p, d, first, self.grid.rules)
        if key not in self._naive:
            self._naive[key] = naive_salome_wins(g, CircleParams(p, d), first, self.grid.rules)
        return self._naive[key]


@dataclass
class _Cells:
    """Counterexample cells for one instance, with oracle re-checks."""

    engine: Engine
    entries: list[dict] = field(default_factory=list)
    oracle_disagrees: bool = False
    checks: int = 0

    def add(self, g: SignedGraph, p: int, d: int, first: str, role: str) -> dict:
        won = self.engine.winner(g, p, d, first)
        entry = {"graph": graph_text(g), "p": p, "d": d, "first": first, "role": role, "solver": _winner(won)}
        naive = None
        if self.checks < NAIVE_CHECKS_PER_INSTANCE:
            naive = self.engine.naive(g, p, d, first)
            if naive is not None:
                self.checks += 1
        entry["naive"] = _winner(naive)
        if naive is not None and naive != won:
            self.oracle_disagrees = True
        self.entries.append(entry)
        return entry

    def verdict(self) -> str:
        """Refuted, unless the oracle contradicted the solver on some cell."""
        return INCONCLUSIVE if self.oracle_disagrees else REFUTED


def _compare_tables(engine: Engine, left: SignedGraph, right: SignedGraph, report: AuditReport, info: dict) -> str:
    """Cell-by-cell winner comparison of two signed graphs."""
    cex = _Cells(engine)
    missing = False
    for first in engine.grid.firsts:
        a, b = engine.table(left, first), engine.table(right, first)
        for (p, d), wa in a.items():
            wb = b[(p, d)]
            if wa is None or wb is None:
                missing = True
            elif wa != wb:
                cex.add(left, p, d, first, "left")
                cex.add(right, p, d, first, "right")
    differing = sorted({(e["p"], e["d"], e["first"]) for e in cex.entries})
    info["differing_cells"] = [list(c) for c in differing]
    if differing:
        verdict = cex.verdict()
        report.counterexamples.extend(cex.entries)
    else:
        verdict = INCONCLUSIVE if missing else CONFIRMED
    info["verdict"] = verdict
    return verdict


def _claim_check(engine: Engine, g: SignedGraph, est: ChiEstimate, value: Fraction, relation: str, report: AuditReport) -> dict:
    """Compare a grid estimate with a claimed value (``relation`` is "eq" or "le").

    The estimate is a lower bound on the supremum over the tested d, so it
    refutes "le" and "eq" claims from above. Below a claimed equality it only
    refutes on the grid: every tested d has a winning ratio under the claim.
    """
    out = {"first": est.first, "estimate": str(est.estimate), "claimed": str(value), "relation": relation,
           "truncated": est.truncated, "monotone": est.monotone}
    cex = _Cells(engine)
    if est.estimate > value:
        # the d that pushes the estimate over: Salome loses every cell with p/d <= value
        d = next(d for d in est.per_d if (Fraction(est.per_d[d][0], d) if est.per_d[d] else Fraction(est.p_hi[d] + 1, d)) == est.estimate)
        for p in range(2 * d, est.p_hi[d] + 1):
            if Fraction(p, d) <= value:
                cex.add(g, p, d, est.first, "salome-loses")
        out["verdict"] = cex.verdict()
    elif est.truncated:
        out["verdict"] = INCONCLUSIVE
    elif relation == "eq" and est.estimate < value:
        for d, wins in est.per_d.items():
            cex.add(g, wins[0], d, est.first, "salome-wins-below-claim")
        out["verdict"] = cex.verdict()
    else:
        out["verdict"] = CONFIRMED
    report.counterexamples.extend(cex.entries)
    return out


def _finish(report: AuditReport, verdicts: list[str], t0: float) -> AuditReport:
    report.verdict = combine(verdicts)
    report.runtime = time.perf_counter() - t0
    report.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report


def _rng(suite: str, seed: int) -> random.Random:
    return random.Random(f"{suite}:{seed}")


def _random_subset(rng: random.Random, n: int) -> list[int]:
    return [v for v in range(n) if rng.random() < 0.5]


def _random_signs(rng: random.Random, m: int) -> list[int]:
    return [rng.choice((POS, NEG)) for _ in range(m)]


def _is_odd_cycle(g: SignedGraph) -> bool:
    return g.n >= 3 and g.n % 2 == 1 and g.m == g.n and all(len(a) == 2 for a in g.adjacency)


# -- suites ------------------------------------------------------------------


def check_balanced_equals_unsigned(nmax: int, grid: Grid, seed: int = 0, samples: int = 2, engine: Engine | None = None) -> AuditReport:
    """Balanced signatures (all-positive switched by a random vertex set)
    against the all-positive graph, cell by cell. One random signature per
    shape is offered too and kept only if it happens to be balanced."""
    t0 = time.perf_counter()
    engine = engine or Engine(grid)
    rng = _rng("balanced-equals-unsigned", seed)
    claim = Claim("balanced-equals-unsigned", "chi(G, sigma) = chi(G, +) whenever sigma is balanced",
                  f"connected graphs, 1..{nmax} vertices", "equal win tables for sigma and +")
    report = AuditReport(claim, grid.as_dict(), seed)
    work = []
    for g in connected_graphs(nmax):
        for _ in range(samples):
            work.append((g, switch(g, _random_subset(rng, g.n))))
        work.append((g, g.with_signs(_random_signs(rng, g.m))))
    kept = []
    for plus, sigma in work:
        if is_balanced(sigma).holds:
            kept.append((plus, sigma))
        else:
            report.excluded += 1
    engine.prefetch([x for pair in kept for x in pair])
    verdicts = []
    for plus, sigma in kept:
        info = {"graph": graph_text(sigma)}
        verdicts.append(_compare_tables(engine, sigma, plus, report, info))
        report.instances.append(info)
    report.instances_tested = len(kept)
    return _finish(report, verdicts, t0)


def check_switch_invariance(
    nmax: int, grid: Grid, seed: int = 0, samples: int = 2, family: str = "connected", engine: Engine | None = None
) -> AuditReport:
    """Random (graph, signature, switching set) triples: the win tables of
    sigma and of sigma switched must agree cell by cell."""
    t0 = time.perf_counter()
    engine = engine or Engine(grid)
    rng = _rng(f"switch-invariance:{family}", seed)
    shapes = trees(nmax) if family == "trees" else connected_graphs(nmax)
    claim = Claim("switch-invariance", "chi(G, sigma1) = chi(G, sigma2) for switching-equivalent sigma1, sigma2",
                  f"{family} graphs, 1..{nmax} vertices", "equal win tables for sigma and its switch")
    report = AuditReport(claim, grid.as_dict(), seed)
    pairs = []
    for g in shapes:
        for _ in range(samples):
            sigma = g.with_signs(_random_signs(rng, g.m))
            subset = _random_subset(rng, g.n)
            pairs.append((sigma, subset, switch(sigma, subset)))
    engine.prefetch([x for s, _, t in pairs for x in (s, t)])
    verdicts = []
    for sigma, subset, tau in pairs:
        info = {"graph": graph_text(sigma), "switch": subset, "switched": graph_text(tau)}
        verdicts.append(_compare_tables(engine, sigma, tau, report, info))
        report.instances.append(info)
    report.instances_tested = len(pairs)
    return _finish(report, verdicts, t0)


def check_antibalanced_bound(nmax: int, grid: Grid, seed: int = 0, engine: Engine | None = None) -> AuditReport:
    """chi(G, -) <= chi(G, +) + 1 for antibalanced (G, -), on grid estimates;
    all-negative odd cycles are also held to the claimed value 3."""
    t0 = time.perf_counter()
    engine = engine or Engine(grid)
    claim = Claim("antibalanced-bound", "chi(G, -) <= chi(G, +) + 1 when (G, -) is antibalanced; all-negative odd cycles reach 3",
                  f"connected graphs, 1..{nmax} vertices, all-negative", "estimate(-) <= estimate(+) + 1")
    report = AuditReport(claim, grid.as_dict(), seed)
    kept = []
    for g in connected_graphs(nmax):
        minus = g.all_negative()
        if is_antibalanced(minus).holds:
            kept.append((g, minus))
        else:
            report.excluded += 1
    engine.prefetch([x for pair in kept for x in pair])
    verdicts = []
    for plus, minus in kept:
        info = {"graph": graph_text(minus), "checks": []}
        for first in grid.firsts:
            em, ep = engine.chi(minus, first), engine.chi(plus, first)
            row = {"first": first, "estimate_minus": str(em.estimate), "estimate_plus": str(ep.estimate),
                   "truncated": em.truncated or ep.truncated}
            if em.truncated or ep.truncated:
                row["verdict"] = INCONCLUSIVE
            elif em.estimate <= ep.estimate + 1:
                row["verdict"] = CONFIRMED
            else:
                row["verdict"] = REFUTED
            if row["verdict"] == REFUTED:
                cex = _Cells(engine)
                bound = ep.estimate + 1
                for d in grid.d_values:
                    for p in range(2 * d, grid.p_hi(d) + 1):
                        if Fraction(p, d) <= bound and not engine.winner(minus, p, d, first):
                            cex.add(minus, p, d, first, "salome-loses")
                row["verdict"] = cex.verdict()
                report.counterexamples.extend(cex.entries)
            info["checks"].append(row)
            verdicts.append(row["verdict"])
            if _is_odd_cycle(plus):
                value_check = _claim_check(engine, minus, em, Fraction(3), "eq", report)
                info["checks"].append({"odd_cycle_value": value_check})
                verdicts.append(value_check["verdict"])
        report.instances.append(info)
    report.instances_tested = len(kept)
    c4 = generate("cycle", [4], [POS, NEG, NEG, NEG])
    report.notes.append(
        "antibalance is tested as balance of (G, -sigma); a bipartite underlying graph does not suffice: "
        f"{graph_text(c4)} is bipartite with antibalanced = {is_antibalanced(c4).holds}"
    )
    return _finish(report, verdicts, t0)


CONVENTION_GAP = (
    "convention-gap: the claimed value depends on conventions the source leaves open "
    "(who moves first, when Andjiga wins, real versus integer k); disagreement is reported, not resolved"
)


def check_bipartite_bounds(nmax: int, grid: Grid, seed: int = 0, engine: Engine | None = None) -> AuditReport:
    """Bipartite shapes with the all-positive (claimed 2) and all-negative
    (claimed 3) signatures, plus K_{2,3} with alternating signs (claimed 3)."""
    t0 = time.perf_counter()
    engine = engine or Engine(grid)
    claim = Claim("bipartite-bounds", "bipartite G: chi(G, +) = 2 and chi(G, -) = 3; alternating K_{2,3} has chi = 3",
                  f"connected bipartite graphs, 2..{nmax} vertices", "estimates equal the claimed values")
    report = AuditReport(claim, grid.as_dict(), seed)
    cases = []
    for g in connected_graphs(nmax, 2):
        if is_bipartite(g):
            cases.append((g, "all_positive", Fraction(2)))
            cases.append((g.all_negative(), "all_negative", Fraction(3)))
    if nmax >= 5:
        cases.append((generate("complete_bipartite", [2, 3], [POS, NEG] * 3), "alternating", Fraction(3)))
    engine.prefetch([g for g, _, _ in cases])
    verdicts = []
    for g, label, value in cases:
        info = {"graph": graph_text(g), "signature": label,
                "balanced": is_balanced(g).holds, "checks": []}
        for first in grid.firsts:
            check = _claim_check(engine, g, engine.chi(g, first), value, "eq", report)
            info["checks"].append(check)
            verdicts.append(check["verdict"])
        report.instances.append(info)
    report.instances_tested = len(cases)
    if nmax >= 4 and 1 in grid.d_values:
        p4 = generate("path", [4])
        solver, naive = engine.winner(p4, 2, 1, SALOME), engine.naive(p4, 2, 1, SALOME)
        report.notes.append(
            f"P4 all-positive at (p, d) = (2, 1), Salome first: solver {_winner(solver)}, naive {_winner(naive)}"
        )
    if REFUTED in verdicts:
        report.notes.append(CONVENTION_GAP)
    return _finish(report, verdicts, t0)


def check_tree_bound(nmax: int, grid: Grid, seed: int = 0, engine: Engine | None = None) -> AuditReport:
    """Trees: chi <= 4 for every signature, with equality claimed whenever a
    negative edge is present."""
    t0 = time.perf_counter()
    engine = engine or Engine(grid)
    rng = _rng("tree-bound", seed)
    claim = Claim("tree-bound", "signed trees: chi(T, sigma) <= 4, with equality if some edge is negative",
                  f"trees, 2..{nmax} vertices", "estimate <= 4; estimate = 4 when a negative edge exists")
    report = AuditReport(claim, grid.as_dict(), seed)
    cases = []
    for t in trees(nmax, 2):
        sigs = {t.signs: "all_positive"}
        sigs.setdefault(t.all_negative().signs, "all_negative")
        sigs.setdefault((NEG,) + (POS,) * (t.m - 1), "one_negative")
        sigs.setdefault(tuple(_random_signs(rng, t.m)), "random")
        cases.extend((t.with_signs(s), label) for s, label in sigs.items())
    engine.prefetch([g for g, _ in cases])
    verdicts = []
    agree = disagree = 0
    for g, label in cases:
        info = {"graph": graph_text(g), "signature": label, "checks": []}
        for first in grid.firsts:
            est = engine.chi(g, first)
            bound = _claim_check(engine, g, est, Fraction(4), "le", report)
            info["checks"].append(bound)
            verdicts.append(bound["verdict"])
            if NEG in g.signs:
                eq = _claim_check(engine, g, est, Fraction(4), "eq", report)
                eq["claim"] = "equality"
                info["checks"].append(eq)
                verdicts.append(eq["verdict"])
                if eq["verdict"] == CONFIRMED:
                    agree += 1
                elif eq["verdict"] == REFUTED:
                    disagree += 1
        report.instances.append(info)
    report.instances_tested = len(cases)
    report.notes.append(f"equality with a negative edge: {agree} agree, {disagree} disagree on the grid")
    k2 = build_graph(2, [(0, 1, POS)])
    for first in grid.firsts:
        plus, minus = engine.chi(k2, first).estimate, engine.chi(k2.negated(), first).estimate
        report.notes.append(f"single edge, {first} first: estimate {plus} positive, {minus} negative")
    return _finish(report, verdicts, t0)


def check_class_count(nmax: int, grid: Grid | None = None, seed: int = 0, engine: Engine | None = None, max_edges: int = 16) -> AuditReport:
    """Brute-force switching orbits against 2**cycle_rank."""
    t0 = time.perf_counter()
    claim = Claim("class-count", "number of switching classes = 2^(|E| - |V| + components)",
                  f"connected graphs, 1..{nmax} vertices", "orbit count equals 2^cycle_rank")
    report = AuditReport(claim, {"max_edges": max_edges}, seed)
    shapes = connected_graphs(min(nmax, 7))
    if nmax >= 6:
        shapes.append(build_graph(6, [(0, 1, POS), (1, 2, POS), (0, 2, POS), (3, 4, POS), (4, 5, POS), (3, 5, POS)]))
    verdicts = []
    for g in shapes:
        if g.m > max_edges:
            report.excluded += 1
            continue
        found, expected = len(enumerate_classes_bruteforce(g, max_edges)), count_switching_classes(g)
        v = CONFIRMED if found == expected else REFUTED
        report.instances.append({"graph": graph_text(g), "classes": found, "expected": expected, "verdict": v})
        if v == REFUTED:
            report.counterexamples.append({"graph": graph_text(g), "classes": found, "expected": expected})
        verdicts.append(v)
    report.instances_tested = len(verdicts)
    return _finish(report, verdicts, t0)


SUITES: dict[str, Callable[..., AuditReport]] = {
    "balanced-equals-unsigned": check_balanced_equals_unsigned,
    "switch-invariance": check_switch_invariance,
    "antibalanced-bound": check_antibalanced_bound,
    "bipartite-bounds": check_bipartite_bounds,
    "tree-bound": check_tree_bound,
    "class-count": check_class_count,
}


def run_suite(
    names: Iterable[str] | None = None,
    nmax: int = 5,
    grid: Grid | None = None,
    seed: int = 0,
    sink: IO[str] | None = None,
    threads: int = 1,
    timing: bool = False,
) -> list[AuditReport]:
    """Run the named suites (all when ``names`` is empty) in registry order,
    writing one JSON line per report to ``sink`` as each finishes."""
    names = list(names or SUITES)
    unknown = [x for x in names if x not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {', '.join(unknown)}; valid: {', '.join(SUITES)}")
    grid = grid or Grid()
    engine = Engine(grid, threads)
    reports = []
    for name in SUITES:
        if name not in names:
            continue
        report = SUITES[name](nmax, grid, seed=seed, engine=engine)
        reports.append(report)
        if sink is not None:
            sink.write(report.to_line(timing) + "\n")
            sink.flush()
    return reports


def any_refuted(reports: Iterable[AuditReport]) -> bool:
    return any(r.verdict == REFUTED for r in reports)
