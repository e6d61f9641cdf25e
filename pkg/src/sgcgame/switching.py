"""Switching, balance classification and canonical forms of signed graphs.

Everything here rests on one deterministic spanning forest: a BFS from the
lowest vertex of each component, scanning neighbors in ascending order.
Labeling that forest with ``zeta(child) = zeta(parent) * sign(parent, child)``
switches every forest edge positive; the leftover signs on the co-tree edges
are the signs of the fundamental cycles and name the switching class.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import NEG, POS, GraphError, SignedGraph, build_graph, cycle_rank

BALANCED = "balanced"
ANTIBALANCED = "antibalanced"
BOTH = "both"
UNBALANCED = "unbalanced"

DEFAULT_MAX_EDGES = 16


@dataclass(frozen=True)
class BalanceVerdict:
    """Outcome of a balance (or antibalance) test.

    ``holds`` answers the question that was asked; ``classification`` is the
    graph's overall class. Exactly one of ``switching`` (a vertex set whose
    switch reaches the target form) and ``cycle`` (a closed vertex walk with
    the wrong sign) is set.
    """

    classification: str
    holds: bool
    switching: frozenset[int] | None = None
    cycle: tuple[int, ...] | None = None


@dataclass(frozen=True)
class CanonicalForm:
    forest: tuple[tuple[int, int], ...]
    graph: SignedGraph
    switching: frozenset[int]
    cotree_edges: tuple[tuple[int, int], ...]
    cotree_signs: tuple[int, ...]


def _check_subset(g: SignedGraph, subset: Iterable[int]) -> frozenset[int]:
    u = frozenset(subset)
    for x in u:
        if not 0 <= x < g.n:
            raise GraphError(f"switching vertex {x} out of range [0, {g.n})")
    return u


def switch(g: SignedGraph, subset: Iterable[int]) -> SignedGraph:
    """Negate every edge with exactly one endpoint in ``subset``."""
    u = _check_subset(g, subset)
    return g.with_signs([-s if (a in u) != (b in u) else s for a, b, s in g.edges])


def zeta_of(n: int, subset: Iterable[int]) -> list[int]:
    u = set(subset)
    return [NEG if v in u else POS for v in range(n)]


# -- the spanning forest -----------------------------------------------------


@dataclass(frozen=True)
class _Forest:
    parent: tuple[int, ...]  # -1 at roots
    depth: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # normalized, sorted

    def path(self, a: int, b: int) -> list[int]:
        """Vertex sequence of the forest path from ``a`` to ``b``."""
        left, right = [a], [b]
        x, y = a, b
        while self.depth[x] > self.depth[y]:
            x = self.parent[x]
            left.append(x)
        while self.depth[y] > self.depth[x]:
            y = self.parent[y]
            right.append(y)
        while x != y:
            x, y = self.parent[x], self.parent[y]
            if x < 0 or y < 0:
                raise GraphError(f"{a} and {b} lie in different trees")
            left.append(x)
            right.append(y)
        return left + right[-2::-1]


def _bfs_forest(n: int, adjacency: Sequence[Sequence[int]]) -> _Forest:
    parent = [-1] * n
    depth = [-1] * n
    edges = []
    for root in range(n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adjacency[x]:
                if depth[y] < 0:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    edges.append((min(x, y), max(x, y)))
                    queue.append(y)
    return _Forest(tuple(parent), tuple(depth), tuple(sorted(edges)))


def spanning_forest(g: SignedGraph) -> tuple[tuple[int, int], ...]:
    """Edges of the deterministic BFS spanning forest, normalized and sorted."""
    return _forest(g).edges


def _forest(g: SignedGraph) -> _Forest:
    return _bfs_forest(g.n, [[y for y, _ in nb] for nb in g.adjacency])


def _forest_labeling(g: SignedGraph, f: _Forest, signs: dict[tuple[int, int], int]) -> list[int]:
    """zeta making every forest edge positive under ``signs``; roots get +1."""
    zeta = [POS] * g.n
    for v in sorted(range(g.n), key=lambda v: f.depth[v]):
        p = f.parent[v]
        if p >= 0:
            zeta[v] = zeta[p] * signs[(min(p, v), max(p, v))]
    return zeta


def normalize_cycle(walk: Sequence[int]) -> tuple[int, ...]:
    """Rotate a closed walk to start at its smallest vertex, then pick the
    direction whose second vertex is smaller."""
    cyc = list(walk[:-1])
    i = cyc.index(min(cyc))
    rot = cyc[i:] + cyc[:i]
    back = [rot[0]] + rot[1:][::-1]
    best = min(rot, back)
    return tuple(best + [best[0]])


def _balance(g: SignedGraph, flip: int) -> tuple[list[int], tuple[int, ...] | None]:
    f = _forest(g)
    signs = {(u, v): s * flip for u, v, s in g.edges}
    zeta = _forest_labeling(g, f, signs)
    tree = set(f.edges)
    for u, v, s in g.edges:
        if (u, v) not in tree and zeta[u] * s * flip * zeta[v] == NEG:
            return zeta, normalize_cycle([u] + f.path(v, u))
    return zeta, None


def classify(g: SignedGraph) -> str:
    bal = _balance(g, POS)[1] is None
    anti = _balance(g, NEG)[1] is None
    if bal and anti:
        return BOTH
    if bal:
        return BALANCED
    if anti:
        return ANTIBALANCED
    return UNBALANCED


def is_balanced(g: SignedGraph) -> BalanceVerdict:
    """Harary balance test in O(|V| + |E|).

    On success the witness switches ``g`` to all-positive; on failure it is a
    negative cycle.
    """
    zeta, bad = _balance(g, POS)
    if bad is None:
        return BalanceVerdict(classify(g), True, switching=frozenset(v for v in range(g.n) if zeta[v] == NEG))
    return BalanceVerdict(classify(g), False, cycle=bad)


def is_antibalanced(g: SignedGraph) -> BalanceVerdict:
    """Balance of ``g`` with every sign negated.

    On success, switching ``g`` by the witness yields all-negative. On
    failure the witness cycle ``C`` has sign ``-(-1)^len(C)`` in ``g``.
    """
    zeta, bad = _balance(g, NEG)
    if bad is None:
        return BalanceVerdict(classify(g), True, switching=frozenset(v for v in range(g.n) if zeta[v] == NEG))
    return BalanceVerdict(classify(g), False, cycle=bad)


def canonicalize(g: SignedGraph) -> CanonicalForm:
    f = _forest(g)
    zeta = _forest_labeling(g, f, g._sign)
    star = build_graph(g.n, [(u, v, zeta[u] * s * zeta[v]) for u, v, s in g.edges])
    tree = set(f.edges)
    cotree = tuple((u, v) for u, v, _ in star.edges if (u, v) not in tree)
    return CanonicalForm(
        forest=f.edges,
        graph=star,
        switching=frozenset(v for v in range(g.n) if zeta[v] == NEG),
        cotree_edges=cotree,
        cotree_signs=tuple(star.sign(u, v) for u, v in cotree),
    )


def fundamental_cycles(g: SignedGraph, forest: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """One closed walk per co-tree edge ``(u, v)``, in normalized edge order:
    ``u``, then ``v``, then the forest path back to ``u``."""
    t = sorted({(min(a, b), max(a, b)) for a, b in forest})
    for a, b in t:
        if not g.has_edge(a, b):
            raise GraphError(f"forest edge {a}-{b} is not an edge of the graph")
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for a, b in t:
        adj[a].append(b)
        adj[b].append(a)
    f = _bfs_forest(g.n, [sorted(x) for x in adj])
    if len(f.edges) != len(t):
        raise GraphError("forest contains a cycle")
    if len(t) != g.m - cycle_rank(g):
        raise GraphError("forest does not span every component")
    tree = set(t)
    return [tuple([u] + f.path(v, u)) for u, v in g.pairs if (u, v) not in tree]


def _same_underlying(g1: SignedGraph, g2: SignedGraph) -> None:
    if g1.n != g2.n or g1.pairs != g2.pairs:
        raise GraphError("signatures must share one underlying graph")


def _cotree_signs(g: SignedGraph, f: _Forest) -> tuple[int, ...]:
    zeta = _forest_labeling(g, f, g._sign)
    tree = set(f.edges)
    return tuple(zeta[u] * s * zeta[v] for u, v, s in g.edges if (u, v) not in tree)


def switching_equivalent(g1: SignedGraph, g2: SignedGraph) -> bool:
    """Equal co-tree sign vectors over the shared deterministic forest."""
    _same_underlying(g1, g2)
    f = _forest(g1)
    return _cotree_signs(g1, f) == _cotree_signs(g2, f)


def count_switching_classes(g: SignedGraph) -> int:
    """Exact ``2**cycle_rank``; Python integers do not wrap."""
    return 2 ** cycle_rank(g)


def _cut_masks(g: SignedGraph) -> list[int]:
    """Edge-flip mask (bit i = edge i) of every one of the 2**n switchings."""
    star = [0] * g.n
    for i, (u, v) in enumerate(g.pairs):
        star[u] |= 1 << i
        star[v] |= 1 << i
    cuts = [0] * (1 << g.n)
    for subset in range(1, 1 << g.n):
        low = subset & -subset
        cuts[subset] = cuts[subset ^ low] ^ star[low.bit_length() - 1]
    return cuts


def _mask_signs(mask: int, m: int) -> tuple[int, ...]:
    return tuple(NEG if mask >> i & 1 else POS for i in range(m))


def enumerate_classes_bruteforce(g: SignedGraph, max_edges: int = DEFAULT_MAX_EDGES) -> list[list[tuple[int, ...]]]:
    """Partition all ``2**m`` signatures on ``g``'s underlying graph into
    switching orbits by trying every vertex subset.

    Signatures are sign tuples in normalized edge order. Each class is sorted
    descending (all-positive first) and classes are ordered by their first
    member, so the output does not depend on iteration order.
    """
    if g.m > max_edges:
        raise GraphError(f"{g.m} edges exceeds the enumeration bound of {max_edges}")
    cuts = _cut_masks(g)
    seen = bytearray(1 << g.m)
    classes = []
    for mask in range(1 << g.m):
        if seen[mask]:
            continue
        orbit = {mask ^ c for c in cuts}
        for x in orbit:
            seen[x] = 1
        classes.append(sorted((_mask_signs(x, g.m) for x in orbit), reverse=True))
    classes.sort(key=lambda c: c[0], reverse=True)
    return classes
