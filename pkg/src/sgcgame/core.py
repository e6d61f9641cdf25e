"""Signed graphs, walk signs, cycle rank and instance generators.

Vertices are the dense ids ``0..n-1``. A signed edge is a triple
``(u, v, sign)`` with ``sign`` in ``{+1, -1}``; every ``SignedGraph``
stores its edges normalized to ``u < v`` and sorted lexicographically, so
two equal graphs are structurally identical.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

POS = 1
NEG = -1

Edge = tuple[int, int, int]
Walk = Sequence[int]

FAMILIES = ("path", "cycle", "complete", "complete_bipartite", "random_tree")


class GraphError(ValueError):
    """Raised for malformed graphs, walks or generator arguments."""


@dataclass(frozen=True)
class SignedGraph:
    n: int
    edges: tuple[Edge, ...]
    _sign: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_sign", {(u, v): s for u, v, s in self.edges})

    @property
    def m(self) -> int:
        return len(self.edges)

    def sign(self, u: int, v: int) -> int:
        """Sign of edge ``uv``; raises ``GraphError`` if it is not an edge."""
        key = (u, v) if u < v else (v, u)
        try:
            return self._sign[key]
        except KeyError:
            raise GraphError(f"{u}-{v} is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._sign

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ascending tuple of ``(neighbor, sign)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for u, v, s in self.edges:
            adj[u].append((v, s))
            adj[v].append((u, s))
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, v: int) -> list[int]:
        return [u for u, _ in self.adjacency[v]]

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """The unsigned edge set, in normalized order."""
        return tuple((u, v) for u, v, _ in self.edges)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(s for _, _, s in self.edges)

    @property
    def positive_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, s in self.edges if s == POS]

    @property
    def negative_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, s in self.edges if s == NEG]

    def with_signs(self, signs: Sequence[int]) -> SignedGraph:
        """Same underlying graph, new signature given in normalized edge order."""
        if len(signs) != self.m:
            raise GraphError(f"expected {self.m} signs, got {len(signs)}")
        if not all(s == POS or s == NEG for s in signs):
            raise GraphError("signs must be +1 or -1")
        # pairs are already validated and normalized
        return SignedGraph(self.n, tuple((u, v, int(s)) for (u, v, _), s in zip(self.edges, signs)))

    def negated(self) -> SignedGraph:
        return self.with_signs([-s for s in self.signs])

    def all_positive(self) -> SignedGraph:
        return self.with_signs([POS] * self.m)

    def all_negative(self) -> SignedGraph:
        return self.with_signs([NEG] * self.m)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        for u, v, s in self.edges:
            g.add_edge(u, v, sign=s)
        return g


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> SignedGraph:
    """Validate and normalize a signed edge list.

    Rejects negative ``n``, signs other than +1/-1, self-loops, endpoints
    outside ``[0, n)`` and repeated unordered pairs (whatever their signs).
    """
    if n < 0:
        raise GraphError(f"vertex count must be >= 0, got {n}")
    seen: dict[tuple[int, int], int] = {}
    for e in edges:
        u, v, s = (int(x) for x in e)
        if s not in (POS, NEG):
            raise GraphError(f"edge {u}-{v}: sign must be +1 or -1, got {s}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        for x in (u, v):
            if not 0 <= x < n:
                raise GraphError(f"edge {u}-{v}: vertex {x} out of range [0, {n})")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphError(f"duplicate edge {key[0]}-{key[1]}")
        seen[key] = s
    return SignedGraph(n, tuple(sorted((u, v, s) for (u, v), s in seen.items())))


def walk_sign(g: SignedGraph, walk: Walk) -> int:
    """Product of the edge signs along ``walk``; +1 for a single vertex."""
    if len(walk) == 0:
        raise GraphError("a walk needs at least one vertex")
    for x in walk:
        if not 0 <= x < g.n:
            raise GraphError(f"walk vertex {x} out of range [0, {g.n})")
    sign = POS
    for u, v in zip(walk, walk[1:]):
        sign *= g.sign(u, v)
    return sign


def components(g: SignedGraph) -> list[list[int]]:
    """Connected components, each ascending, ordered by smallest vertex."""
    comp = [-1] * g.n
    out: list[list[int]] = []
    for root in range(g.n):
        if comp[root] >= 0:
            continue
        comp[root] = len(out)
        stack, members = [root], [root]
        while stack:
            x = stack.pop()
            for y, _ in g.adjacency[x]:
                if comp[y] < 0:
                    comp[y] = len(out)
                    stack.append(y)
                    members.append(y)
        out.append(sorted(members))
    return out


def is_connected(g: SignedGraph) -> bool:
    return len(components(g)) <= 1


def cycle_rank(g: SignedGraph) -> int:
    return g.m - g.n + len(components(g))


def is_bipartite(g: SignedGraph) -> bool:
    side = [-1] * g.n
    for root in range(g.n):
        if side[root] >= 0:
            continue
        side[root] = 0
        stack = [root]
        while stack:
            x = stack.pop()
            for y, _ in g.adjacency[x]:
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    stack.append(y)
                elif side[y] == side[x]:
                    return False
    return True


def is_forest(g: SignedGraph) -> bool:
    return cycle_rank(g) == 0


# -- generators --------------------------------------------------------------


def _family_pairs(family: str, sizes: Sequence[int], rng: random.Random) -> tuple[int, list[tuple[int, int]]]:
    def need(k: int) -> None:
        if len(sizes) != k:
            raise GraphError(f"{family} takes {k} size parameter(s), got {len(sizes)}")

    if family == "path":
        need(1)
        (n,) = sizes
        if n < 1:
            raise GraphError("path needs n >= 1")
        return n, [(i, i + 1) for i in range(n - 1)]
    if family == "cycle":
        need(1)
        (n,) = sizes
        if n < 3:
            raise GraphError("cycle needs n >= 3")
        return n, [(i, (i + 1) % n) for i in range(n)]
    if family == "complete":
        need(1)
        (n,) = sizes
        if n < 1:
            raise GraphError("complete graph needs n >= 1")
        return n, [(i, j) for i in range(n) for j in range(i + 1, n)]
    if family == "complete_bipartite":
        need(2)
        a, b = sizes
        if a < 1 or b < 1:
            raise GraphError("complete_bipartite needs both parts >= 1")
        return a + b, [(i, a + j) for i in range(a) for j in range(b)]
    if family == "random_tree":
        need(1)
        (n,) = sizes
        if n < 1:
            raise GraphError("random_tree needs n >= 1")
        if n <= 2:
            return n, [(0, 1)] if n == 2 else []
        prufer = [rng.randrange(n) for _ in range(n - 2)]
        t = nx.from_prufer_sequence(prufer)
        return n, sorted((min(u, v), max(u, v)) for u, v in t.edges())
    raise GraphError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def generate(
    family: str,
    sizes: Sequence[int],
    signature: str | Sequence[int] = "all_positive",
    seed: int | None = None,
) -> SignedGraph:
    """Build a member of a standard family with the requested signature.

    Edge order, which a pattern ``signature`` follows, is family specific:
    consecutive ``(i, i+1)`` for paths and cycles (the cycle's closing edge
    ``(n-1, 0)`` last), lexicographic for complete and complete bipartite
    graphs (parts ``0..a-1`` and ``a..a+b-1``), and normalized edge order for
    random trees. ``signature`` is ``"all_positive"``, ``"all_negative"``,
    ``"random"`` or an explicit sequence of +1/-1. A single
    ``random.Random(seed)`` drives both the tree shape and random signs.
    """
    rng = random.Random(seed)
    n, pairs = _family_pairs(family, list(sizes), rng)
    if isinstance(signature, str):
        if signature == "all_positive":
            signs = [POS] * len(pairs)
        elif signature == "all_negative":
            signs = [NEG] * len(pairs)
        elif signature == "random":
            signs = [rng.choice((POS, NEG)) for _ in pairs]
        else:
            raise GraphError(f"unknown signature {signature!r}")
    else:
        signs = list(signature)
        if len(signs) != len(pairs):
            raise GraphError(f"pattern has {len(signs)} signs but {family} has {len(pairs)} edges")
    return build_graph(n, [(u, v, s) for (u, v), s in zip(pairs, signs)])


def from_networkx(h: nx.Graph, sign: int = POS) -> SignedGraph:
    """Relabel ``h`` to ``0..n-1`` (sorted node order) with a uniform sign."""
    index = {x: i for i, x in enumerate(sorted(h.nodes()))}
    return build_graph(len(index), [(index[u], index[v], sign) for u, v in h.edges()])


def connected_graphs(max_n: int, min_n: int = 1) -> list[SignedGraph]:
    """All connected graphs with ``min_n..max_n`` vertices up to isomorphism.

    Drawn from the networkx graph atlas (which stops at 7 vertices), in
    atlas order; every edge is positive.
    """
    if max_n > 7:
        raise GraphError("the graph atlas only covers up to 7 vertices")
    out = []
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if min_n <= k <= max_n and k > 0 and nx.is_connected(h):
            out.append(from_networkx(h))
    return out


def trees(max_n: int, min_n: int = 1) -> list[SignedGraph]:
    return [g for g in connected_graphs(max_n, min_n) if g.m == g.n - 1]


def signatures_up_to_isomorphism(g: SignedGraph) -> list[SignedGraph]:
    """One signature of ``g``'s underlying graph per orbit under the graph's
    automorphisms, smallest negative-edge mask first.

    Isomorphic signed graphs only differ by vertex names, so this is the
    exhaustive family of signed graphs on a given shape.
    """
    from networkx.algorithms.isomorphism import GraphMatcher

    h = nx.Graph(g.pairs)
    h.add_nodes_from(range(g.n))
    index = {e: i for i, e in enumerate(g.pairs)}
    perms = []
    for a in GraphMatcher(h, h).isomorphisms_iter():
        perms.append([index[(min(a[u], a[v]), max(a[u], a[v]))] for u, v in g.pairs])
    seen: set[int] = set()
    out = []
    for mask in range(1 << g.m):
        if mask in seen:
            continue
        for perm in perms:
            seen.add(sum(1 << perm[i] for i in range(g.m) if mask >> i & 1))
        out.append(g.with_signs([NEG if mask >> i & 1 else POS for i in range(g.m)]))
    return out
