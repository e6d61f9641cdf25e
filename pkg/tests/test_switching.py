import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_subsets, product_sign, simple_cycles
from sgcgame.core import NEG, POS, GraphError, build_graph, cycle_rank, generate, walk_sign
from sgcgame.switching import (
    ANTIBALANCED,
    BALANCED,
    BOTH,
    UNBALANCED,
    canonicalize,
    classify,
    count_switching_classes,
    enumerate_classes_bruteforce,
    fundamental_cycles,
    is_antibalanced,
    is_balanced,
    spanning_forest,
    switch,
    switching_equivalent,
)
from test_core import signed_graphs

TRI = generate("cycle", [3], [POS, POS, NEG])  # edges 01+, 12+, 02-


def orbit_classes(g):
    """Switching classes straight from the definition: apply every subset."""
    left = {tuple(s) for s in itertools.product((POS, NEG), repeat=g.m)}
    classes = []
    while left:
        sig = max(left)
        orbit = {switch(g.with_signs(sig), u).signs for u in all_subsets(g.n)}
        left -= orbit
        classes.append(orbit)
    return classes


# -- switch -------------------------------------------------------------------


def test_switch_examples():
    assert switch(TRI, []) == TRI
    assert switch(TRI, range(3)) == TRI
    out = switch(TRI, {0})
    assert (out.sign(0, 1), out.sign(1, 2), out.sign(0, 2)) == (NEG, POS, POS)
    with pytest.raises(GraphError):
        switch(TRI, {3})


@given(signed_graphs(), st.data())
def test_switch_is_involution_and_keeps_cycle_signs(g, data):
    u = data.draw(st.sets(st.integers(0, g.n - 1)))
    h = switch(g, u)
    assert switch(h, u) == g
    assert h.pairs == g.pairs
    for c in simple_cycles(g):
        assert walk_sign(h, c) == walk_sign(g, c)


# -- balance ------------------------------------------------------------------


def test_balance_examples():
    for seed in range(5):
        t = generate("random_tree", [7], "random", seed=seed)
        assert is_balanced(t).classification == BOTH
        assert is_antibalanced(t).holds
    v = is_balanced(TRI)
    assert not v.holds
    assert v.cycle == (0, 1, 2, 0) and walk_sign(TRI, v.cycle) == NEG
    c4 = generate("cycle", [4], [NEG, POS, NEG, POS])
    v = is_balanced(c4)
    assert v.holds and set(switch(c4, v.switching).signs) == {POS}


def test_antibalance_examples():
    assert is_antibalanced(generate("cycle", [5], "all_negative")).holds
    # all-negative C4 negates to all-positive C4, which is balanced
    c4 = generate("cycle", [4], "all_negative")
    assert is_balanced(c4).holds
    assert is_antibalanced(c4).holds
    assert classify(c4) == BOTH
    assert not is_antibalanced(generate("cycle", [4], [NEG, POS, POS, POS])).holds


def test_classify_examples():
    assert classify(generate("path", [3], [POS, NEG])) == BOTH
    assert classify(generate("cycle", [3])) == BALANCED
    assert classify(generate("cycle", [3], "all_negative")) == ANTIBALANCED
    k4 = generate("complete", [4], [NEG] + [POS] * 5)
    tri_signs = {product_sign(k4, c) for c in simple_cycles(k4) if len(c) == 4}
    assert tri_signs == {POS, NEG}
    assert classify(k4) == UNBALANCED


def test_is_antibalanced_is_balance_of_negation():
    rng = random.Random(3)
    for _ in range(200):
        g = generate("complete", [5], "random", seed=rng.randrange(10**6))
        assert is_antibalanced(g).holds == is_balanced(g.negated()).holds


@given(signed_graphs())
def test_balance_matches_cycle_enumeration(g):
    negative = [c for c in simple_cycles(g) if walk_sign(g, c) == NEG]
    v = is_balanced(g)
    assert v.holds == (not negative)
    if v.holds:
        assert set(switch(g, v.switching).signs) <= {POS}
    else:
        assert v.cycle in negative


@given(signed_graphs())
def test_antibalance_witnesses(g):
    v = is_antibalanced(g)
    if v.holds:
        assert set(switch(g, v.switching).signs) <= {NEG}
        assert set(switch(g.negated(), v.switching).signs) <= {POS}
    else:
        c = v.cycle
        assert walk_sign(g, c) == -((-1) ** (len(c) - 1))


@given(signed_graphs())
def test_both_means_switchable_to_either_uniform_signature(g):
    both = classify(g) == BOTH
    assert both == (is_balanced(g).holds and is_balanced(g.negated()).holds)
    if cycle_rank(g) == 0:
        assert both


# -- canonical form and fundamental cycles ------------------------------------


def test_canonical_examples():
    t = generate("random_tree", [6], "random", seed=4)
    cf = canonicalize(t)
    assert cf.cotree_signs == () and set(cf.graph.signs) == {POS}
    for sig in itertools.permutations([POS, POS, NEG]):
        assert canonicalize(generate("cycle", [3], list(sig))).cotree_signs == (NEG,)
    assert set(canonicalize(switch(generate("complete", [5]), {1, 3})).cotree_signs) == {POS}


@given(signed_graphs())
def test_canonical_form_properties(g):
    cf = canonicalize(g)
    assert all(cf.graph.sign(u, v) == POS for u, v in cf.forest)
    assert len(cf.cotree_signs) == cycle_rank(g)
    assert switch(g, cf.switching) == cf.graph
    cycles = fundamental_cycles(g, cf.forest)
    assert tuple(walk_sign(g, c) for c in cycles) == cf.cotree_signs


def test_forest_is_bfs_from_lowest_vertex():
    # K4: BFS from 0 takes the star at 0
    assert spanning_forest(generate("complete", [4])) == ((0, 1), (0, 2), (0, 3))
    two = build_graph(5, [(0, 1, 1), (3, 4, 1), (2, 4, 1), (2, 3, 1)])
    assert spanning_forest(two) == ((0, 1), (2, 3), (2, 4))


def test_fundamental_cycles_examples():
    c5 = generate("cycle", [5])
    (cyc,) = fundamental_cycles(c5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert cyc == (0, 4, 3, 2, 1, 0)
    k4 = generate("complete", [4])
    cycles = fundamental_cycles(k4, [(0, 1), (1, 2), (2, 3)])
    assert len(cycles) == 3 and all(c[0] == c[-1] for c in cycles)
    t = generate("path", [5])
    assert fundamental_cycles(t, t.pairs) == []


def test_fundamental_cycles_rejects_bad_forests():
    k4 = generate("complete", [4])
    with pytest.raises(GraphError, match="cycle"):
        fundamental_cycles(k4, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(GraphError, match="span"):
        fundamental_cycles(k4, [(0, 1), (1, 2)])
    with pytest.raises(GraphError, match="not an edge"):
        fundamental_cycles(generate("cycle", [4]), [(0, 2), (0, 1), (2, 3)])


# -- equivalence and counting -------------------------------------------------


def test_equivalence_examples():
    assert switching_equivalent(generate("cycle", [4]), generate("cycle", [4], [NEG, NEG, POS, POS]))
    assert not switching_equivalent(generate("cycle", [3]), TRI)
    t = generate("random_tree", [7], seed=2)
    assert switching_equivalent(t, t.with_signs([NEG, POS, NEG, NEG, POS, NEG]))
    with pytest.raises(GraphError):
        switching_equivalent(generate("cycle", [4]), generate("path", [4]))


@given(signed_graphs(), st.data())
def test_equivalence_is_an_equivalence_relation(g, data):
    def sig():
        return g.with_signs(data.draw(st.lists(st.sampled_from((POS, NEG)), min_size=g.m, max_size=g.m)))

    a, b, c = sig(), sig(), sig()
    assert switching_equivalent(a, a)
    assert switching_equivalent(a, b) == switching_equivalent(b, a)
    if switching_equivalent(a, b) and switching_equivalent(b, c):
        assert switching_equivalent(a, c)


def test_equivalence_matches_orbit_search():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 7)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
        g = build_graph(n, [(u, v, rng.choice((POS, NEG))) for u, v in pairs])
        h = switch(g, [v for v in range(n) if rng.random() < 0.5]) if rng.random() < 0.5 else g.with_signs(
            [rng.choice((POS, NEG)) for _ in pairs])
        brute = any(switch(g, u) == h for u in all_subsets(n))
        assert switching_equivalent(g, h) == brute


def test_count_examples():
    assert count_switching_classes(generate("random_tree", [6], seed=0)) == 1
    assert count_switching_classes(generate("cycle", [3])) == 2
    assert count_switching_classes(generate("complete", [4])) == 8
    assert count_switching_classes(generate("complete", [30])) == 2 ** (435 - 29)


@pytest.mark.parametrize(
    "g, sizes",
    [
        (generate("cycle", [3]), [4, 4]),
        (generate("path", [3]), [4]),
        (generate("cycle", [4]), [8, 8]),
    ],
    ids=["C3", "P3", "C4"],
)
def test_bruteforce_class_examples(g, sizes):
    assert sorted(len(c) for c in orbit_classes(g)) == sizes
    classes = enumerate_classes_bruteforce(g)
    assert sorted(len(c) for c in classes) == sizes
    assert sorted(map(frozenset, classes), key=sorted) == sorted(map(frozenset, orbit_classes(g)), key=sorted)


def test_bruteforce_bound():
    with pytest.raises(GraphError, match="bound"):
        enumerate_classes_bruteforce(generate("complete", [7]))
    assert len(enumerate_classes_bruteforce(generate("complete", [6]), max_edges=15)) == 2**10


def test_bruteforce_output_is_canonical():
    g = generate("complete", [4])
    a = enumerate_classes_bruteforce(g)
    assert a == enumerate_classes_bruteforce(g.all_negative())
    assert a[0][0] == (POS,) * 6
    assert sum(len(c) for c in a) == 2**6
