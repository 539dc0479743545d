import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_nbhd, brute_robust_ok, brute_stable_sets, random_simple
from monochrome.errors import InstanceTooLarge
from monochrome.graph_core import SimpleGraph
from monochrome.two_matching import (
    TwoMatching,
    check_witness,
    perfect_2_matching,
    robust_threshold,
    robust_tutte,
    tutte_condition,
)


def cycle(n):
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    return SimpleGraph(10, outer + [(i, i + 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])


@st.composite
def simple_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph(n, [e for e, k in zip(pairs, keep) if k])


def brute_tutte_ok(adj):
    return all(len(brute_nbhd(adj, s)) >= len(s) for s in brute_stable_sets(adj))


def test_tutte_examples():
    assert tutte_condition(cycle(4)) is None
    w = tutte_condition(SimpleGraph(3, [(0, 1), (1, 2)]))
    assert w.stable_set == {0, 2} and w.neighbourhood == {1} and w.deficiency == 1
    assert tutte_condition(petersen()) is None
    assert brute_tutte_ok(petersen().adj)


def test_two_matching_examples():
    c5 = perfect_2_matching(cycle(5))
    assert len(c5.parts) == 1 and set(c5.omega().values()) == {1}
    e = perfect_2_matching(SimpleGraph(2, [(0, 1)]))
    assert e.single_edges == [(0, 1)] and e.omega() == {(0, 1): 2}
    k4 = SimpleGraph(4, itertools.combinations(range(4), 2))
    m = perfect_2_matching(k4)
    assert m.is_valid_for(k4)


def test_two_matching_json_round_trip():
    g = SimpleGraph(7, [(0, 1), (2, 3), (3, 4), (4, 2), (5, 6)])
    m = perfect_2_matching(g)
    assert m is not None
    back = TwoMatching.from_json(m.to_json())
    assert back.is_valid_for(g) and sorted(back.edges()) == sorted(m.edges())


def test_robust_examples():
    assert robust_tutte(SimpleGraph(6, itertools.combinations(range(6), 2)), Fraction(1, 2)) is None
    w = robust_tutte(cycle(6), Fraction(1, 6))
    assert w.stable_set in ({0, 2, 4}, {1, 3, 5}) and len(w.neighbourhood) == 3 and w.deficiency == 1
    assert check_witness(cycle(6), w, Fraction(1, 6))


def test_threshold_is_ceiling():
    assert robust_threshold(Fraction(1, 10), 20) == 2
    assert robust_threshold(Fraction(1, 10), 21) == 3
    assert robust_threshold(0.1, 10) == 1  # float read exactly as 1/10


def test_node_budget(monkeypatch):
    g = cycle(16)
    with pytest.raises(InstanceTooLarge):
        robust_tutte(g, Fraction(1, 4), budget=5)
    monkeypatch.setenv("MONOCHROME_NODE_BUDGET", "5")
    with pytest.raises(InstanceTooLarge):
        robust_tutte(g, Fraction(1, 4))


@settings(max_examples=300, deadline=None)
@given(simple_graphs())
def test_equivalence_property(g):
    m = perfect_2_matching(g)
    w = tutte_condition(g)
    assert (m is None) == (w is not None)
    assert (m is not None) == brute_tutte_ok(g.adj)
    if m is not None:
        assert m.is_valid_for(g)
        load = [0] * g.n
        for (u, v), x in m.omega().items():
            load[u] += x
            load[v] += x
        assert load == [2] * g.n
    else:
        assert check_witness(g, w, 0)


@settings(max_examples=200, deadline=None)
@given(simple_graphs(max_n=10), st.sampled_from([Fraction(0), Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)]))
def test_robust_matches_brute_force(g, gamma):
    w = robust_tutte(g, gamma)
    assert (w is None) == brute_robust_ok(g.adj, gamma)
    if w is not None:
        assert check_witness(g, w, gamma)
        # maximum deficiency among all stable sets
        k = robust_threshold(gamma, g.n)
        best = max(len(s) + k - len(brute_nbhd(g.adj, s)) for s in brute_stable_sets(g.adj) if s)
        assert w.deficiency == best


def test_robust_zero_agrees_with_tutte_off_empty_set():
    rng = random.Random(3)
    for _ in range(500):
        g = random_simple(rng, rng.randint(1, 9))
        assert (robust_tutte(g, 0) is None) == (tutte_condition(g) is None)


def test_robust_dense_n20_against_enumeration():
    rng = random.Random(17)
    done = 0
    while done < 3:
        g = random_simple(rng, 20, p=0.8)
        if g.min_degree() < 14:
            continue
        done += 1
        k = robust_threshold(Fraction(1, 10), 20)
        # unpruned enumeration of all stable sets (dense graph keeps this small)
        adj = g.adj
        ok = True
        stack = [(0, (1 << 20) - 1)]
        while stack:
            s, cand = stack.pop()
            if s:
                nb = 0
                for v in range(20):
                    if s >> v & 1:
                        nb |= adj[v]
                if nb.bit_count() < s.bit_count() + k:
                    ok = False
            for v in range(20):
                if cand >> v & 1:
                    stack.append((s | 1 << v, cand & ~adj[v] & ~((1 << (v + 1)) - 1)))
        assert (robust_tutte(g, Fraction(1, 10)) is None) == ok
