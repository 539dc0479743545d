"""Shared brute-force oracles and random instance helpers for the tests."""

import itertools
import math
import random

import pytest

from monochrome.graph_core import ColouredGraph, SimpleGraph


def random_simple(rng, n, p=None):
    p = rng.random() if p is None else p
    return SimpleGraph(n, [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def random_coloured(rng, n, p=None, colours=2):
    p = rng.random() if p is None else p
    edges = [(u, v, rng.randrange(colours)) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return ColouredGraph(n, edges)


def adj_sets(adj):
    return [{v for v in range(len(adj)) if a >> v & 1} for a in adj]


def brute_stable_sets(adj):
    """All stable sets by trying every subset."""
    n = len(adj)
    nb = adj_sets(adj)
    out = []
    for r in range(n + 1):
        for s in itertools.combinations(range(n), r):
            if all(v not in nb[u] for u, v in itertools.combinations(s, 2)):
                out.append(frozenset(s))
    return out


def brute_nbhd(adj, s):
    nb = adj_sets(adj)
    return set().union(*(nb[v] for v in s)) if s else set()


def brute_robust_ok(adj, gamma):
    """Every non-empty stable S has |N(S)| >= |S| + ceil(gamma n)."""
    k = math.ceil(gamma * len(adj))
    return all(len(brute_nbhd(adj, s)) >= len(s) + k for s in brute_stable_sets(adj) if s)


def brute_hamiltonian(adj, vertices):
    vs = sorted(vertices)
    if len(vs) < 3:
        return False
    first, rest = vs[0], vs[1:]
    for perm in itertools.permutations(rest):
        if perm[0] > perm[-1]:
            continue
        seq = (first,) + perm
        if all(adj[seq[i]] >> seq[(i + 1) % len(seq)] & 1 for i in range(len(seq))):
            return True
    return False


def brute_is_mono_cycle(g, colour, vs):
    vs = list(vs)
    if len(vs) <= 1:
        return True
    row = g.colour_adj(colour)
    if len(vs) == 2:
        return bool(row[vs[0]] >> vs[1] & 1)
    return brute_hamiltonian(row, vs)


def brute_min_partition(g, k_max):
    """Smallest k <= k_max by enumerating set partitions (restricted growth strings)."""
    n = g.n
    if n == 0:
        return 0
    for k in range(1, k_max + 1):
        for lab in itertools.product(range(k), repeat=n):
            if any(lab[i] > max(lab[:i], default=-1) + 1 for i in range(n)):
                continue
            groups = [[v for v in range(n) if lab[v] == j] for j in range(k)]
            if all(any(brute_is_mono_cycle(g, c, gr) for c in range(g.num_colours)) for gr in groups):
                return k
    return None


def union_find_components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(s) for s in groups.values()), key=min)


@pytest.fixture
def rng():
    return random.Random(20240601)


# acceptance criteria report: one line per criterion in the terminal summary
ACCEPTANCE = {}


def record(number, passed, detail):
    ACCEPTANCE[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")
