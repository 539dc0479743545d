"""Deterministic instance constructions: tightness examples, extremal colourings, random graphs."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import InfeasibleParameters
from .graph_core import BLUE, GREEN, RED, ColouredGraph, ColouredMultiGraph
from .two_matching import as_fraction


def _clique(vs, colour):
    vs = list(vs)
    return [(vs[i], vs[j], colour) for i in range(len(vs)) for j in range(i + 1, len(vs))]


def _complete(xs, ys, colour):
    return [(x, y, colour) for x in xs for y in ys]


def gen_sharpness(m: int, inner_colour: int = RED) -> ColouredGraph:
    """Three cliques K, K', K'' plus two apex vertices a, b on 3m+6 vertices.

    Vertices 0..m+1 form K (red), m+2..2m+3 form K' (blue), 2m+4..3m+3
    form K'' (``inner_colour``); a = 3m+4 and b = 3m+5.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if inner_colour not in (RED, BLUE):
        raise ValueError("inner colour must be red or blue")
    k = range(0, m + 2)
    k1 = range(m + 2, 2 * m + 4)
    k2 = range(2 * m + 4, 3 * m + 4)
    a, b = 3 * m + 4, 3 * m + 5
    edges = _clique(k, RED) + _clique(k1, BLUE) + _clique(k2, inner_colour)
    edges += _complete(k, k2, BLUE) + _complete(k1, k2, RED)
    edges += [(a, v, BLUE) for v in (*k, *k2)]
    edges += [(b, v, RED) for v in (*k1, *k2)]
    return ColouredGraph(3 * m + 6, edges)


def gen_three_colour(m: int) -> ColouredGraph:
    """Four sets A, B, C, D of sizes m+2, m, m+2, m+1 coloured with three colours."""
    if m < 1:
        raise ValueError("m must be at least 1 (B would be empty)")
    a = range(0, m + 2)
    b = range(m + 2, 2 * m + 2)
    c = range(2 * m + 2, 3 * m + 4)
    d = range(3 * m + 4, 4 * m + 5)
    edges = _clique(a, RED) + _clique(c, RED) + _complete(b, d, RED)
    edges += _complete(a, b, GREEN) + _complete(c, d, GREEN)
    edges += _complete(a, d, BLUE) + _complete(b, c, BLUE)
    return ColouredGraph(4 * m + 5, edges)


def _grow_component(rng, core, rim, allowed_inside_core, p, colour):
    """Connected spanning edges on core u rim; rim vertices only attach to core.

    Pairs inside the core are used only when ``allowed_inside_core``; rim-rim
    pairs never.  Returns a set of (u, v, colour).
    """
    core, rim = list(core), list(rim)
    edges = set()

    def add(u, v):
        edges.add((min(u, v), max(u, v), colour))

    if not core:
        return edges
    # spanning tree: the core must be connected by itself when inner pairs are allowed
    if allowed_inside_core:
        order = core[:]
        rng.shuffle(order)
        for i in range(1, len(order)):
            add(order[i], order[rng.randrange(i)])
    elif len(core) > 1 and not rim:
        raise InfeasibleParameters("component cannot be connected")
    placed_core = core if allowed_inside_core else core[:1]
    for v in rim:
        add(v, rng.choice(placed_core))
    if not allowed_inside_core:
        # remaining core vertices hang off rim vertices
        if len(core) > 1 and not rim:
            raise InfeasibleParameters("component cannot be connected")
        for v in core[1:]:
            add(v, rng.choice(rim))
    for u in core:
        for v in rim:
            if rng.random() < p:
                add(u, v)
    if allowed_inside_core:
        for i, u in enumerate(core):
            for v in core[i + 1 :]:
                if rng.random() < p:
                    add(u, v)
    return edges


def _relabel(rng, n, edges):
    perm = list(range(n))
    rng.shuffle(perm)
    return [(perm[u], perm[v], c) for u, v, c in edges], perm


def gen_extremal_a(
    m: int, gamma, seed: int = 0, density: float = 0.8, surplus: int | None = None
) -> ColouredMultiGraph:
    """A spanning red bipartite component on X1, X2 with blue bipartite components on each class.

    ``surplus`` is |X1| - |X2| (default m mod 2); it must have the parity of m.
    """
    gamma = as_fraction(gamma)
    s = m % 2 if surplus is None else surplus
    if m < 2 or s < 0 or (m - s) // 2 < 1:
        raise InfeasibleParameters("need two non-empty classes")
    if (m - s) % 2:
        raise InfeasibleParameters("surplus must have the parity of m")
    if s > gamma * m:
        raise InfeasibleParameters(f"classes differ by {s} > gamma*m = {gamma * m}")
    rng = random.Random(seed)
    k1 = (m + s) // 2
    x1 = list(range(k1))
    x2 = list(range(k1, m))
    edges = set()
    # red: connected bipartite graph between the classes
    edges |= _grow_component(rng, x1, x2, False, density, RED)
    for part in (x1, x2):
        half = len(part) // 2
        s = part[:]
        rng.shuffle(s)
        left, right = s[: max(1, half)], s[max(1, half) :]
        if right:
            edges |= _grow_component(rng, left, right, False, density, BLUE)
    edges, _ = _relabel(rng, m, sorted(edges))
    return ColouredMultiGraph(m, edges)


def extremal_b_blocks(m: int) -> list[list[int]]:
    """Block vertex lists I11, I12, I21, I22 before relabelling."""
    sizes = [m // 4 + (1 if i < m % 4 else 0) for i in range(4)]
    out, start = [], 0
    for s in sizes:
        out.append(list(range(start, start + s)))
        start += s
    return out


def gen_extremal_b(m: int, gamma, seed: int = 0, density: float = 0.8) -> ColouredMultiGraph:
    """Two red and two blue components meeting in four blocks, with a few miscoloured edges."""
    gamma = as_fraction(gamma)
    if m < 4:
        raise InfeasibleParameters("need m >= 4 for four non-empty blocks")
    if math.ceil(Fraction(m, 4)) > (Fraction(1, 4) + gamma) * m:
        raise InfeasibleParameters("blocks cannot be balanced within (1/4 + gamma) m")
    rng = random.Random(seed)
    i11, i12, i21, i22 = extremal_b_blocks(m)
    edges = set()
    # core = block whose inside carries the component's colour
    edges |= _grow_component(rng, i12, i11, True, density, RED)  # R1
    edges |= _grow_component(rng, i21, i22, True, density, RED)  # R2
    edges |= _grow_component(rng, i11, i21, True, density, BLUE)  # B1
    edges |= _grow_component(rng, i22, i12, True, density, BLUE)  # B2
    used = {(u, v) for u, v, _ in edges}
    # miscoloured edges stay inside their block, on pairs not yet used
    wrong_colour = {0: RED, 1: BLUE, 2: BLUE, 3: RED}
    spare = []
    for idx, blk in enumerate((i11, i12, i21, i22)):
        for a in range(len(blk)):
            for b in range(a + 1, len(blk)):
                if (blk[a], blk[b]) not in used:
                    spare.append((blk[a], blk[b], wrong_colour[idx]))
    budget = int(gamma * m * m) // 2
    rng.shuffle(spare)
    edges |= set(spare[:budget])
    edges, _ = _relabel(rng, m, sorted(edges))
    return ColouredMultiGraph(m, edges)


def gen_random_min_degree(n: int, delta_fraction, colour_bias: float = 0.5, seed: int = 0) -> ColouredGraph:
    """Random 2-coloured graph with minimum degree at least ceil(delta_fraction * n).

    Edges appear with probability (1 + delta_fraction) / 2; up to 20 samples
    are drawn, and if none meets the degree bound the last one is repaired
    by joining minimum-degree vertices to random non-neighbours.  Each edge
    is red with probability ``colour_bias``.
    """
    delta = as_fraction(delta_fraction)
    if not 0 < delta < 1:
        raise ValueError("delta_fraction must lie in (0, 1)")
    rng = random.Random(seed)
    need = math.ceil(delta * n)
    if n and need > n - 1:
        raise ValueError("minimum degree exceeds n - 1")
    p = (1 + float(delta)) / 2
    adj = [set() for _ in range(n)]
    for _ in range(20):
        adj = [set() for _ in range(n)]
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    adj[u].add(v)
                    adj[v].add(u)
        if n == 0 or min(len(a) for a in adj) >= need:
            break
    while n and min(len(a) for a in adj) < need:
        u = min(range(n), key=lambda x: (len(adj[x]), x))
        free = sorted(set(range(n)) - adj[u] - {u})
        low = min(len(adj[x]) for x in free)
        # prefer partners that are themselves short of the bound
        pool = [x for x in free if len(adj[x]) < need] or [x for x in free if len(adj[x]) == low]
        v = rng.choice(pool)
        adj[u].add(v)
        adj[v].add(u)
    edges = []
    for u in range(n):
        for v in sorted(adj[u]):
            if v > u:
                edges.append((u, v, RED if rng.random() < colour_bias else BLUE))
    return ColouredGraph(n, edges)


def gen_random_reduced(m: int, gamma, seed: int = 0, double_prob: float = 0.2) -> ColouredMultiGraph:
    """Random 2-coloured multigraph with minimum degree at least ceil((2/3 + 8 gamma) m).

    Pairs carry a red edge, a blue edge, or both (probability ``double_prob``).
    """
    gamma = as_fraction(gamma)
    need = math.ceil((Fraction(2, 3) + 8 * gamma) * m)
    base = gen_random_min_degree(m, Fraction(need, m) - Fraction(1, 2 * m) if m else Fraction(1, 2), 0.5, seed)
    rng = random.Random(seed + 1)
    edges = []
    for u, v, c in base.coloured_edges():
        if rng.random() < double_prob:
            edges += [(u, v, RED), (u, v, BLUE)]
        else:
            edges.append((u, v, c))
    return ColouredMultiGraph(m, edges)
