"""Perfect 2-matchings, the Tutte condition and its robust strengthening.

A perfect 2-matching of ``g`` corresponds to a perfect matching of the
bipartite double cover (left copy -> right copy along every edge): the
matching is a permutation without fixed points, and its cycles give the
parts.  Two-cycles of the permutation are single-edge parts with weight 2,
longer cycles are cycle parts with weight 1 per edge.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InstanceTooLarge
from .graph_core import adjacency_of, iter_bits, neighbourhood

DEFAULT_NODE_BUDGET = 10**8


def node_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get("MONOCHROME_NODE_BUDGET")
    return int(env) if env else DEFAULT_NODE_BUDGET


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float literal."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def robust_threshold(gamma, n: int) -> int:
    """``ceil(gamma * n)`` computed exactly."""
    return math.ceil(as_fraction(gamma) * n)


def hopcroft_karp(left_adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum bipartite matching; returns ``match[u]`` (right vertex or -1) per left vertex.

    Adjacency lists may be shared between left vertices (the blow-up graphs
    rely on this to stay small).  Greedy initial matching, then phases of
    layered BFS and iterative DFS.
    """
    n_left = len(left_adj)
    ml = [-1] * n_left
    mr = [-1] * n_right
    # right vertices never become free during the greedy pass, so one cursor
    # per shared list suffices
    cursor = {}
    for u in range(n_left):
        adj = left_adj[u]
        key = id(adj)
        i = cursor.get(key, 0)
        end = len(adj)
        while i < end and mr[adj[i]] >= 0:
            i += 1
        cursor[key] = i
        if i < end:
            v = adj[i]
            ml[u] = v
            mr[v] = u
    inf = n_left + 1
    while True:
        dist = [inf] * n_left
        queue = [u for u in range(n_left) if ml[u] < 0]
        if not queue:
            break
        for u in queue:
            dist[u] = 0
        found = False
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            d = dist[u] + 1
            for v in left_adj[u]:
                w = mr[v]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = d
                    queue.append(w)
        if not found:
            break
        it = [0] * n_left
        augmented = False
        for s in range(n_left):
            if ml[s] >= 0:
                continue
            stack = [s]
            via: list[int] = []
            while stack:
                u = stack[-1]
                adj = left_adj[u]
                end = len(adj)
                pushed = False
                want = dist[u] + 1
                while it[u] < end:
                    v = adj[it[u]]
                    it[u] += 1
                    w = mr[v]
                    if w < 0:
                        via.append(v)
                        for x, y in zip(stack, via):
                            ml[x] = y
                            mr[y] = x
                        stack = []
                        augmented = True
                        pushed = True
                        break
                    if dist[w] == want:
                        via.append(v)
                        stack.append(w)
                        pushed = True
                        break
                if not pushed:
                    dist[u] = inf
                    stack.pop()
                    if via:
                        via.pop()
        if not augmented:
            break
    return ml


@dataclass(frozen=True)
class TutteWitness:
    stable_set: frozenset
    neighbourhood: frozenset
    deficiency: int

    def to_json(self) -> dict:
        return {
            "stable_set": sorted(self.stable_set),
            "neighbourhood": sorted(self.neighbourhood),
            "deficiency": self.deficiency,
        }


def check_witness(g, witness: TutteWitness, gamma=0) -> bool:
    """Independent re-check of a witness against ``g``."""
    adj = adjacency_of(g)
    s = 0
    for v in witness.stable_set:
        s |= 1 << v
    if any(adj[v] & s for v in witness.stable_set):
        return False
    nb = neighbourhood(adj, s)
    if frozenset(iter_bits(nb)) != witness.neighbourhood:
        return False
    expect = len(witness.stable_set) + robust_threshold(gamma, len(adj)) - nb.bit_count()
    return expect == witness.deficiency and expect > 0


@dataclass(frozen=True)
class TwoMatching:
    """Vertex-disjoint single edges (length-2 parts) and cycles (length >= 3)."""

    parts: tuple

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for p in self.parts:
            if len(p) == 2:
                out.append(tuple(sorted(p)))
            else:
                out.extend(tuple(sorted((p[i], p[(i + 1) % len(p)]))) for i in range(len(p)))
        return out

    def omega(self) -> dict[tuple[int, int], int]:
        w = {}
        for p in self.parts:
            if len(p) == 2:
                w[tuple(sorted(p))] = 2
            else:
                for i in range(len(p)):
                    w[tuple(sorted((p[i], p[(i + 1) % len(p)])))] = 1
        return w

    @property
    def single_edges(self) -> list[tuple[int, int]]:
        return [tuple(p) for p in self.parts if len(p) == 2]

    @property
    def cycles(self) -> list[tuple[int, ...]]:
        return [tuple(p) for p in self.parts if len(p) >= 3]

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.single_edges], "cycles": [list(c) for c in self.cycles]}

    @classmethod
    def from_json(cls, data: dict) -> "TwoMatching":
        parts = [tuple(e) for e in data.get("edges", [])] + [tuple(c) for c in data.get("cycles", [])]
        return cls(tuple(parts))

    def is_valid_for(self, g) -> bool:
        adj = adjacency_of(g)
        n = len(adj)
        seen = set()
        for p in self.parts:
            if len(p) < 2 or len(set(p)) != len(p) or seen.intersection(p):
                return False
            seen.update(p)
        if seen != set(range(n)):
            return False
        load = [0] * n
        for (u, v), w in self.omega().items():
            if not adj[u] >> v & 1:
                return False
            load[u] += w
            load[v] += w
        return all(x == 2 for x in load)


def _double_cover_matching(adj: Sequence[int]) -> list[int]:
    left = [list(iter_bits(a)) for a in adj]
    return hopcroft_karp(left, len(adj))


def _hall_violator(adj: Sequence[int], match: list[int]) -> TutteWitness:
    n = len(adj)
    mr = [-1] * n
    for u, v in enumerate(match):
        if v >= 0:
            mr[v] = u
    reached_left = 0
    reached_right = 0
    frontier = [u for u in range(n) if match[u] < 0]
    for u in frontier:
        reached_left |= 1 << u
    while frontier:
        nxt = []
        for u in frontier:
            for v in iter_bits(adj[u] & ~reached_right):
                reached_right |= 1 << v
                w = mr[v]
                if w >= 0 and not reached_left >> w & 1:
                    reached_left |= 1 << w
                    nxt.append(w)
        frontier = nxt
    # X = reached_left has |N(X)| < |X|; X minus N(X) is stable and still deficient
    stable = reached_left & ~reached_right
    nb = neighbourhood(adj, stable)
    return TutteWitness(
        frozenset(iter_bits(stable)),
        frozenset(iter_bits(nb)),
        stable.bit_count() - nb.bit_count(),
    )


def tutte_condition(g) -> TutteWitness | None:
    """``None`` when every stable set S has |N(S)| >= |S|, else a violating witness."""
    adj = adjacency_of(g)
    match = _double_cover_matching(adj)
    if all(v >= 0 for v in match):
        return None
    return _hall_violator(adj, match)


def two_matching_from_permutation(perm: Sequence[int]) -> TwoMatching:
    """Cycle-decompose a fixed-point-free permutation, smallest unvisited vertex first."""
    n = len(perm)
    seen = [False] * n
    parts = []
    for s in range(n):
        if seen[s]:
            continue
        cyc = []
        v = s
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = perm[v]
        parts.append(tuple(cyc))
    return TwoMatching(tuple(parts))


def perfect_2_matching(g) -> TwoMatching | None:
    """A perfect 2-matching of ``g``, or ``None`` exactly when the Tutte condition fails."""
    adj = adjacency_of(g)
    match = _double_cover_matching(adj)
    if any(v < 0 for v in match):
        return None
    return two_matching_from_permutation(match)


def robust_tutte(g, gamma, budget: int | None = None) -> TutteWitness | None:
    """``None`` when every non-empty stable S has |N(S)| >= |S| + ceil(gamma n).

    Otherwise the witness of maximum deficiency (first in lexicographic DFS
    order among ties).  Raises InstanceTooLarge past the node budget.
    """
    gamma = as_fraction(gamma)
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    adj = adjacency_of(g)
    return _robust_search(adj, robust_threshold(gamma, len(adj)), node_budget(budget))


def _gain_bound(adj, cand: int, nb: int) -> int:
    """Upper bound on |T| - |N(T) minus nb| over stable T within cand."""
    if not cand:
        return 0
    new = sorted((adj[v] & ~nb).bit_count() for v in iter_bits(cand))
    best = 0
    for s, d in enumerate(new, start=1):
        if s - d > best:
            best = s - d
    return best


def _robust_search(adj: Sequence[int], k: int, budget: int) -> TutteWitness | None:
    n = len(adj)
    best_def = 0
    best = None
    nodes = 0
    # stack of (chosen, neighbourhood, candidates)
    stack = [(0, 0, (1 << n) - 1)]
    while stack:
        chosen, nb, cand = stack.pop()
        nodes += 1
        if nodes > budget:
            raise InstanceTooLarge(f"robust Tutte search exceeded {budget} nodes")
        if chosen:
            d = chosen.bit_count() + k - nb.bit_count()
            if d > best_def:
                best_def = d
                best = (chosen, nb)
        if not cand:
            continue
        base = chosen.bit_count() + k - nb.bit_count()
        if base + _gain_bound(adj, cand, nb) <= best_def:
            continue
        children = []
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            children.append((chosen | low, nb | adj[v], rest & ~adj[v]))
        stack.extend(reversed(children))
    if best is None:
        return None
    chosen, nb = best
    return TutteWitness(frozenset(iter_bits(chosen)), frozenset(iter_bits(nb)), best_def)
