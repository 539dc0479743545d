"""Hamilton cycles and paths: degree conditions, exact search, constructions, cycle covers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionFailed, InstanceTooLarge, PreconditionViolated
from .graph_core import adjacency_of, iter_bits, lowest_bit, mask_of
from .two_matching import as_fraction

DEFAULT_EXACT_CAP = 20
_NUMPY_FROM = 12


@dataclass(frozen=True)
class DegreeSequence:
    values: tuple

    def __init__(self, values: Iterable[int]):
        vals = tuple(sorted(int(x) for x in values))
        n = len(vals)
        if vals and (vals[0] < 0 or vals[-1] > n - 1):
            raise ValueError("degrees must lie in [0, n-1]")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def d(self, i: int) -> int:
        """1-indexed access, matching the usual statement of the conditions."""
        return self.values[i - 1]


def _as_seq(d) -> tuple:
    return d.values if isinstance(d, DegreeSequence) else tuple(sorted(d))


def chvatal_check(d) -> bool:
    """For every 1 <= i < n/2: d_i >= i+1 or d_{n-i} >= n-i."""
    vals = _as_seq(d)
    n = len(vals)
    if n < 3:
        raise ValueError("the condition is stated for n >= 3")
    i = 1
    while 2 * i < n:
        if not (vals[i - 1] >= i + 1 or vals[n - i - 1] >= n - i):
            return False
        i += 1
    return True


def bipartite_chvatal_check(x, y) -> bool:
    """For every i in [n-1]: x_i >= i+1 or y_{n-i} >= n-i+1."""
    xs, ys = _as_seq(x), _as_seq(y)
    n = len(xs)
    if len(ys) != n or n < 2:
        raise ValueError("two sequences of equal length n >= 2 required")
    return all(xs[i - 1] >= i + 1 or ys[n - i - 1] >= n - i + 1 for i in range(1, n))


@dataclass(frozen=True)
class HamiltonCycle:
    vertices: tuple

    def is_valid(self, adj: Sequence[int], within: int) -> bool:
        return is_cycle(adj, self.vertices) and mask_of(self.vertices) == within and len(self.vertices) == within.bit_count()


@dataclass(frozen=True)
class HamiltonPath:
    vertices: tuple

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def is_valid(self, adj: Sequence[int], within: int) -> bool:
        vs = self.vertices
        return (
            len(set(vs)) == len(vs)
            and mask_of(vs) == within
            and all(adj[a] >> b & 1 for a, b in zip(vs, vs[1:]))
        )


def is_cycle(adj: Sequence[int], seq: Sequence[int]) -> bool:
    """Proper cycle check (length >= 3, distinct, consecutive and closing edges present)."""
    if len(seq) < 3 or len(set(seq)) != len(seq):
        return False
    return all(adj[seq[i]] >> seq[(i + 1) % len(seq)] & 1 for i in range(len(seq)))


def is_path(adj: Sequence[int], seq: Sequence[int]) -> bool:
    return len(set(seq)) == len(seq) and all(adj[a] >> b & 1 for a, b in zip(seq, seq[1:]))


# ---------------------------------------------------------------------------
# exact subset DP


def _compact(adj: Sequence[int], within: int) -> tuple[list[int], list[int]]:
    """Relabel the vertices of ``within`` as 0..k-1; returns (labels, compact adjacency)."""
    labels = list(iter_bits(within))
    index = {v: i for i, v in enumerate(labels)}
    cadj = []
    for v in labels:
        row = 0
        for w in iter_bits(adj[v] & within):
            row |= 1 << index[w]
        cadj.append(row)
    return labels, cadj


def endpoint_table(cadj: Sequence[int]):
    """``table[M]`` = bitmask of vertices v such that some path covers exactly M,
    starts at the lowest vertex of M and ends at v.

    Pure Python for small k, a popcount-layered numpy kernel beyond.
    """
    k = len(cadj)
    if k < _NUMPY_FROM:
        return _endpoint_table_py(cadj)
    return _endpoint_table_np(cadj)


def _endpoint_table_py(cadj: Sequence[int]) -> list[int]:
    k = len(cadj)
    dp = [0] * (1 << k)
    for v in range(k):
        dp[1 << v] = 1 << v
    for m in range(1, 1 << k):
        low = m & -m
        if m == low:
            continue
        acc = 0
        rest = m ^ low
        while rest:
            b = rest & -rest
            rest ^= b
            if dp[m ^ b] & cadj[b.bit_length() - 1]:
                acc |= b
        dp[m] = acc
    return dp


_LAYER_CACHE: dict[int, list] = {}


def _layers(k: int):
    """Masks grouped by popcount, with per-vertex selections of non-lowest members."""
    if k in _LAYER_CACHE:
        return _LAYER_CACHE[k]
    masks = np.arange(1 << k, dtype=np.uint32)
    pc = np.bitwise_count(masks)
    out = []
    for size in range(2, k + 1):
        layer = masks[pc == size]
        per_u = []
        for u in range(k):
            bit = np.uint32(1 << u)
            sel = layer[((layer & bit) != 0) & ((layer & np.uint32((1 << u) - 1)) != 0)]
            per_u.append((sel, sel ^ bit))
        out.append(per_u)
    if k <= 18:
        _LAYER_CACHE[k] = out
    return out


def _endpoint_table_np(cadj: Sequence[int]) -> np.ndarray:
    k = len(cadj)
    dp = np.zeros(1 << k, dtype=np.uint32)
    for v in range(k):
        dp[1 << v] = 1 << v
    adj = [np.uint32(a) for a in cadj]
    for per_u in _layers(k):
        for u, (sel, prev) in enumerate(per_u):
            hit = (dp[prev] & adj[u]) != 0
            dp[sel[hit]] |= np.uint32(1 << u)
    return dp


def _trace_path(dp, cadj, mask: int, end: int) -> list[int]:
    """Walk the endpoint table back from (mask, end) to the lowest vertex of mask."""
    seq = [end]
    while mask & (mask - 1):
        prev_mask = mask ^ (1 << end)
        options = int(dp[prev_mask]) & cadj[end]
        end = lowest_bit(options)
        seq.append(end)
        mask = prev_mask
    seq.reverse()
    return seq


def hamilton_cycle_exact(g, colour: int | None = None, within=None, cap: int = DEFAULT_EXACT_CAP):
    """Hamilton cycle of the (colour-restricted) graph on ``within``, or None.

    Fewer than three vertices never form a cycle here.
    """
    adj = adjacency_of(g, colour)
    within = _within_mask(adj, within)
    k = within.bit_count()
    if k > cap:
        raise InstanceTooLarge(f"exact Hamilton search limited to {cap} vertices, got {k}")
    if k < 3:
        return None
    labels, cadj = _compact(adj, within)
    dp = endpoint_table(cadj)
    full = (1 << k) - 1
    ends = int(dp[full]) & cadj[0]
    if not ends:
        return None
    seq = _trace_path(dp, cadj, full, lowest_bit(ends))
    return HamiltonCycle(tuple(labels[i] for i in seq))


def _within_mask(adj, within) -> int:
    if within is None:
        return (1 << len(adj)) - 1
    if isinstance(within, int):
        return within
    return mask_of(within)


def hamilton_path_exact(adj: Sequence[int], w: int, w2: int, within: int, cap: int = DEFAULT_EXACT_CAP):
    k = within.bit_count()
    if k > cap:
        raise InstanceTooLarge(f"exact Hamilton search limited to {cap} vertices, got {k}")
    if not (within >> w & 1 and within >> w2 & 1):
        return None
    # relabel with w first so the table's lowest-vertex start is w
    order = [w] + [v for v in iter_bits(within) if v != w]
    index = {v: i for i, v in enumerate(order)}
    cadj = [sum(1 << index[x] for x in iter_bits(adj[v] & within)) for v in order]
    dp = endpoint_table(cadj)
    full = (1 << k) - 1
    if not int(dp[full]) >> index[w2] & 1:
        return None
    seq = _trace_path(dp, cadj, full, index[w2])
    return HamiltonPath(tuple(order[i] for i in seq))


# ---------------------------------------------------------------------------
# rotation-extension search for dense graphs


def hamilton_cycle_search(
    adj: Sequence[int],
    within: int,
    start_path: Sequence[int] | None = None,
    keep: Iterable[tuple[int, int]] = (),
    budget: int = 10**7,
) -> list[int] | None:
    """Deterministic rotation-extension search for a Hamilton cycle on ``within``.

    Extends a path at both ends, closes it through a crossing pair
    (p0 ~ p[i+1], p[i] ~ p[-1]) when saturated, opens the cycle towards an
    uncovered neighbour, and otherwise rotates.  Edges in ``keep`` are never
    broken, so a prescribed start path survives.  Returns None on failure.
    """
    target = within.bit_count()
    if target < 3:
        return None
    kept = {frozenset(e) for e in keep}
    path = list(start_path) if start_path else [lowest_bit(within)]
    on = mask_of(path)
    steps = 0
    rotations = 0
    seen_ends: set[tuple[int, int, int]] = set()

    def breakable(a, b):
        return frozenset((a, b)) not in kept

    while steps < budget:
        steps += 1
        # extend at both ends
        grew = False
        for _ in range(2):
            while True:
                cand = adj[path[-1]] & within & ~on
                if not cand:
                    break
                x = lowest_bit(cand)
                path.append(x)
                on |= 1 << x
                grew = True
                steps += 1
            path.reverse()
        if grew:
            seen_ends.clear()
            rotations = 0
        length = len(path)
        p0, pe = path[0], path[-1]
        cycle = None
        if length >= 3 and adj[pe] >> p0 & 1:
            cycle = path
        else:
            nb0, nbe = adj[p0], adj[pe]
            for i in range(1, length - 2):
                if nb0 >> path[i + 1] & 1 and nbe >> path[i] & 1 and breakable(path[i], path[i + 1]):
                    cycle = path[: i + 1] + path[:i:-1]
                    break
            steps += length
        if cycle is not None:
            if length == target:
                return cycle
            opened = _open_cycle(adj, within, on, cycle, breakable)
            if opened is None:
                return None
            path = opened
            on = mask_of(path)
            seen_ends.clear()
            rotations = 0
            continue
        # rotate the far end
        key = (p0, pe, length)
        if key in seen_ends or rotations > 4 * length:
            # try rotating the other end once before giving up on this state
            path.reverse()
            key = (path[0], path[-1], length)
            if key in seen_ends:
                return None
        seen_ends.add(key)
        rotations += 1
        pe = path[-1]
        nbe = adj[pe]
        choice = None
        for i in range(length - 3, -1, -1):
            if nbe >> path[i] & 1 and breakable(path[i], path[i + 1]):
                cand_end = path[i + 1]
                if (path[0], cand_end, length) not in seen_ends:
                    choice = i
                    break
        if choice is None:
            path.reverse()
            pe = path[-1]
            nbe = adj[pe]
            for i in range(length - 3, -1, -1):
                if nbe >> path[i] & 1 and breakable(path[i], path[i + 1]):
                    if (path[0], path[i + 1], length) not in seen_ends:
                        choice = i
                        break
            if choice is None:
                return None
        path = path[: choice + 1] + path[:choice:-1]
        steps += length
    return None


def _open_cycle(adj, within, on, cycle, breakable):
    """Turn a non-spanning cycle into a longer path through an outside neighbour."""
    n = len(cycle)
    outside = within & ~on
    for j, c in enumerate(cycle):
        hits = adj[c] & outside
        if not hits:
            continue
        x = lowest_bit(hits)
        prev = cycle[j - 1]
        nxt = cycle[(j + 1) % n]
        if breakable(prev, c):
            return [x] + cycle[j:] + cycle[:j]
        if breakable(c, nxt):
            rev = cycle[j::-1] + cycle[:j:-1]
            return [x] + rev
    return None


def hamilton_cycle(g, colour: int | None = None, within=None, exact_cap: int = DEFAULT_EXACT_CAP):
    """Hamilton cycle: rotation-extension first, exact DP fallback within the cap."""
    adj = adjacency_of(g, colour)
    within = _within_mask(adj, within)
    if within.bit_count() < 3:
        return None
    seq = hamilton_cycle_search(adj, within)
    if seq is not None and is_cycle(adj, seq):
        return HamiltonCycle(tuple(seq))
    if within.bit_count() <= exact_cap:
        return hamilton_cycle_exact(adj, within=within, cap=exact_cap)
    return None


# ---------------------------------------------------------------------------
# bipartite constructions


def _bipartite_classes(adj: Sequence[int], within: int):
    """2-colouring of the graph on ``within`` as two masks, or None if not bipartite."""
    side = {}
    x = y = 0
    for s in iter_bits(within):
        if s in side:
            continue
        side[s] = 0
        x |= 1 << s
        stack = [s]
        while stack:
            u = stack.pop()
            for w in iter_bits(adj[u] & within):
                if w not in side:
                    side[w] = side[u] ^ 1
                    if side[w]:
                        y |= 1 << w
                    else:
                        x |= 1 << w
                    stack.append(w)
                elif side[w] == side[u]:
                    return None
    return x, y


def cor35_hypothesis(adj: Sequence[int], x1: int, x2: int) -> bool:
    """Balanced classes of size k with every cross degree at least k/2 + 1."""
    k = x1.bit_count()
    if x2.bit_count() != k or k == 0:
        return False
    need = Fraction(k, 2) + 1
    return all((adj[v] & x2).bit_count() >= need for v in iter_bits(x1)) and all(
        (adj[v] & x1).bit_count() >= need for v in iter_bits(x2)
    )


def _bipartite_path_by_augmentation(adj: Sequence[int], x1: int, x2: int, w: int, w2: int):
    """Add v to X1 and v' to X2 with edges wv', v'v, vw', complete X2, find a Hamilton cycle."""
    n = len(adj)
    v, v2 = n, n + 1
    ext = list(adj) + [0, 0]
    ext = [a & (x1 | x2) for a in ext]
    for a, b in ((w, v2), (v2, v), (v, w2)):
        ext[a] |= 1 << b
        ext[b] |= 1 << a
    y = x2 | 1 << v2
    for u in iter_bits(y):
        ext[u] |= y & ~(1 << u)
    within = x1 | x2 | 1 << v | 1 << v2
    cyc = hamilton_cycle_search(ext, within, start_path=[w2, v, v2, w], keep=[(w2, v), (v, v2), (v2, w)])
    if cyc is None:
        return None
    i = cyc.index(v)
    seq = cyc[i:] + cyc[:i]
    if seq[1] == v2:
        seq = [seq[0]] + seq[:0:-1]
    # seq = v, w', ..., w, v'
    body = seq[1:-1]
    if body[0] != w2 or body[-1] != w:
        return None
    body.reverse()
    if not is_path(adj, body):
        return None
    # no X2-X2 edges can occur on a Hamilton cycle of a balanced graph with X1 stable
    if any((x2 >> a & 1) and (x2 >> b & 1) for a, b in zip(body, body[1:])):
        return None
    return HamiltonPath(tuple(body))


def hamilton_path_between(
    g, w: int, w2: int, colour: int | None = None, within=None, cap: int = DEFAULT_EXACT_CAP
) -> HamiltonPath | None:
    """Hamilton w,w'-path on ``within``.

    Uses the augmentation construction when the graph is a balanced bipartite
    graph with cross degrees >= k/2 + 1 and w, w' lie in opposite classes;
    otherwise exact DP (up to ``cap`` vertices).
    """
    if w == w2:
        raise ValueError("endpoints must be distinct")
    adj = adjacency_of(g, colour)
    within = _within_mask(adj, within)
    if not (within >> w & 1 and within >> w2 & 1):
        return None
    if within.bit_count() == 2:
        return HamiltonPath((w, w2)) if adj[w] >> w2 & 1 else None
    classes = _bipartite_classes(adj, within)
    if classes is not None:
        x1, x2 = classes
        if x2 >> w & 1:
            x1, x2 = x2, x1
        if x2 >> w2 & 1 and cor35_hypothesis(adj, x1, x2):
            p = _bipartite_path_by_augmentation(adj, x1, x2, w, w2)
            if p is not None and p.is_valid(adj, within):
                return p
            if within.bit_count() > cap:
                raise ConstructionFailed("augmentation search failed under the degree hypothesis")
    return hamilton_path_exact(adj, w, w2, within, cap)


def two_set_hamilton_path(
    h,
    A: Iterable[int],
    B: Iterable[int],
    A_prime: Iterable[int],
    u: int,
    u2: int,
    mu,
    colour: int | None = None,
    relaxed: bool = False,
) -> HamiltonPath:
    """Hamilton u,u'-path on A u B built from two stubs and a balanced bipartite core.

    Hypotheses are checked exactly and raise PreconditionViolated (with the
    clause name) unless ``relaxed``; in relaxed mode the construction is
    attempted regardless and raises ConstructionFailed on a dead end.
    """
    adj = adjacency_of(h, colour)
    A, B, Ap = mask_of(A), mask_of(B), mask_of(A_prime)
    mu = as_fraction(mu)
    clause = _lemma36_violation(adj, A, B, Ap, u, u2, mu)
    if clause is not None and (not relaxed or clause in ("partition", "endpoints")):
        raise PreconditionViolated(f"hypothesis '{clause}' fails", clause=clause)
    within = A | B
    a_free = A & ~Ap
    swapped = False
    if B >> u & 1 and A >> u2 & 1:
        u, u2 = u2, u
        swapped = True
    P, P2 = [u], [u2]
    used = 1 << u | 1 << u2
    if B >> u & 1 and B >> u2 & 1:
        cand = adj[u] & a_free & ~used
        if not cand:
            raise ConstructionFailed("no neighbour in A minus A' for the first stub")
        x = lowest_bit(cand)
        P.append(x)
        used |= 1 << x
    elif a_free >> u & 1 and a_free >> u2 & 1:
        cand = adj[u2] & B & ~used
        if not cand:
            raise ConstructionFailed("no neighbour in B for the second stub")
        x = lowest_bit(cand)
        P2.append(x)
        used |= 1 << x
    # P now ends in A (or is u in A); P2 ends in B
    while (A & ~used).bit_count() > (B & ~used).bit_count():
        cand = adj[P[-1]] & a_free & ~used
        if not cand:
            raise ConstructionFailed("greedy extension inside A minus A' got stuck")
        x = lowest_bit(cand)
        P.append(x)
        used |= 1 << x
    if (A & ~used).bit_count() != (B & ~used).bit_count():
        raise ConstructionFailed("stub sizes cannot be balanced")
    w, w2 = P[-1], P2[-1]
    if not (A >> w & 1 and B >> w2 & 1):
        raise ConstructionFailed("stub endpoints are not in A and B")
    a_star = (A & ~used) | 1 << w
    b_star = (B & ~used) | 1 << w2
    core = [0] * len(adj)
    for v in iter_bits(a_star):
        core[v] = adj[v] & b_star
    for v in iter_bits(b_star):
        core[v] = adj[v] & a_star
    mid = hamilton_path_between(core, w, w2, within=a_star | b_star)
    if mid is None:
        raise ConstructionFailed("no Hamilton path in the balanced bipartite core")
    seq = P + list(mid.vertices[1:-1]) + P2[::-1]
    if swapped:
        seq.reverse()
    path = HamiltonPath(tuple(seq))
    if not path.is_valid(adj, within):
        raise ConstructionFailed("spliced path failed verification")
    return path


def _lemma36_violation(adj, A: int, B: int, Ap: int, u: int, u2: int, mu: Fraction) -> str | None:
    if A & B:
        return "partition"
    within = A | B
    if u == u2 or not (within >> u & 1 and within >> u2 & 1):
        return "endpoints"
    n = within.bit_count()
    if not 0 < mu <= 1:
        return "mu_range"
    if Ap & ~A:
        return "A_prime_subset"
    a, b = A.bit_count(), B.bit_count()
    if not b <= a <= b + mu * n:
        return "size_order"
    if Ap.bit_count() > mu * n:
        return "A_prime_size"
    big = (Fraction(1, 4) + 3 * mu) * n
    if any((adj[v] & B).bit_count() < big for v in iter_bits(A)):
        return "deg_A_to_B"
    if any((adj[v] & A).bit_count() < big for v in iter_bits(B)):
        return "deg_B_to_A"
    if any((adj[v] & A).bit_count() < 3 * mu * n for v in iter_bits(A & ~Ap)):
        return "deg_inside_A"
    if Ap >> u & 1 or Ap >> u2 & 1:
        return "endpoints_in_A_prime"
    if (A & ~Ap) >> u & 1 and (A & ~Ap) >> u2 & 1 and a < b + 1:
        return "both_in_A_surplus"
    if n < 100 / mu:
        return "n_lower_bound"
    return None


# ---------------------------------------------------------------------------
# cycle covers


def posa_cycle_cover(g, colour: int | None = None, within=None, exact_residual: int = 12) -> list[tuple]:
    """Partition into vertex-disjoint cycles (single vertices and edges allowed).

    Each step grows a path whose first vertex v1 has all neighbours on it and
    cuts the cycle from v1 to its farthest neighbour; v1 has no neighbour in
    the rest, so the independence number drops every step and at most
    alpha(g) parts are produced.  Residuals up to ``exact_residual`` vertices
    are partitioned optimally instead.
    """
    adj = adjacency_of(g, colour)
    rest = _within_mask(adj, within)
    parts: list[tuple] = []
    while rest:
        if rest.bit_count() <= exact_residual:
            from .exact_partition import min_cycle_cover_single

            parts.extend(min_cycle_cover_single(adj, rest))
            break
        start = lowest_bit(rest)
        path = [start]
        on = 1 << start
        # grow the back end first for a long path, then saturate the front
        while True:
            cand = adj[path[-1]] & rest & ~on
            if not cand:
                break
            x = lowest_bit(cand)
            path.append(x)
            on |= 1 << x
        path.reverse()
        while True:
            cand = adj[path[-1]] & rest & ~on
            if not cand:
                break
            x = lowest_bit(cand)
            path.append(x)
            on |= 1 << x
        path.reverse()
        # path[0] now has every neighbour (within rest) on the path
        v1 = path[0]
        far = max((i for i, x in enumerate(path) if adj[v1] >> x & 1), default=0)
        piece = tuple(path[: far + 1])
        parts.append(piece)
        rest &= ~mask_of(piece)
    return parts


def is_cycle_cover(adj: Sequence[int], parts: Sequence[Sequence[int]], within: int) -> bool:
    seen = 0
    for p in parts:
        m = mask_of(p)
        if m & seen or len(p) != m.bit_count():
            return False
        seen |= m
        if len(p) == 2 and not adj[p[0]] >> p[1] & 1:
            return False
        if len(p) >= 3 and not is_cycle(adj, p):
            return False
    return seen == within

