"""Heuristic partition of dense 2-coloured graphs into few monochromatic cycles.

Each vertex is treated as its own cluster, so the component-selection
procedure runs on the graph itself.  Extremal colourings get direct
constructions; otherwise the selected components share the vertices of a
perfect 2-matching of their union, each share is covered by cycles of the
component's colour, pieces are merged, and leftovers are absorbed through
short monochromatic paths.  Every emitted certificate is verified; any dead
end is reported as a failure with the stage name.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InternalContradiction
from .exact_partition import CyclePartitionCertificate, verify_certificate
from .graph_core import adjacency_of, iter_bits, mask_of
from .hamilton import hamilton_cycle_exact, hamilton_cycle_search, is_cycle, posa_cycle_cover
from .structure import BIPARTITE_LIKE, FOUR_CYCLE_LIKE, ComponentSelection, find_components
from .two_matching import as_fraction, perfect_2_matching

DEFAULT_STEP_BUDGET = 10**7
_EXACT_HAMILTON = 14


@dataclass(frozen=True)
class HeuristicFailure:
    stage: str
    detail: str = ""

    def __str__(self):
        return f"{self.stage}: {self.detail}" if self.detail else self.stage


class _Budget:
    def __init__(self, limit: int):
        self.left = limit

    def spend(self, k: int = 1) -> None:
        self.left -= k
        if self.left < 0:
            raise _OutOfBudget


class _OutOfBudget(Exception):
    pass


# ---------------------------------------------------------------------------
# short paths


def _short_path(adj, starts: int, ends: int, allowed: int, length: int, budget: _Budget | None = None):
    """DFS for a path on exactly ``length`` vertices of ``allowed``, first in starts, last in ends."""
    if length < 1:
        return None
    for s in iter_bits(starts & allowed):
        if length == 1:
            if ends >> s & 1:
                return [s]
            continue
        path = [s]
        used = 1 << s
        stack = [adj[s] & allowed & ~used]
        while stack:
            if budget is not None:
                budget.spend()
            cand = stack[-1]
            if not cand:
                stack.pop()
                used &= ~(1 << path.pop())
                continue
            low = cand & -cand
            stack[-1] = cand ^ low
            x = low.bit_length() - 1
            if len(path) + 1 == length:
                if ends >> x & 1:
                    return path + [x]
                continue
            path.append(x)
            used |= low
            stack.append(adj[x] & allowed & ~used)
        # exhausted from s
    return None


def connect_short_path(g, colour: int, X: Iterable[int], Y: Iterable[int], avoid: Iterable[int], length_ell: int):
    """A ``colour`` path with exactly ``length_ell`` vertices from X to Y avoiding ``avoid``, or None."""
    adj = adjacency_of(g, colour)
    allowed = ((1 << len(adj)) - 1) & ~mask_of(avoid)
    return _short_path(adj, mask_of(X), mask_of(Y), allowed, length_ell)


def _cycle_of_length(adj, within: int, length: int, prefer: Sequence[int], budget: _Budget):
    """A cycle on exactly ``length`` vertices of ``within`` (1 and 2 allowed), trying ``prefer`` first."""
    order = [v for v in prefer if within >> v & 1]
    for s in order:
        if length == 1:
            return [s]
        if length == 2:
            nb = adj[s] & within
            if nb:
                return [s, (nb & -nb).bit_length() - 1]
            continue
        p = _short_path(adj, adj[s] & within & ~(1 << s), adj[s], within & ~(1 << s), length - 1, budget)
        if p is not None:
            return [s] + p
    return None


def _hamilton(adj, within: int, budget: _Budget):
    """Cycle through every vertex of ``within`` (single vertex and edge allowed)."""
    k = within.bit_count()
    if k == 0:
        return []
    if k == 1:
        return [within.bit_length() - 1]
    if k == 2:
        a = (within & -within).bit_length() - 1
        b = within.bit_length() - 1
        return [a, b] if adj[a] >> b & 1 else None
    budget.spend(k * k)
    seq = hamilton_cycle_search(adj, within, budget=max(1000, min(budget.left, 50 * k * k)))
    if seq is not None and is_cycle(adj, seq):
        return list(seq)
    if k <= _EXACT_HAMILTON:
        budget.spend(1 << k)
        h = hamilton_cycle_exact(adj, within=within, cap=_EXACT_HAMILTON)
        return list(h.vertices) if h is not None else None
    return None


# ---------------------------------------------------------------------------
# extremal constructions


def _trim(adj, pool: int, surplus: int, prefer: Sequence[int], budget: _Budget, even_only: bool):
    """Cycles inside ``pool`` covering exactly ``surplus`` vertices, at most two of them."""
    if surplus == 0:
        return []
    plans = []
    if even_only and surplus % 2 and surplus > 1:
        plans.append((surplus - 1, 1))
    plans.append((surplus,))
    if surplus >= 3:
        plans.append((surplus - 1, 1))
    for plan in plans:
        out, used = [], 0
        for size in plan:
            if even_only and size >= 3 and size % 2:
                break
            cyc = _cycle_of_length(adj, pool & ~used, size, prefer, budget)
            if cyc is None:
                break
            out.append(cyc)
            used |= mask_of(cyc)
        else:
            return out
    return None


def _extremal_a(g, rep, budget: _Budget):
    w = rep.witness
    c = w["colour"]
    other = 1 - c
    cadj, oadj = g.colour_adj(c), g.colour_adj(other)
    big, small = mask_of(w["X1"]), mask_of(w["X2"])
    if big.bit_count() < small.bit_count():
        big, small = small, big
    d = big.bit_count() - small.bit_count()
    # vertices with few spanning-colour neighbours across are the ones to move out
    prefer = sorted(iter_bits(big), key=lambda v: ((cadj[v] & small).bit_count(), v))
    for shift in range(min(4, len(prefer))):
        trims = _trim(oadj, big, d, prefer[shift:] + prefer[:shift], budget, even_only=True)
        if trims is None:
            return HeuristicFailure("extremal_a", "no balancing cycle in the larger class")
        rest = (big | small) & ~mask_of(v for t in trims for v in t)
        main = _hamilton(cadj, rest, budget)
        if main is not None:
            return [(c, main)] + [(other, t) for t in trims]
    return HeuristicFailure("extremal_a", "no Hamilton cycle on the balanced classes")


def _extremal_b(g, rep, budget: _Budget):
    w = rep.witness
    c = w["colour"]
    other = 1 - c
    blk = {k: mask_of(v) for k, v in w["blocks"].items()}
    # (colour, inner block, rim block): the inner block's own edges carry the colour
    plans = [
        [(c, blk[(1, 2)], blk[(1, 1)]), (c, blk[(2, 1)], blk[(2, 2)])],
        [(other, blk[(1, 1)], blk[(2, 1)]), (other, blk[(2, 2)], blk[(1, 2)])],
    ]

    def surplus(plan):
        return sum(max(0, q.bit_count() - p.bit_count()) for _, p, q in plan)

    plans.sort(key=surplus)
    last = "no plan succeeded"
    for plan in plans:
        parts = []
        for col, inner, rim in plan:
            adj = g.colour_adj(col)
            oadj = g.colour_adj(1 - col)
            s = max(0, rim.bit_count() - inner.bit_count())
            prefer = sorted(iter_bits(rim), key=lambda v: ((adj[v] & inner).bit_count(), v))
            trims = _trim(oadj, rim, s, prefer, budget, even_only=False)
            if trims is None:
                last = "surplus of a rim block cannot be trimmed"
                break
            rest = (inner | rim) & ~mask_of(v for t in trims for v in t)
            main = _hamilton(adj, rest, budget)
            if main is None:
                last = "no Hamilton cycle on a component"
                break
            parts.append((col, main))
            parts.extend((1 - col, t) for t in trims)
        else:
            return parts
    return HeuristicFailure("extremal_b", last)


# ---------------------------------------------------------------------------
# general pipeline


def _assign_from_matching(g, comps, two) -> list[int]:
    """Component index per vertex, following the 2-matching parts."""
    owner = [-1] * g.n
    cadj = [g.colour_adj(k.colour) for k in comps]
    masks = [k.mask for k in comps]

    def feasible(a, b):
        return [i for i in range(len(comps)) if masks[i] >> a & 1 and masks[i] >> b & 1 and cadj[i][a] >> b & 1]

    for part in two.parts:
        L = len(part)
        prev = -1
        for idx, v in enumerate(part):
            nxt = part[(idx + 1) % L]
            before = part[idx - 1]
            opts = feasible(v, nxt) + feasible(before, v)
            if not opts:
                continue
            owner[v] = prev if prev in opts else opts[0]
            prev = owner[v]
    for v in range(g.n):
        if owner[v] < 0:
            opts = [i for i in range(len(comps)) if masks[i] >> v & 1]
            owner[v] = opts[0]
    return owner


def _merge_two(adj, D: list[int], P: list[int], budget: _Budget):
    """Join cycle D and cycle P (any length) into one cycle via two cross edges."""
    if not D:
        return list(P)
    if not P:
        return list(D)
    LD, LP = len(D), len(P)
    d_pairs = [(D[i], D[(i + 1) % LD], i) for i in range(LD if LD > 2 else 1)] if LD > 1 else [(D[0], D[0], 0)]
    for a, b, i in d_pairs:
        budget.spend(LP)
        # D opened as b ... a
        dpath = D[i + 1 :] + D[: i + 1] if LD > 1 else [D[0]]
        for j in range(LP if LP > 2 else 1):
            ppath = P[j + 1 :] + P[: j + 1] if LP > 1 else [P[0]]
            for q in (ppath, ppath[::-1]):
                c0, d0 = q[0], q[-1]
                if adj[a] >> c0 & 1 and adj[d0] >> b & 1:
                    if LD == 1 and len(q) == 1:
                        return [a, c0]
                    return dpath + q
    return None


def _absorb(adj, D: list[int], v: int, free: int, budget: _Budget, max_len: int = 3):
    """Insert a short path of free vertices, one end at ``v``, between two consecutive cycle vertices."""
    L = len(D)
    one = 1 << v
    if L == 0:
        return None
    if L == 1:
        a = D[0]
        for ell in range(1, max_len + 1):
            p = _short_path(adj, adj[a] & one, adj[a], free, ell, budget)
            if p is not None:
                return [a] + p
        return None
    pairs = [(i, D[i], D[(i + 1) % L]) for i in range(L if L > 2 else 1)]
    for ell in range(1, max_len + 1):
        for i, a, b in pairs:
            p = _short_path(adj, adj[a] & one, adj[b], free, ell, budget)
            if p is None and ell > 1:
                p = _short_path(adj, adj[b] & one, adj[a], free, ell, budget)
                if p is not None:
                    p.reverse()
            if p is not None:
                return D[: i + 1] + p + D[i + 1 :]
    return None


def _is_mono_cycle(adj, seq) -> bool:
    if len(seq) <= 1:
        return True
    if len(seq) == 2:
        return seq[0] != seq[1] and bool(adj[seq[0]] >> seq[1] & 1)
    return is_cycle(adj, seq)


def _general(g, sel: ComponentSelection, budget: _Budget, max_parts: int):
    comps = [k for k in sel.components if not k.is_empty]
    union = [0] * g.n
    for k in comps:
        row = g.colour_adj(k.colour)
        for v in iter_bits(k.mask):
            union[v] |= row[v] & k.mask
    two = perfect_2_matching(union)
    if two is None:
        return HeuristicFailure("two_matching", "union of the selected components has no perfect 2-matching")
    owner = _assign_from_matching(g, comps, two)
    cycles = []
    free = 0
    for i, k in enumerate(comps):
        adj = g.colour_adj(k.colour)
        share = mask_of(v for v in range(g.n) if owner[v] == i)
        budget.spend(share.bit_count() ** 2)
        pieces = [list(p) for p in posa_cycle_cover(adj, within=share)] if share else []
        pieces.sort(key=len, reverse=True)
        main = pieces[0] if pieces else []
        rest = []
        for p in pieces[1:]:
            merged = _merge_two(adj, main, p, budget)
            if merged is not None and _is_mono_cycle(adj, merged):
                main = merged
            else:
                rest.append(p)
        for p in rest:
            free |= mask_of(p)
        cycles.append([k.colour, main])
    # leftovers: lowest colour-degree first
    progress = True
    while free and progress:
        progress = False
        order = sorted(iter_bits(free), key=lambda v: (min(g.colour_adj(c)[v].bit_count() for c in (0, 1)), v))
        for v in order:
            for entry in cycles:
                col, D = entry
                adj = g.colour_adj(col)
                grown = _absorb(adj, D, v, free, budget) if D else None
                if grown is None:
                    continue
                entry[1] = grown
                free &= ~mask_of(grown)
                progress = True
                break
    parts = [(col, D) for col, D in cycles if D]
    if free:
        room = max_parts - len(parts)
        extra = _cover_leftovers(g, free, room, budget)
        if extra is None:
            return HeuristicFailure("absorption", f"{free.bit_count()} vertices could not be absorbed")
        parts.extend(extra)
    return parts


def _cover_leftovers(g, free: int, room: int, budget: _Budget):
    """Cover leftover vertices with at most ``room`` extra monochromatic cycles."""
    if room <= 0:
        return None
    for col in range(g.num_colours):
        cyc = _hamilton(g.colour_adj(col), free, budget)
        if cyc is not None:
            return [(col, cyc)]
    if room >= 2 and free.bit_count() <= 2:
        return [(0, [v]) for v in iter_bits(free)]
    return None


def heuristic_partition(g, gamma=Fraction(1, 48), max_parts: int = 3, step_budget: int = DEFAULT_STEP_BUDGET):
    """Certificate with at most ``max_parts`` monochromatic cycles, or HeuristicFailure(stage)."""
    gamma = as_fraction(gamma)
    budget = _Budget(step_budget)
    if g.num_colours > 2 and any(g.colour_adj(c) != tuple([0] * g.n) for c in range(2, g.num_colours)):
        return HeuristicFailure("component_selection", "only 2-coloured graphs are supported")
    try:
        try:
            out = find_components(g, gamma, strict=False)
        except InternalContradiction as exc:
            return HeuristicFailure("component_selection", str(exc))
        if isinstance(out, ComponentSelection):
            parts = _general(g, out, budget, max_parts)
        elif out.kind == BIPARTITE_LIKE:
            parts = _extremal_a(g, out, budget)
        elif out.kind == FOUR_CYCLE_LIKE:
            parts = _extremal_b(g, out, budget)
        else:  # pragma: no cover - find_components never returns kind none
            return HeuristicFailure("component_selection", "unexpected report")
    except _OutOfBudget:
        return HeuristicFailure("budget", f"step budget {step_budget} exhausted")
    if isinstance(parts, HeuristicFailure):
        return parts
    cert = CyclePartitionCertificate.from_parts(parts)
    if cert.k > max_parts:
        return HeuristicFailure("absorption", f"{cert.k} parts exceed the limit {max_parts}")
    bad = verify_certificate(g, cert)
    if bad is not None:
        return HeuristicFailure("verification", str(bad))
    return cert
