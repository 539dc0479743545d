"""Structural analysis of 2-coloured (multi)graphs.

Contracting sets, recognition of the two extremal colourings, bridges
between same-colour components, and the component-selection procedure
that picks up to three monochromatic components whose union is spanning,
connected and robustly matchable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import InternalContradiction, MinDegreeTooLow
from .graph_core import (
    BLUE,
    DEFAULT_COLOURS,
    RED,
    MonoComponent,
    adjacency_of,
    is_connected,
    iter_bits,
    mask_of,
    monochromatic_components,
    spanning_component_pair,
    union_adjacency,
)
from .two_matching import _gain_bound, as_fraction, robust_tutte

NONE, BIPARTITE_LIKE, FOUR_CYCLE_LIKE = "none", "bipartite_like", "four_cycle_like"


# ---------------------------------------------------------------------------
# contracting sets


def contracting_sets(
    h, gamma, n: int | None = None, max_size: int | None = None, stable_in=None
) -> Iterator[frozenset]:
    """Stable sets S with |N_h(S)| < |S| + gamma*n, smallest first.

    Stability is taken in ``h`` unless ``stable_in`` (typically the host)
    is given.

    Within one size, sets come in lexicographic order.  A branch is cut
    when even the best possible surplus |S| - |N(S)| reachable from it
    cannot beat -gamma*n.
    """
    adj = adjacency_of(h)
    sadj = adj if stable_in is None else adjacency_of(stable_in)
    n = len(adj) if n is None else n
    slack = as_fraction(gamma) * n
    top = len(adj) if max_size is None else max_size
    for size in range(1, top + 1):
        found_any_stable = False
        stack = [(0, 0, (1 << len(adj)) - 1, 0)]
        while stack:
            chosen, nb, cand, k = stack.pop()
            if k == size:
                found_any_stable = True
                if nb.bit_count() < k + slack:
                    yield frozenset(iter_bits(chosen))
                continue
            if cand.bit_count() < size - k:
                continue
            if k - nb.bit_count() + _gain_bound(adj, cand, nb) <= -slack:
                # still must confirm stable sets of this size exist further on
                found_any_stable = True
                continue
            children = []
            rest = cand
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                children.append((chosen | low, nb | adj[v], rest & ~sadj[v], k + 1))
            stack.extend(reversed(children))
        if not found_any_stable:
            return


def min_contracting_set(h, gamma, n: int | None = None) -> frozenset | None:
    return next(contracting_sets(h, gamma, n), None)


# ---------------------------------------------------------------------------
# extremal colourings


@dataclass(frozen=True)
class ExtremalReport:
    kind: str
    gamma: Fraction
    witness: dict = field(default_factory=dict)
    miscoloured_edges: int = 0

    def to_json(self, colours=DEFAULT_COLOURS) -> dict:
        out = {"kind": self.kind, "gamma": str(self.gamma)}
        if self.kind == BIPARTITE_LIKE:
            w = self.witness
            out["witness"] = {
                "spanning_colour": colours[w["colour"]],
                "X1": sorted(w["X1"]),
                "X2": sorted(w["X2"]),
                "B1": sorted(w["B1"]),
                "B2": sorted(w["B2"]),
            }
        elif self.kind == FOUR_CYCLE_LIKE:
            w = self.witness
            out["witness"] = {
                "R_colour": colours[w["colour"]],
                "R1": sorted(w["R1"]),
                "R2": sorted(w["R2"]),
                "B1": sorted(w["B1"]),
                "B2": sorted(w["B2"]),
                "blocks": {f"I{i}{j}": sorted(w["blocks"][(i, j)]) for i in (1, 2) for j in (1, 2)},
            }
            out["miscoloured_edges"] = self.miscoloured_edges
        return out


def _edges_within(row: Sequence[int], mask: int) -> int:
    return sum((row[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def _check_bipartite_like(r, gamma: Fraction, c: int):
    m = r.n
    other = 1 - c
    reds = monochromatic_components(r, c)
    if len(reds) != 1 or reds[0].has_odd_cycle:
        return None
    x1, x2 = reds[0].bipartition
    if abs(len(x1) - len(x2)) > gamma * m:
        return None
    blues = monochromatic_components(r, other)
    if len(blues) != 2 or any(b.has_odd_cycle for b in blues):
        return None
    sets = {blues[0].vertices, blues[1].vertices}
    if sets != {x1, x2}:
        return None
    b1 = x1
    b2 = x2
    return {"colour": c, "X1": x1, "X2": x2, "B1": b1, "B2": b2}


def _check_four_cycle_like(r, gamma: Fraction, c: int):
    m = r.n
    other = 1 - c
    reds = monochromatic_components(r, c)
    blues = monochromatic_components(r, other)
    if len(reds) != 2 or len(blues) != 2:
        return None
    cap = (Fraction(1, 4) + gamma) * m
    best = None
    for order in ((0, 1), (1, 0)):
        R = [reds[0].vertices, reds[1].vertices]
        B = [blues[order[0]].vertices, blues[order[1]].vertices]
        blocks = {(i + 1, j + 1): R[i] & B[j] for i in range(2) for j in range(2)}
        if any(len(b) > cap for b in blocks.values()):
            continue
        wrong = 0
        for (i, j), blk in blocks.items():
            good = other if i == j else c
            bad_row = r.colour_adj(1 - good)
            wrong += _edges_within(bad_row, mask_of(blk))
        if wrong > gamma * m * m:
            continue
        if best is None or wrong < best[0]:
            best = (wrong, {"colour": c, "R1": R[0], "R2": R[1], "B1": B[0], "B2": B[1], "blocks": blocks})
    return best


def detect_extremal(r, gamma) -> ExtremalReport:
    """Recognise either extremal colouring (both colour roles and labellings tried)."""
    gamma = as_fraction(gamma)
    for c in (RED, BLUE):
        w = _check_bipartite_like(r, gamma, c)
        if w is not None:
            rep = ExtremalReport(BIPARTITE_LIKE, gamma, w)
            assert verify_extremal_report(r, rep), "bipartite-like witness failed re-check"
            return rep
    best = None
    for c in (RED, BLUE):
        found = _check_four_cycle_like(r, gamma, c)
        if found is not None and (best is None or found[0] < best[0]):
            best = found
    if best is not None:
        rep = ExtremalReport(FOUR_CYCLE_LIKE, gamma, best[1], best[0])
        assert verify_extremal_report(r, rep), "four-cycle-like witness failed re-check"
        return rep
    return ExtremalReport(NONE, gamma)


def verify_extremal_report(r, rep: ExtremalReport) -> bool:
    """Re-check every clause of the reported configuration directly on ``r``."""
    m = r.n
    g = rep.gamma
    if rep.kind == NONE:
        return True
    w = rep.witness
    c = w["colour"]
    other = 1 - c
    crow, orow = r.colour_adj(c), r.colour_adj(other)
    full = (1 << m) - 1

    def connected_in(row, vs):
        return is_connected(row, mask_of(vs))

    def closed(row, vs):
        mk = mask_of(vs)
        return all(row[v] & ~mk == 0 for v in vs)

    if rep.kind == BIPARTITE_LIKE:
        x1, x2 = mask_of(w["X1"]), mask_of(w["X2"])
        if x1 & x2 or x1 | x2 != full:
            return False
        if abs(x1.bit_count() - x2.bit_count()) > g * m:
            return False
        # spanning component of colour c, bipartite with classes X1, X2
        if not is_connected(crow, full):
            return False
        if any(crow[v] & x1 for v in iter_bits(x1)) or any(crow[v] & x2 for v in iter_bits(x2)):
            return False
        for part in (w["X1"], w["X2"]):
            if not part or not connected_in(orow, part) or not closed(orow, part):
                return False
            if _odd_cycle(orow, mask_of(part)):
                return False
        return set(map(frozenset, (w["B1"], w["B2"]))) == {frozenset(w["X1"]), frozenset(w["X2"])}

    if rep.kind == FOUR_CYCLE_LIKE:
        comps = [(crow, w["R1"]), (crow, w["R2"]), (orow, w["B1"]), (orow, w["B2"])]
        for row, vs in comps:
            if not vs or not connected_in(row, vs) or not closed(row, vs):
                return False
        cover = 0
        wrong = 0
        for i in (1, 2):
            for j in (1, 2):
                blk = w["R%d" % i] & w["B%d" % j]
                if frozenset(blk) != frozenset(w["blocks"][(i, j)]):
                    return False
                if len(blk) > (Fraction(1, 4) + g) * m:
                    return False
                mk = mask_of(blk)
                if mk & cover:
                    return False
                cover |= mk
                bad = crow if i == j else orow
                wrong += sum((bad[v] & mk).bit_count() for v in blk) // 2
        return cover == full and wrong == rep.miscoloured_edges and wrong <= g * m * m
    return False


def _odd_cycle(row: Sequence[int], within: int) -> bool:
    side = {}
    for s in iter_bits(within):
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for x in iter_bits(row[u] & within):
                if x not in side:
                    side[x] = side[u] ^ 1
                    stack.append(x)
                elif side[x] == side[u]:
                    return True
    return False


# ---------------------------------------------------------------------------
# bridges


@dataclass(frozen=True)
class BridgeWitness:
    u: int
    u2: int
    i: int
    j: int
    i2: int
    j2: int
    colour: int
    d: Fraction


def admits_bridges(g, clusters: Sequence, h1, h2, colour: int, d) -> BridgeWitness | None:
    """Two distinct vertices, each dense in ``colour`` into a cluster of h1 and one of h2."""
    d = as_fraction(d)
    if not 0 < d <= 1:
        raise ValueError("density threshold must lie in (0, 1]")
    row = g.colour_adj(colour)
    masks = [mask_of(c) for c in clusters]
    sizes = [len(c) for c in clusters]
    h1, h2 = sorted(h1), sorted(h2)
    hits = []
    for u in range(g.n):
        dense = [k for k in range(len(masks)) if sizes[k] and (row[u] & masks[k]).bit_count() >= d * sizes[k]]
        a = next((k for k in dense if k in h1), None)
        b = next((k for k in dense if k in h2), None)
        if a is not None and b is not None:
            hits.append((u, a, b))
            if len(hits) == 2:
                (u1, i, j), (u2, i2, j2) = hits
                return BridgeWitness(u1, u2, i, j, i2, j2, colour, d)
    return None


# ---------------------------------------------------------------------------
# component selection


@dataclass(frozen=True)
class ComponentSelection:
    components: tuple
    satisfied: dict
    case: str

    def to_json(self, colours=DEFAULT_COLOURS) -> dict:
        return {
            "kind": "selection",
            "case": self.case,
            "components": [c.to_json(colours) for c in self.components],
            "satisfied": dict(self.satisfied),
        }


def selection_properties(r, comps: Sequence[MonoComponent], gamma) -> dict:
    """Evaluate the four selection properties (plus spanning and distinctness)."""
    gamma = as_fraction(gamma)
    m = r.n
    full = (1 << m) - 1
    c1, c2, c3 = comps
    masks = [c.mask for c in comps]
    spans = (masks[0] | masks[1] | masks[2]) == full
    keys = {(c.colour, c.vertices) for c in comps if not c.is_empty}
    distinct = len(keys) == sum(1 for c in comps if not c.is_empty) and sum(1 for c in comps if c.is_empty) <= 1
    adj = union_adjacency(r, comps)
    robust = spans and robust_tutte(adj, gamma) is None
    twice = (masks[0] & masks[1]) | (masks[0] & masks[2]) | (masks[1] & masks[2])
    overlap_a = twice.bit_count() >= (Fraction(1, 3) + gamma) * m
    overlap_b = masks[0] == full and (c1.has_odd_cycle or c2.has_odd_cycle) and c3.is_empty
    bip_rule = (not all(c.is_bipartite for c in comps)) or c3.is_empty
    connected = is_connected(adj, full)
    return {
        "spans": spans,
        "distinct": distinct,
        "robust_tutte": robust,
        "overlap_a": overlap_a,
        "overlap_b": overlap_b,
        "bipartite_rule": bip_rule,
        "connected": connected,
    }


def selection_ok(props: dict) -> bool:
    return (
        props["spans"]
        and props["distinct"]
        and props["robust_tutte"]
        and (props["overlap_a"] or props["overlap_b"])
        and props["bipartite_rule"]
        and props["connected"]
    )


def _by_size(comps):
    return sorted(comps, key=lambda c: (-c.order, min(c.vertices)))


def _case1(r, R: MonoComponent):
    other = 1 - R.colour
    bs = _by_size(monochromatic_components(r, other))
    empty = MonoComponent.empty(other)
    out = []
    if len(bs) >= 2:
        out.append((R, bs[0], bs[1]))
    if len(bs) >= 3:
        out.append((R, bs[0], bs[2]))
    if bs:
        out.append((R, bs[0], empty))
    return out


def _case2(r, R: MonoComponent, B: MonoComponent):
    out = []
    for first, second in ((R, B), (B, R)):
        rest = [c for c in _by_size(monochromatic_components(r, first.colour)) if c.vertices != first.vertices]
        if rest:
            out.append((first, second, rest[0]))
        else:
            out.append((first, second, MonoComponent.empty(first.colour)))
    return out


def _case3(r, R1: MonoComponent, R2: MonoComponent):
    if R2.order > R1.order or (R2.order == R1.order and min(R2.vertices) < min(R1.vertices)):
        R1, R2 = R2, R1
    other = 1 - R1.colour
    touching = [b for b in monochromatic_components(r, other) if b.vertices & R2.vertices]
    if len(touching) == 1 or any(R1.vertices <= b.vertices for b in touching):
        # fall back to the distinct-colour candidates, anchored on R1 and the largest touching component
        B = _by_size(touching)[0]
        return "case2", _case2(r, R1, B)
    if len(touching) != 2:
        return "case3", []
    B1, B2 = _by_size(touching)
    return "case3", [(R1, R2, B1), (R1, R2, B2), (R1, B1, B2), (R2, B1, B2)]


def case3_min_contracting(r, R1, R2, B1, B2, gamma) -> dict:
    """Minimum contracting sets in G - E(X) for each of the four components X."""
    m = r.n
    out = {}
    for name, comp in (("R1", R1), ("R2", R2), ("B1", B1), ("B2", B2)):
        keep = [c for c in (R1, R2, B1, B2) if c is not comp]
        adj = union_adjacency(r, keep)
        out[name] = min_contracting_set(adj, gamma, m)
    return out


def find_components(r, gamma, strict: bool = True):
    """Either a (4 gamma)-extremal report or a verified three-component selection.

    Raises MinDegreeTooLow below the degree threshold (strict mode) and
    InternalContradiction when every candidate of the case analysis fails.
    """
    gamma = as_fraction(gamma)
    m = r.n
    if strict and r.min_degree() < (Fraction(2, 3) + 8 * gamma) * m:
        raise MinDegreeTooLow(f"min degree {r.min_degree()} below (2/3 + 8 gamma) m = {(Fraction(2, 3) + 8 * gamma) * m}")
    rep = detect_extremal(r, 4 * gamma)
    if rep.kind != NONE:
        return rep
    pair = spanning_component_pair(r)
    if pair is None:
        raise InternalContradiction("no two monochromatic components span the graph", instance=r)
    c1, c2 = pair
    full = frozenset(range(m))
    if c1.vertices == full or c2.vertices == full:
        R = c1 if c1.vertices == full else c2
        case, candidates = "case1", _case1(r, R)
    elif c1.colour != c2.colour:
        case, candidates = "case2", _case2(r, c1, c2)
    else:
        case, candidates = _case3(r, c1, c2)
    for comps in candidates:
        props = selection_properties(r, comps, gamma)
        if selection_ok(props):
            return ComponentSelection(tuple(comps), props, case)
    raise InternalContradiction(f"{case}: no candidate selection satisfies all properties", instance=r)
