"""Coloured graph data model, monochromatic components and stable sets.

Vertices are dense integers ``0..n-1``; adjacency is kept per colour as
Python ``int`` bitsets so the exact kernels can work on masks directly.
Colour indices: 0 = red, 1 = blue, 2 = green.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

RED, BLUE, GREEN = 0, 1, 2
DEFAULT_COLOURS = ("red", "blue", "green")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class SimpleGraph:
    """Uncoloured simple graph stored as adjacency bitmasks."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.adj = tuple(adj)

    @classmethod
    def from_adjacency(cls, adj: Sequence[int]) -> "SimpleGraph":
        g = cls.__new__(cls)
        g.n = len(adj)
        g.adj = tuple(adj)
        return g

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def neighbourhood(self, mask: int) -> int:
        out = 0
        for v in iter_bits(mask):
            out |= self.adj[v]
        return out

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, edges={len(self.edges())})"


class _ColouredBase:
    """Shared per-colour adjacency for simple and multi coloured graphs."""

    __slots__ = ("n", "colours", "_cadj", "_adj")

    def _build(self, n, edges, colours, allow_parallel):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        colours = tuple(colours) if colours is not None else None
        cadj: dict[int, list[int]] = {}
        seen: dict[tuple[int, int], set[int]] = {}
        top = -1
        for u, v, c in edges:
            u, v, c = int(u), int(v), int(c)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if c < 0:
                raise ValueError(f"negative colour index {c}")
            key = (u, v) if u < v else (v, u)
            have = seen.setdefault(key, set())
            if c in have:
                raise ValueError(f"duplicate {c}-coloured edge {key}")
            if have and not allow_parallel:
                raise ValueError(f"pair {key} carries more than one colour")
            have.add(c)
            row = cadj.setdefault(c, [0] * n)
            row[u] |= 1 << v
            row[v] |= 1 << u
            top = max(top, c)
        if colours is None:
            colours = DEFAULT_COLOURS[: max(2, top + 1)]
        if top >= len(colours):
            raise ValueError(f"colour index {top} exceeds palette {colours}")
        self.colours = colours
        self._cadj = tuple(tuple(cadj.get(c, [0] * n)) for c in range(len(colours)))
        adj = [0] * n
        for row in self._cadj:
            for v in range(n):
                adj[v] |= row[v]
        self._adj = tuple(adj)

    @property
    def num_colours(self) -> int:
        return len(self.colours)

    def colour_adj(self, colour: int) -> tuple[int, ...]:
        return self._cadj[colour]

    @property
    def adj(self) -> tuple[int, ...]:
        return self._adj

    def colour_graph(self, colour: int) -> SimpleGraph:
        return SimpleGraph.from_adjacency(self._cadj[colour])

    def underlying(self) -> SimpleGraph:
        return SimpleGraph.from_adjacency(self._adj)

    def has_edge(self, u: int, v: int, colour: int | None = None) -> bool:
        row = self._adj if colour is None else self._cadj[colour]
        return bool(row[u] >> v & 1)

    def neighbours(self, v: int, colour: int | None = None) -> list[int]:
        row = self._adj if colour is None else self._cadj[colour]
        return list(iter_bits(row[v]))

    def degree(self, v: int, colour: int | None = None) -> int:
        row = self._adj if colour is None else self._cadj[colour]
        return row[v].bit_count()

    def degrees(self, colour: int | None = None) -> list[int]:
        row = self._adj if colour is None else self._cadj[colour]
        return [a.bit_count() for a in row]

    def min_degree(self) -> int:
        """Minimum degree of the underlying simple graph."""
        return min(self.degrees(), default=0)

    def edges_of_colour(self, colour: int) -> list[tuple[int, int]]:
        row = self._cadj[colour]
        return [(u, v) for u in range(self.n) for v in iter_bits(row[u] >> (u + 1) << (u + 1))]

    def coloured_edges(self) -> list[tuple[int, int, int]]:
        out = [(u, v, c) for c in range(self.num_colours) for u, v in self.edges_of_colour(c)]
        out.sort()
        return out


class ColouredGraph(_ColouredBase):
    """Simple graph whose edges each carry one colour from a small palette."""

    __slots__ = ()

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = (), colours=None):
        self._build(n, edges, colours, allow_parallel=False)

    def colour_of(self, u: int, v: int) -> int | None:
        for c, row in enumerate(self._cadj):
            if row[u] >> v & 1:
                return c
        return None

    def to_multigraph(self) -> "ColouredMultiGraph":
        return ColouredMultiGraph(self.n, self.coloured_edges(), self.colours)

    def __eq__(self, other):
        return (
            isinstance(other, ColouredGraph)
            and self.n == other.n
            and self._cadj == other._cadj
            and self.colours == other.colours
        )

    def __hash__(self):
        return hash((self.n, self._cadj))

    def __repr__(self):
        return f"ColouredGraph(n={self.n}, edges={len(self.coloured_edges())}, colours={self.colours})"


class ColouredMultiGraph(_ColouredBase):
    """Coloured multigraph: a vertex pair may carry one edge of each colour."""

    __slots__ = ()

    def __init__(self, m: int, edges: Iterable[tuple[int, int, int]] = (), colours=None):
        self._build(m, edges, colours, allow_parallel=True)

    @property
    def m(self) -> int:
        return self.n

    def to_graph(self) -> ColouredGraph:
        """Collapse to a ColouredGraph; fails if some pair carries two colours."""
        return ColouredGraph(self.n, self.coloured_edges(), self.colours)

    def __eq__(self, other):
        return (
            isinstance(other, ColouredMultiGraph)
            and self.n == other.n
            and self._cadj == other._cadj
            and self.colours == other.colours
        )

    def __hash__(self):
        return hash((self.n, self._cadj, "multi"))

    def __repr__(self):
        return f"ColouredMultiGraph(m={self.n}, edges={len(self.coloured_edges())}, colours={self.colours})"


def adjacency_of(g, colour: int | None = None) -> tuple[int, ...]:
    """Adjacency bitmasks of ``g`` (any graph type), optionally one colour only.

    A plain sequence of bitmasks is accepted as an uncoloured graph.
    """
    if isinstance(g, (tuple, list)):
        if colour is not None:
            raise ValueError("uncoloured graph has no colour classes")
        return tuple(g)
    if isinstance(g, SimpleGraph):
        if colour is not None:
            raise ValueError("uncoloured graph has no colour classes")
        return g.adj
    if colour is None:
        return g.adj
    return g.colour_adj(colour)


@dataclass(frozen=True)
class MonoComponent:
    """A monochromatic component; empty and singleton components are legal values."""

    colour: int
    vertices: frozenset
    has_odd_cycle: bool
    bipartition: tuple | None

    @property
    def mask(self) -> int:
        return mask_of(self.vertices)

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bipartite(self) -> bool:
        return not self.has_odd_cycle

    @classmethod
    def empty(cls, colour: int) -> "MonoComponent":
        return cls(colour, frozenset(), False, (frozenset(), frozenset()))

    def sort_key(self):
        return (-len(self.vertices), min(self.vertices, default=-1), self.colour)

    def to_json(self, colours=DEFAULT_COLOURS) -> dict:
        out = {
            "colour": colours[self.colour],
            "vertices": sorted(self.vertices),
            "has_odd_cycle": self.has_odd_cycle,
        }
        if self.bipartition is not None:
            out["bipartition"] = [sorted(self.bipartition[0]), sorted(self.bipartition[1])]
        return out


def monochromatic_components(g, colour: int) -> list[MonoComponent]:
    """Components of the ``colour`` subgraph, ordered by smallest vertex.

    Colour-isolated vertices are returned as singleton components.  Each
    component carries a 2-colouring from BFS when one exists.
    """
    adj = adjacency_of(g, colour)
    n = len(adj)
    side = [-1] * n
    out = []
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        members = [s]
        odd = False
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in iter_bits(adj[u]):
                if side[w] < 0:
                    side[w] = side[u] ^ 1
                    members.append(w)
                    queue.append(w)
                elif side[w] == side[u]:
                    odd = True
        verts = frozenset(members)
        if odd:
            bip = None
        else:
            bip = (
                frozenset(v for v in members if side[v] == 0),
                frozenset(v for v in members if side[v] == 1),
            )
        out.append(MonoComponent(colour, verts, odd, bip))
    return out


def all_components(g) -> list[MonoComponent]:
    comps = []
    for c in range(g.num_colours):
        comps.extend(monochromatic_components(g, c))
    return comps


def spanning_component_pair(g) -> tuple[MonoComponent, MonoComponent] | None:
    """Two monochromatic components whose vertex sets together cover V(g).

    Builds the bipartite intersection graph between red and blue components
    (one edge per vertex of g).  A spanning pair is exactly a vertex cover of
    size at most two; by Konig this needs a maximum matching of size <= 2,
    which is checked first.  Pairs are scanned largest-first so a spanning
    component is reported as the first entry when one exists.
    """
    from .two_matching import hopcroft_karp

    if g.n == 0:
        return MonoComponent.empty(RED), MonoComponent.empty(BLUE)
    red = monochromatic_components(g, RED)
    blue = monochromatic_components(g, BLUE)
    red_of = {v: i for i, c in enumerate(red) for v in c.vertices}
    blue_of = {v: j for j, c in enumerate(blue) for v in c.vertices}
    left = [set() for _ in red]
    for v in range(g.n):
        left[red_of[v]].add(blue_of[v])
    match = hopcroft_karp([sorted(s) for s in left], len(blue))
    if sum(1 for x in match if x >= 0) > 2:
        return None
    full = (1 << g.n) - 1
    comps = sorted(red + blue, key=MonoComponent.sort_key)
    masks = [c.mask for c in comps]
    for i, j in combinations(range(len(comps)), 2):
        if masks[i] | masks[j] == full:
            return comps[i], comps[j]
    return None


def stable_masks(adj: Sequence[int], max_size: int | None = None, within: int | None = None) -> Iterator[int]:
    """Enumerate stable sets (as bitmasks) of size <= max_size, empty set first."""
    n = len(adj)
    if max_size is None:
        max_size = n
    cand0 = (1 << n) - 1 if within is None else within
    stack = [(0, cand0, 0)]
    while stack:
        chosen, cand, size = stack.pop()
        yield chosen
        if size >= max_size:
            continue
        # push in reverse so smaller vertices are expanded first
        children = []
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            children.append((chosen | low, rest & ~adj[v], size + 1))
        stack.extend(reversed(children))


def stable_sets(g, max_size: int | None = None) -> Iterator[frozenset]:
    """All stable sets of the underlying simple graph with at most ``max_size`` vertices."""
    for mask in stable_masks(adjacency_of(g), max_size):
        yield frozenset(iter_bits(mask))


def is_stable(adj: Sequence[int], mask: int) -> bool:
    for v in iter_bits(mask):
        if adj[v] & mask:
            return False
    return True


def neighbourhood(adj: Sequence[int], mask: int) -> int:
    out = 0
    for v in iter_bits(mask):
        out |= adj[v]
    return out


def is_connected(adj: Sequence[int], within: int | None = None) -> bool:
    """Connectivity of the subgraph induced on ``within`` (default: all vertices)."""
    n = len(adj)
    within = (1 << n) - 1 if within is None else within
    if within == 0:
        return True
    seen = within & -within
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen == within


def union_adjacency(g, components: Iterable[MonoComponent]) -> tuple[int, ...]:
    """Uncoloured adjacency of the union of the given components' edge sets."""
    out = [0] * g.n
    for comp in components:
        if comp.is_empty:
            continue
        row = g.colour_adj(comp.colour)
        m = comp.mask
        for v in comp.vertices:
            out[v] |= row[v] & m
    return tuple(out)
