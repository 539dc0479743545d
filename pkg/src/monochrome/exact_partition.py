"""Exact minimum partition into monochromatic cycles, and certificate checking.

For each colour a subset DP marks every vertex set spanned by one cycle of
that colour (sets of size <= 1 always qualify, size 2 needs an edge of the
colour).  A ranked subset convolution then computes, for j = 1, 2, ...,
which vertex sets split into at most j such parts; the empty part is
allowed, so these tables are monotone in j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InstanceTooLarge
from .graph_core import DEFAULT_COLOURS, adjacency_of, iter_bits, lowest_bit, mask_of
from .hamilton import _compact, _trace_path, endpoint_table

DEFAULT_CAP = 18


@dataclass(frozen=True)
class CyclePart:
    colour: int
    vertices: tuple

    def to_json(self, colours=DEFAULT_COLOURS) -> dict:
        return {"colour": colours[self.colour], "vertices": list(self.vertices)}


@dataclass(frozen=True)
class CyclePartitionCertificate:
    parts: tuple

    def __len__(self):
        return len(self.parts)

    @property
    def k(self) -> int:
        """Number of non-empty parts."""
        return sum(1 for p in self.parts if p.vertices)

    def to_json(self, colours=DEFAULT_COLOURS) -> dict:
        return {"parts": [p.to_json(colours) for p in self.parts]}

    @classmethod
    def from_parts(cls, parts) -> "CyclePartitionCertificate":
        return cls(tuple(CyclePart(int(c), tuple(int(v) for v in vs)) for c, vs in parts))


@dataclass(frozen=True)
class Unsat:
    k_max: int


@dataclass(frozen=True)
class Violation:
    part: int | None
    clause: str
    message: str

    def __str__(self):
        where = "" if self.part is None else f"part {self.part}: "
        return f"{where}{self.clause}: {self.message}"


def verify_certificate(g, cert: CyclePartitionCertificate) -> Violation | None:
    """None when the parts partition V(g) into valid monochromatic cycles."""
    n = g.n
    seen = 0
    for idx, part in enumerate(cert.parts):
        vs = part.vertices
        for v in vs:
            if not 0 <= v < n:
                return Violation(idx, "vertex_range", f"vertex {v} outside 0..{n - 1}")
        m = mask_of(vs)
        if m.bit_count() != len(vs):
            return Violation(idx, "repeated_vertex", "a vertex occurs twice in one part")
        if m & seen:
            return Violation(idx, "disjoint", f"vertices {sorted(iter_bits(m & seen))} already used")
        seen |= m
        if len(vs) <= 1:
            continue
        if not 0 <= part.colour < g.num_colours:
            return Violation(idx, "colour", f"unknown colour index {part.colour}")
        row = g.colour_adj(part.colour)
        pairs = [(vs[0], vs[1])] if len(vs) == 2 else [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
        for a, b in pairs:
            if not row[a] >> b & 1:
                return Violation(idx, "colour", f"edge {a}-{b} is not {g.colours[part.colour]}")
    missing = ((1 << n) - 1) & ~seen
    if missing:
        return Violation(None, "coverage", f"vertices {sorted(iter_bits(missing))} not covered")
    return None


def is_valid_certificate(g, cert) -> bool:
    return verify_certificate(g, cert) is None


class _CycleFamily:
    """Per-colour cyclable-subset tables over a compact vertex labelling."""

    def __init__(self, cadjs: Sequence[Sequence[int]]):
        k = len(cadjs[0]) if cadjs else 0
        self.k = k
        self.cadjs = [list(c) for c in cadjs]
        size = 1 << k
        masks = np.arange(size, dtype=np.int64)
        pc = np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)
        low = np.zeros(size, dtype=np.int64)
        low[1:] = np.log2((masks[1:] & -masks[1:]).astype(np.float64)).astype(np.int64)
        self.tables = []
        self.cyc = []
        for cadj in self.cadjs:
            dp = np.asarray(endpoint_table(cadj), dtype=np.int64)
            adj_low = np.asarray(cadj, dtype=np.int64)[low] if k else np.zeros(size, dtype=np.int64)
            ok = pc <= 1
            two = pc == 2
            # a pair is an edge iff the path table reaches the other vertex
            ok |= two & (dp != 0)
            ok |= (pc >= 3) & ((dp & adj_low) != 0)
            self.tables.append(dp)
            self.cyc.append(ok)
        self.any = np.zeros(size, dtype=bool)
        for ok in self.cyc:
            self.any |= ok
        self.pc = pc

    def colour_of(self, mask: int) -> int:
        for c, ok in enumerate(self.cyc):
            if ok[mask]:
                return c
        raise KeyError(mask)

    def sequence(self, colour: int, mask: int) -> list[int]:
        if mask == 0:
            return []
        if mask & (mask - 1) == 0:
            return [lowest_bit(mask)]
        cadj = self.cadjs[colour]
        if mask.bit_count() == 2:
            a = lowest_bit(mask)
            return [a, lowest_bit(mask ^ (1 << a))]
        dp = self.tables[colour]
        a = lowest_bit(mask)
        end = lowest_bit(int(dp[mask]) & cadj[a])
        return _trace_path(dp, cadj, mask, end)


def _zeta_ranked(f: np.ndarray, pc: np.ndarray, k: int) -> np.ndarray:
    """Ranked zeta transform: out[r, M] = sum of f over subsets of M with popcount r."""
    size = 1 << k
    out = np.zeros((k + 1, size), dtype=np.int64)
    out[pc, np.arange(size)] = f
    for i in range(k):
        bit = 1 << i
        view = out.reshape(k + 1, -1, 2 * bit)
        view[:, :, bit:] += view[:, :, :bit]
    return out


def _mobius_ranked(h: np.ndarray, k: int) -> np.ndarray:
    for i in range(k):
        bit = 1 << i
        view = h.reshape(k + 1, -1, 2 * bit)
        view[:, :, bit:] -= view[:, :, :bit]
    return h


def _disjoint_union(f: np.ndarray, g_hat: np.ndarray, pc: np.ndarray, k: int) -> np.ndarray:
    """Boolean table of sets splitting as A u B (disjoint), A from f, B from the zeta-ranked g."""
    fz = _zeta_ranked(f.astype(np.int64), pc, k)
    h = np.zeros_like(fz)
    for r in range(k + 1):
        acc = h[r]
        for i in range(r + 1):
            acc += fz[i] * g_hat[r - i]
    _mobius_ranked(h, k)
    size = 1 << k
    return h[pc, np.arange(size)] > 0


def _value_at(full: int, f: np.ndarray, fam_any: np.ndarray) -> bool:
    """Whether ``full`` splits into a set from fam_any and a disjoint set from f (O(2^k))."""
    masks = np.arange(full + 1, dtype=np.int64)
    subs = masks[(masks & ~full) == 0]
    return bool(np.any(fam_any[subs] & f[full ^ subs]))


def _min_partition(fam: _CycleFamily, k_max: int):
    """Smallest j <= k_max with V splitting into j parts, plus the tables to rebuild it."""
    k = fam.k
    full = (1 << k) - 1
    if k == 0:
        return 0, []
    tables = [fam.any]
    if fam.any[full]:
        return 1, tables
    g_hat = _zeta_ranked(fam.any.astype(np.int64), fam.pc, k)
    for j in range(2, k_max + 1):
        if _value_at(full, tables[-1], fam.any):
            return j, tables
        if j == k_max:
            break
        tables.append(_disjoint_union(tables[-1], g_hat, fam.pc, k))
    return None, tables


def _rebuild(fam: _CycleFamily, tables, j: int) -> list[tuple[int, list[int]]]:
    k = fam.k
    rest = (1 << k) - 1
    parts = []
    masks = np.arange(1 << k, dtype=np.int64)
    while rest:
        if j == 1 or fam.any[rest]:
            c = fam.colour_of(rest)
            parts.append((c, fam.sequence(c, rest)))
            break
        low = rest & -rest
        prev = tables[j - 2]
        cand = masks[((masks & ~rest) == 0) & ((masks & low) != 0)]
        good = cand[fam.any[cand] & prev[rest ^ cand]]
        s = int(good[0])
        c = fam.colour_of(s)
        parts.append((c, fam.sequence(c, s)))
        rest ^= s
        j -= 1
    return parts


def min_mono_cycle_partition(g, k_max: int, cap: int = DEFAULT_CAP):
    """``(k*, certificate)`` for the least k* <= k_max, else ``Unsat(k_max)``."""
    n = g.n
    if n > cap:
        raise InstanceTooLarge(f"exact partition limited to n <= {cap}, got {n}")
    if k_max < 1 and n > 0:
        return Unsat(k_max)
    if n == 0:
        return 0, CyclePartitionCertificate(())
    within = (1 << n) - 1
    cadjs = [_compact(g.colour_adj(c), within)[1] for c in range(g.num_colours)]
    fam = _CycleFamily(cadjs)
    j, tables = _min_partition(fam, k_max)
    if j is None:
        return Unsat(k_max)
    parts = _rebuild(fam, tables, j)
    cert = CyclePartitionCertificate.from_parts(parts)
    violation = verify_certificate(g, cert)
    if violation is not None:
        raise AssertionError(f"exact solver produced an invalid certificate: {violation}")
    return j, cert


def min_cycle_cover_single(adj: Sequence[int], within: int, cap: int = DEFAULT_CAP) -> list[tuple]:
    """Optimal partition of ``within`` into cycles of one uncoloured graph."""
    if within.bit_count() > cap:
        raise InstanceTooLarge(f"exact cover limited to {cap} vertices")
    if not within:
        return []
    labels, cadj = _compact(adj, within)
    fam = _CycleFamily([cadj])
    j, tables = _min_partition(fam, len(labels))
    parts = _rebuild(fam, tables, j)
    return [tuple(labels[i] for i in seq) for _, seq in parts]
