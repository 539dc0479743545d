"""Integer edge values with prescribed vertex sums, via parity layer and blow-up.

Given a connected host H and even-sum targets t_i, the construction first
fixes a 0/1 parity layer on a DFS spanning tree so that every shortfall
t_i - sum(pi_e) is even, then blows every vertex up into half its shortfall
many twins and reads the remaining edge values off a perfect 2-matching of
the blow-up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import BlowupTooLarge, NotConnected, PreconditionViolated
from .graph_core import adjacency_of, is_connected, iter_bits
from .two_matching import (
    TutteWitness,
    as_fraction,
    hopcroft_karp,
    robust_tutte,
    two_matching_from_permutation,
)

DEFAULT_BLOWUP_CAP = 10**5


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class ParityAdjustment:
    tree_edges: tuple  # (child, parent) pairs in DFS discovery order
    pi: dict
    n: tuple


@dataclass
class BalancingInstance:
    host: object
    targets: Sequence[int]
    gamma: Fraction = Fraction(1, 2)
    t: Fraction | None = None

    def __post_init__(self):
        self.targets = tuple(int(x) for x in self.targets)
        self.gamma = as_fraction(self.gamma)
        if self.t is None:
            m = len(self.targets)
            self.t = Fraction(sum(self.targets), m) if m else Fraction(0)
        else:
            self.t = as_fraction(self.t)


@dataclass(frozen=True)
class BalancingSolution:
    edge_values: dict
    parity_layer: dict
    blowup_sizes: tuple
    tree_edges: tuple = ()

    def vertex_sums(self, m: int) -> list[int]:
        sums = [0] * m
        for (u, v), x in self.edge_values.items():
            sums[u] += x
            sums[v] += x
        return sums

    def to_json(self) -> dict:
        return {
            "edge_values": [[u, v, x] for (u, v), x in sorted(self.edge_values.items())],
            "parity_layer": [[u, v, p] for (u, v), p in sorted(self.parity_layer.items())],
            "blowup_sizes": list(self.blowup_sizes),
        }


@dataclass(frozen=True)
class BalancingInfeasible:
    """The blow-up route failed; ``witness`` is a host stable set when one exists."""

    reason: str
    witness: TutteWitness | None = None
    blowup_sizes: tuple = field(default=())

    def to_json(self) -> dict:
        out = {"infeasible": self.reason, "blowup_sizes": list(self.blowup_sizes)}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def dfs_tree(adj: Sequence[int], root: int = 0) -> list[tuple[int, int]]:
    """DFS spanning tree edges as (child, parent), neighbours visited smallest first."""
    n = len(adj)
    seen = 1 << root
    tree = []
    stack = [(root, adj[root])]
    while stack:
        v, rest = stack[-1]
        rest &= ~seen
        if not rest:
            stack.pop()
            continue
        w = (rest & -rest).bit_length() - 1
        stack[-1] = (v, rest)
        seen |= 1 << w
        tree.append((w, v))
        stack.append((w, adj[w]))
    if seen != (1 << n) - 1:
        raise NotConnected("host graph is not connected")
    return tree


def parity_adjust(host, targets: Sequence[int], root: int = 0) -> ParityAdjustment:
    adj = adjacency_of(host)
    m = len(adj)
    if len(targets) != m:
        raise ValueError("one target per host vertex required")
    if m == 0:
        return ParityAdjustment((), {}, ())
    tree = dfs_tree(adj, root)
    # subtree sums, children finish before parents in reversed discovery order
    sub = list(targets)
    for child, parent in reversed(tree):
        sub[parent] += sub[child]
    pi = {_edge(u, v): 0 for u in range(m) for v in iter_bits(adj[u]) if u < v}
    load = [0] * m
    for child, parent in tree:
        p = sub[child] % 2
        pi[_edge(child, parent)] = p
        load[child] += p
        load[parent] += p
    n = []
    for i in range(m):
        short = targets[i] - load[i]
        if short % 2:
            # only reachable with an odd target sum at the root
            raise PreconditionViolated("target sum is odd", clause="even_sum")
        n.append(short // 2)
    return ParityAdjustment(tuple(tree), pi, tuple(n))


def _check_strict(inst: BalancingInstance, adj) -> None:
    m = len(adj)
    g, t = inst.gamma, inst.t
    if not 0 < g <= Fraction(1, 2):
        raise PreconditionViolated(f"gamma={g} outside (0, 1/2]", clause="gamma")
    if t < 5 * m / g:
        raise PreconditionViolated(f"t={t} below 5m/gamma={5 * m / g}", clause="scale")
    lo, hi = (1 - g / 5) * t, (1 + g / 5) * t
    for i, ti in enumerate(inst.targets):
        if not lo <= ti <= hi:
            raise PreconditionViolated(f"target t_{i}={ti} outside [{lo}, {hi}]", clause="target_range")
    if robust_tutte(adj, g) is not None:
        raise PreconditionViolated("host is not gamma-robust Tutte", clause="robust_tutte")


def balance(
    inst: BalancingInstance, strict: bool = False, blowup_cap: int = DEFAULT_BLOWUP_CAP
) -> BalancingSolution | BalancingInfeasible:
    """Run the parity-layer / blow-up construction and verify the vertex sums.

    Strict mode enforces the magnitude hypotheses (exact rationals) and
    robustness of the host, and raises if they fail.
    """
    adj = adjacency_of(inst.host)
    m = len(adj)
    targets = inst.targets
    if len(targets) != m:
        raise ValueError("one target per host vertex required")
    if any(x < 0 for x in targets):
        raise PreconditionViolated("targets must be non-negative", clause="non_negative")
    if sum(targets) % 2:
        raise PreconditionViolated("target sum is odd", clause="even_sum")
    if not is_connected(adj):
        if strict:
            raise PreconditionViolated("host is not connected", clause="connected")
        raise NotConnected("host graph is not connected")
    if strict:
        _check_strict(inst, adj)
    par = parity_adjust(adj, targets)
    sizes = par.n
    if any(x < 0 for x in sizes):
        if strict:
            raise AssertionError("negative blow-up size under strict hypotheses")
        return BalancingInfeasible("negative_shortfall", None, sizes)
    total = sum(sizes)
    if total > blowup_cap:
        raise BlowupTooLarge(f"blow-up has {total} vertices, cap is {blowup_cap}")

    offset = [0] * (m + 1)
    for i in range(m):
        offset[i + 1] = offset[i] + sizes[i]
    block = [i for i in range(m) for _ in range(sizes[i])]
    # twins in one block share a single adjacency list
    shared = [[w for j in iter_bits(adj[i]) for w in range(offset[j], offset[j + 1])] for i in range(m)]
    left = [shared[i] for i in block]
    match = hopcroft_karp(left, total)
    if any(v < 0 for v in match):
        if strict:
            raise AssertionError("blow-up lacks a perfect 2-matching under strict hypotheses")
        return BalancingInfeasible("no_perfect_2_matching", _lifted_witness(adj, sizes, match, block), sizes)
    two = two_matching_from_permutation(match)

    values = dict.fromkeys(par.pi, 0)
    for (a, b), w in two.omega().items():
        values[_edge(block[a], block[b])] += w
    for e, p in par.pi.items():
        values[e] += p
    sol = BalancingSolution(values, dict(par.pi), sizes, par.tree_edges)
    if sol.vertex_sums(m) != list(targets) or any(x < 0 for x in values.values()):
        raise AssertionError("balancing produced wrong vertex sums")
    return sol


def _lifted_witness(adj, sizes, match, block) -> TutteWitness:
    """Project a Hall violator of the blow-up's double cover onto host vertices."""
    from .two_matching import _hall_violator

    total = len(block)
    badj = []
    offset = [0]
    for s in sizes:
        offset.append(offset[-1] + s)
    full = [0] * len(sizes)
    for i, s in enumerate(sizes):
        full[i] = ((1 << s) - 1) << offset[i]
    for v in range(total):
        nb = 0
        for j in iter_bits(adj[block[v]]):
            nb |= full[j]
        badj.append(nb)
    w = _hall_violator(badj, match)
    s_host = sorted({block[v] for v in w.stable_set})
    nb_host = 0
    for i in s_host:
        nb_host |= adj[i]
    n_host = list(iter_bits(nb_host))
    deficiency = sum(sizes[i] for i in s_host) - sum(sizes[j] for j in n_host)
    return TutteWitness(frozenset(s_host), frozenset(n_host), deficiency)


def balance_oracle(host, targets: Sequence[int]) -> bool:
    """Independent feasibility test via Tutte's theorem on the twin graph.

    Non-negative integer edge values with vertex sums t_i exist exactly when
    the graph with t_i non-adjacent twins per vertex (complete bipartite
    between twins of adjacent vertices) has a perfect matching.  Its
    Gallai-Edmonds barrier is invariant under swapping twins, so only
    barriers made of whole twin classes need checking: for every host set
    A, the odd components left after deleting A number at most t(A).  A
    class whose host vertex is isolated in H - A contributes t_i singleton
    components; any other component contributes one iff its total is odd.
    """
    adj = adjacency_of(host)
    b = list(targets)
    if sum(b) % 2:
        return False
    live = [i for i in range(len(adj)) if b[i] > 0]
    live_mask = 0
    for i in live:
        live_mask |= 1 << i
    k = len(live)
    for sub in range(1 << k):
        a_mask = 0
        for idx in range(k):
            if sub >> idx & 1:
                a_mask |= 1 << live[idx]
        rest = live_mask & ~a_mask
        odd = 0
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= adj[v]
                nxt &= rest & ~comp
                comp |= nxt
                frontier = nxt
            rest &= ~comp
            total = sum(b[v] for v in iter_bits(comp))
            if comp == seed:
                odd += total
            elif total % 2:
                odd += 1
        if odd > sum(b[v] for v in iter_bits(a_mask)):
            return False
    return True


def check_vertex_sums(host, targets: Sequence[int], edge_values: Mapping) -> bool:
    """Per-vertex sum checker used on every returned solution in tests."""
    adj = adjacency_of(host)
    sums = [0] * len(adj)
    for (u, v), x in edge_values.items():
        if x < 0 or not adj[u] >> v & 1:
            return False
        sums[u] += x
        sums[v] += x
    return sums == list(targets)
