import math
from fractions import Fraction

import pytest

from monochrome.errors import InfeasibleParameters
from monochrome.exact_partition import CyclePartitionCertificate, Unsat, is_valid_certificate, min_mono_cycle_partition
from monochrome.generators import (
    extremal_b_blocks,
    gen_extremal_a,
    gen_extremal_b,
    gen_random_min_degree,
    gen_random_reduced,
    gen_sharpness,
    gen_three_colour,
)
from monochrome.graph_core import BLUE, GREEN, RED
from monochrome.two_matching import as_fraction


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_sharpness_degrees(m):
    g = gen_sharpness(m)
    n = 3 * m + 6
    assert g.n == n and g.min_degree() == 2 * m + 2 == 2 * n // 3 - 2
    deg = g.degrees()
    k2 = range(2 * m + 4, 3 * m + 4)
    assert all(deg[v] == 3 * m + 5 for v in k2)
    others = [v for v in range(n) if v not in k2]
    assert all(deg[v] == 2 * m + 2 for v in others)
    # complete bar the a-b pair and the K-K' pairs
    assert not g.adj[3 * m + 4] >> (3 * m + 5) & 1


def test_sharpness_inner_colour_and_errors():
    g = gen_sharpness(2, BLUE)
    k2 = list(range(8, 10))
    assert g.colour_adj(BLUE)[k2[0]] >> k2[1] & 1
    with pytest.raises(ValueError):
        gen_sharpness(0)
    with pytest.raises(ValueError):
        gen_sharpness(1, GREEN)


def test_three_colour_structure():
    for m in (1, 2, 3):
        g = gen_three_colour(m)
        assert g.n == 4 * m + 5 and g.num_colours == 3
        # all pairs except inside B, inside D, and between A and C
        assert len(g.coloured_edges()) == math.comb(4 * m + 5, 2) - math.comb(m, 2) - math.comb(m + 1, 2) - (m + 2) ** 2
        n = 4 * m + 5
        assert g.min_degree() == 3 * m + 2 == (3 * n) // 4 - 1
    with pytest.raises(ValueError):
        gen_three_colour(0)


@pytest.mark.parametrize("m", [2, 3])
def test_three_colour_needs_four(m):
    g = gen_three_colour(m)
    assert min_mono_cycle_partition(g, 3) == Unsat(3)
    k, cert = min_mono_cycle_partition(g, 4)
    assert k == 4 and is_valid_certificate(g, cert)


def test_three_colour_m1_has_three_part_partition():
    # a red triangle in A, a blue B-C edge, and a green 4-cycle on the rest
    g = gen_three_colour(1)
    cert = CyclePartitionCertificate.from_parts([(RED, (0, 2, 1)), (BLUE, (3, 4)), (GREEN, (5, 8, 6, 7))])
    assert is_valid_certificate(g, cert)


def test_extremal_a_determinism_and_errors():
    a = gen_extremal_a(12, Fraction(1, 10), seed=4)
    b = gen_extremal_a(12, Fraction(1, 10), seed=4)
    assert a.coloured_edges() == b.coloured_edges()
    assert gen_extremal_a(12, Fraction(1, 10), seed=5).coloured_edges() != a.coloured_edges()
    with pytest.raises(InfeasibleParameters):
        gen_extremal_a(12, Fraction(1, 100), surplus=2)
    with pytest.raises(InfeasibleParameters):
        gen_extremal_a(12, Fraction(1, 2), surplus=1)
    with pytest.raises(InfeasibleParameters):
        gen_extremal_a(1, Fraction(1, 2))


def test_extremal_b_blocks_and_errors():
    assert [len(b) for b in extremal_b_blocks(18)] == [5, 5, 4, 4]
    with pytest.raises(InfeasibleParameters):
        gen_extremal_b(3, Fraction(1, 10))
    g = gen_extremal_b(16, Fraction(1, 10), seed=1)
    assert g.coloured_edges() == gen_extremal_b(16, Fraction(1, 10), seed=1).coloured_edges()


@pytest.mark.parametrize("n,delta", [(10, 0.7), (30, 0.75), (60, 0.8), (12, Fraction(3, 4))])
def test_random_min_degree(n, delta):
    for seed in range(5):
        g = gen_random_min_degree(n, delta, seed=seed)
        assert g.min_degree() >= math.ceil(as_fraction(delta) * n)
        assert gen_random_min_degree(n, delta, seed=seed).coloured_edges() == g.coloured_edges()


def test_random_min_degree_bias_and_errors():
    g = gen_random_min_degree(20, 0.7, colour_bias=1.0, seed=1)
    assert all(c == RED for _, _, c in g.coloured_edges())
    with pytest.raises(ValueError):
        gen_random_min_degree(10, 1.0)
    with pytest.raises(ValueError):
        gen_random_min_degree(3, 0.9)


def test_random_reduced_degree():
    gamma = Fraction(1, 48)
    for m in range(12, 19):
        r = gen_random_reduced(m, gamma, seed=m)
        assert r.min_degree() >= math.ceil((Fraction(2, 3) + 8 * gamma) * m)
