import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_min_partition, random_coloured
from monochrome.errors import InstanceTooLarge
from monochrome.exact_partition import (
    CyclePartitionCertificate,
    Unsat,
    is_valid_certificate,
    min_mono_cycle_partition,
    verify_certificate,
)
from monochrome.generators import gen_sharpness
from monochrome.graph_core import BLUE, RED, ColouredGraph


def k_n_coloured(rng, n):
    return ColouredGraph(n, [(u, v, rng.randrange(2)) for u, v in itertools.combinations(range(n), 2)])


def test_red_triangle():
    g = ColouredGraph(3, [(0, 1, RED), (1, 2, RED), (0, 2, RED)])
    k, cert = min_mono_cycle_partition(g, 3)
    assert k == 1 and cert.parts[0].colour == RED and sorted(cert.parts[0].vertices) == [0, 1, 2]


def test_empty_graph_and_degenerate_parts():
    assert min_mono_cycle_partition(ColouredGraph(0, []), 1)[0] == 0
    k, cert = min_mono_cycle_partition(ColouredGraph(3, []), 3)
    assert k == 3 and is_valid_certificate(ColouredGraph(3, []), cert)
    assert min_mono_cycle_partition(ColouredGraph(3, []), 2) == Unsat(2)


def test_sharpness_unsat_at_three():
    g = gen_sharpness(1)
    assert min_mono_cycle_partition(g, 3) == Unsat(3)
    k, cert = min_mono_cycle_partition(g, 9)
    assert k == 4 and is_valid_certificate(g, cert)


def test_instance_cap():
    with pytest.raises(InstanceTooLarge):
        min_mono_cycle_partition(ColouredGraph(19, []), 3)


def test_verify_violations():
    g = ColouredGraph(4, [(0, 1, RED), (1, 2, RED), (2, 3, RED), (3, 0, BLUE)])
    missing = CyclePartitionCertificate.from_parts([(RED, (0, 1)), (RED, (2,))])
    assert verify_certificate(g, missing).clause == "coverage"
    wrong = CyclePartitionCertificate.from_parts([(RED, (0, 1, 2, 3))])
    v = verify_certificate(g, wrong)
    assert v.clause == "colour" and v.part == 0
    overlap = CyclePartitionCertificate.from_parts([(RED, (0, 1)), (RED, (1, 2)), (RED, (3,))])
    assert verify_certificate(g, overlap).clause == "disjoint"
    assert verify_certificate(g, CyclePartitionCertificate.from_parts([(RED, (0, 0))])).clause == "repeated_vertex"
    assert verify_certificate(g, CyclePartitionCertificate.from_parts([(RED, (0, 7))])).clause == "vertex_range"
    ok = CyclePartitionCertificate.from_parts([(BLUE, (0, 3)), (RED, (1, 2))])
    assert verify_certificate(g, ok) is None
    # single vertices ignore their nominal colour
    singles = CyclePartitionCertificate.from_parts([(BLUE, (v,)) for v in range(4)])
    assert verify_certificate(g, singles) is None


def test_agrees_with_naive_partition_search():
    rng = random.Random(1)
    for _ in range(150):
        n = rng.randint(1, 7)
        g = random_coloured(rng, n)
        want = brute_min_partition(g, n)
        got = min_mono_cycle_partition(g, n)
        assert got[0] == want
        assert is_valid_certificate(g, got[1])


def test_three_colours():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(1, 6)
        g = random_coloured(rng, n, colours=3)
        assert min_mono_cycle_partition(g, n)[0] == brute_min_partition(g, n)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10**6))
def test_monotone_in_k(n, seed):
    g = random_coloured(random.Random(seed), n)
    k_star = min_mono_cycle_partition(g, n)[0]
    for k in range(1, n + 1):
        res = min_mono_cycle_partition(g, k)
        if k < k_star:
            assert res == Unsat(k)
        else:
            assert res[0] == k_star and is_valid_certificate(g, res[1])


def test_two_cycles_in_two_coloured_complete_graphs():
    rng = random.Random(3)
    for n in range(3, 11):
        for _ in range(20):
            g = k_n_coloured(rng, n)
            res = min_mono_cycle_partition(g, 2)
            assert res != Unsat(2)
            assert is_valid_certificate(g, res[1])
