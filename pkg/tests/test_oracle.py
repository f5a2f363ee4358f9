import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURE, power_matrices
from mccdma_alloc.allocation import allocate, validate_allocation
from mccdma_alloc.oracle import (
    OracleSizeError,
    count_assignments,
    enumerate_assignments,
    exhaustive_optimal,
)
from mccdma_alloc.model import PowerMatrix


@pytest.mark.parametrize("g, u, n", [(1, 1, 2), (2, 2, 7), (4, 4, 209), (3, 3, 34), (2, 3, 13)])
def test_enumeration_counts(g, u, n):
    maps = list(enumerate_assignments(g, u))
    assert len(maps) == n == count_assignments(g, u)
    assert len(set(maps)) == n
    assert maps[0] == (None,) * g


def test_enumeration_small_by_hand():
    assert list(enumerate_assignments(1, 1)) == [(None,), (0,)]


def test_enumeration_injective():
    for m in enumerate_assignments(4, 3):
        users = [u for u in m if u is not None]
        assert len(users) == len(set(users))


def test_relaxed_enumeration():
    maps = list(enumerate_assignments(2, 2, relaxed=True))
    assert len(maps) == 9
    assert (0, 0) in maps


def test_enumeration_guard():
    with pytest.raises(OracleSizeError):
        list(enumerate_assignments(7, 2))
    with pytest.raises(OracleSizeError):
        exhaustive_optimal(PowerMatrix(np.ones((2, 2))), 1.0, 17)


def test_fixture_optimum():
    rep = exhaustive_optimal(PowerMatrix(FIXTURE), 12.0, 4)
    assert rep.best.throughput == 4
    assert rep.n_assignments_enumerated == 7
    assert rep.gap_vs_original == 3
    assert rep.gap_vs_improved == 0


def test_empty_budget():
    assert exhaustive_optimal(PowerMatrix(FIXTURE), 0.0, 4).best.throughput == 0


def test_single_cell():
    rep = exhaustive_optimal(PowerMatrix([[2.0]]), 7.0, 4)
    assert rep.best.throughput == 3
    assert rep.best.residual_power == pytest.approx(1.0)
    assert rep.original.throughput == rep.improved.throughput == 3


def test_tie_prefers_larger_residual():
    # both users give 2 channels; user 1 is cheaper and leaves more power
    rep = exhaustive_optimal(PowerMatrix([[2.0, 1.5]]), 4.5, 2)
    assert rep.best.throughput == 2
    assert rep.best.counts[0, 1] == 2


@settings(max_examples=80, deadline=None)
@given(pm=power_matrices(max_groups=3, max_users=3), s=st.integers(1, 4), frac=st.floats(0, 1))
def test_dominance(pm, s, frac):
    budget = frac * s * float(pm.p.sum())
    rep = exhaustive_optimal(pm, budget, s)
    assert rep.gap_vs_original >= 0
    assert rep.gap_vs_improved >= 0
    assert validate_allocation(rep.best, pm, budget, s).ok


@settings(max_examples=40, deadline=None)
@given(pm=power_matrices(max_groups=3, max_users=3), s=st.integers(1, 3), frac=st.floats(0, 1))
def test_relaxed_dominates_injective(pm, s, frac):
    budget = frac * s * float(pm.p.sum())
    strict = exhaustive_optimal(pm, budget, s).best.throughput
    relaxed = exhaustive_optimal(pm, budget, s, relaxed=True).best.throughput
    assert relaxed >= strict


def _best_counts_brute(costs, budget, s):
    best = 0
    for cs in itertools.product(range(s + 1), repeat=len(costs)):
        if sum(c * p for c, p in zip(cs, costs)) <= budget:
            best = max(best, sum(cs))
    return best


@settings(max_examples=60, deadline=None)
@given(
    costs=st.lists(st.floats(0.1, 10.0), min_size=1, max_size=3),
    s=st.integers(1, 3),
    budget=st.floats(0, 60),
)
def test_cheapest_first_fill_is_optimal(costs, s, budget):
    # a diagonal matrix fixes the assignment to group g -> user g
    n = len(costs)
    p = np.full((n, n), 1e3)
    np.fill_diagonal(p, costs)
    pm = PowerMatrix(p)
    r = allocate(pm, "improved", budget, s)
    assert r.assignment.owner == tuple(range(n))
    assert r.throughput == _best_counts_brute(costs, budget, s)


def test_degenerate_agreement():
    for p, b in [(0.3, 1.0), (2.0, 7.0), (5.0, 4.0)]:
        pm = PowerMatrix([[p]])
        rep = exhaustive_optimal(pm, b, 4)
        o = allocate(pm, "original", b, 4)
        i = allocate(pm, "improved", b, 4)
        assert rep.best.throughput == o.throughput == i.throughput
        np.testing.assert_array_equal(rep.best.counts, o.counts)
        assert rep.best.residual_power == pytest.approx(o.residual_power)
