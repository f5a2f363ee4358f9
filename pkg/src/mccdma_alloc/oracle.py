"""Exhaustive ground truth for small instances.

Every injective partial map group -> user is enumerated; for each one the
best channel counts are found by a cheapest-first capped fill, which is
optimal once the map is fixed since every channel is worth exactly one
unit of throughput. The fill here is written independently of
``allocation.fill_channels`` so the two can check each other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .allocation import AllocationResult, Assignment, allocate
from .model import PowerMatrix

MAX_DIM = 6
MAX_SUBCARRIERS = 16


class OracleSizeError(ValueError):
    pass


@dataclass
class OracleReport:
    best: AllocationResult
    n_assignments_enumerated: int
    gap_vs_original: int
    gap_vs_improved: int
    original: AllocationResult
    improved: AllocationResult


def _guard(g: int, u: int, s: int | None = None):
    if g > MAX_DIM or u > MAX_DIM:
        raise OracleSizeError(f"oracle limited to G, U <= {MAX_DIM}; got G={g}, U={u}")
    if s is not None and s > MAX_SUBCARRIERS:
        raise OracleSizeError(f"oracle limited to s <= {MAX_SUBCARRIERS}; got s={s}")


def enumerate_assignments(g: int, u: int, relaxed: bool = False):
    """Yield every group -> user map as a tuple of owners (``None`` = unassigned).

    By default only injective maps are produced. With ``relaxed=True`` a user
    may own several groups.
    """
    _guard(g, u)
    if relaxed:
        yield from itertools.product((None, *range(u)), repeat=g)
        return
    for k in range(min(g, u) + 1):
        for groups in itertools.combinations(range(g), k):
            for users in itertools.permutations(range(u), k):
                owner = [None] * g
                for gg, uu in zip(groups, users):
                    owner[gg] = uu
                yield tuple(owner)


def count_assignments(g: int, u: int) -> int:
    return sum(math.comb(g, k) * math.comb(u, k) * math.factorial(k) for k in range(min(g, u) + 1))


def _greedy_fill(costs, p_max: float, s: int):
    # costs: list of (cost, group, user); returns chosen counts and the spend
    chosen = []
    left = p_max
    for cost, g, u in sorted(costs):
        c = min(s, int(left // cost))
        if c * cost > left:
            c -= 1
        if c > 0:
            chosen.append((g, u, c))
            left -= c * cost
    return chosen, left


def exhaustive_optimal(pm: PowerMatrix, p_max: float, s: int, relaxed: bool = False) -> OracleReport:
    n_groups, n_users = pm.p.shape
    _guard(n_groups, n_users, s)
    if p_max < 0:
        raise ValueError("p_max must be non-negative")

    best = None  # (throughput, residual, owner, chosen)
    n = 0
    for owner in enumerate_assignments(n_groups, n_users, relaxed):
        n += 1
        costs = [(float(pm.p[g, u]), g, u) for g, u in enumerate(owner) if u is not None]
        chosen, left = _greedy_fill(costs, p_max, s)
        tp = sum(c for _, _, c in chosen)
        # strict comparison keeps the earliest map among exact ties
        if best is None or tp > best[0] or (tp == best[0] and left > best[1]):
            best = (tp, left, owner, chosen)

    tp, left, owner, chosen = best
    counts = np.zeros(pm.p.shape, dtype=np.int64)
    for g, u, c in chosen:
        counts[g, u] = c
    # relaxed maps can repeat a user, which Assignment rejects
    a = None if relaxed else Assignment(owner)
    result = AllocationResult(counts, left, tp, "oracle", a)

    orig = allocate(pm, "original", p_max, s)
    impr = allocate(pm, "improved", p_max, s)
    return OracleReport(
        best=result,
        n_assignments_enumerated=n,
        gap_vs_original=tp - orig.throughput,
        gap_vs_improved=tp - impr.throughput,
        original=orig,
        improved=impr,
    )
