"""Group assignment and budgeted channel fill.

Two greedy assignment rules are provided. ``original`` walks the groups in
index order and gives each to the cheapest user still free. ``improved``
repeatedly takes the cheapest (group, user) pair over everything still free.
Both yield an injective map from groups to users; the channel fill then
spends the power budget on assigned groups, cheapest owner first.

Ties are always broken by lowest group index, then lowest user index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import PowerMatrix

ALGORITHMS = ("original", "improved")

# absolute slack (watts) for residual bookkeeping checks
RESIDUAL_ATOL = 1e-9


class AllocationError(ValueError):
    pass


@dataclass(frozen=True)
class Assignment:
    owner: tuple  # owner[g] is a user index or None
    events: tuple = ()  # (group, user) pairs in the order they were made

    def __post_init__(self):
        users = [u for u in self.owner if u is not None]
        if len(users) != len(set(users)):
            raise AllocationError(f"assignment is not injective: {self.owner}")

    @property
    def n_assigned(self) -> int:
        return sum(u is not None for u in self.owner)

    def pairs(self):
        return [(g, u) for g, u in enumerate(self.owner) if u is not None]


@dataclass
class AllocationResult:
    counts: np.ndarray  # (G, U) integer channel counts
    residual_power: float
    throughput: int
    algorithm: str
    assignment: Assignment | None = field(default=None, repr=False)

    @property
    def groups_used(self) -> int:
        return int(np.count_nonzero(self.counts.sum(axis=1)))


def assign_groups_original(pm: PowerMatrix) -> Assignment:
    n_groups, n_users = pm.p.shape
    owner = [None] * n_groups
    events = []
    free = list(range(n_users))
    for g in range(n_groups):
        if not free:
            break
        # min() keeps the first of equal values, i.e. the lowest user index
        u = min(free, key=lambda j: pm.p[g, j])
        owner[g] = u
        events.append((g, u))
        free.remove(u)
    return Assignment(tuple(owner), tuple(events))


def assign_groups_improved(pm: PowerMatrix) -> Assignment:
    n_groups, n_users = pm.p.shape
    owner = [None] * n_groups
    events = []
    work = pm.p.copy()
    for _ in range(min(n_groups, n_users)):
        # argmin on the C-ordered matrix scans row-major: lowest g, then lowest u
        g, u = divmod(int(np.argmin(work)), n_users)
        owner[g] = u
        events.append((g, u))
        work[g, :] = np.inf
        work[:, u] = np.inf
    return Assignment(tuple(owner), tuple(events))


ASSIGNERS = {
    "original": assign_groups_original,
    "improved": assign_groups_improved,
}


def fill_channels(
    a: Assignment, pm: PowerMatrix, p_max: float, s: int, algorithm: str = "original"
) -> AllocationResult:
    """Spend ``p_max`` on the assigned groups, cheapest owner first.

    Each group gets ``min(floor(P_R / p), s)`` channels and the loop stops at
    the first group that cannot afford a single channel.
    """
    if not (p_max >= 0 and math.isfinite(p_max)):
        raise AllocationError(f"p_max must be finite and non-negative, got {p_max!r}")
    if s < 1:
        raise AllocationError(f"s must be >= 1, got {s!r}")
    if len(a.owner) != pm.n_groups:
        raise AllocationError("assignment and power matrix disagree on the number of groups")

    counts = np.zeros(pm.p.shape, dtype=np.int64)
    pairs = a.pairs()
    # stable sort on cost keeps lowest group index first among equal costs
    pairs.sort(key=lambda gu: pm.p[gu])
    residual = float(p_max)
    for g, u in pairs:
        cost = float(pm.p[g, u])
        c = min(math.floor(residual / cost), s)
        # the quotient can round up across an integer; never overspend
        while c > 0 and c * cost > residual:
            c -= 1
        if c == 0:
            break
        counts[g, u] = c
        residual -= c * cost
    return AllocationResult(counts, residual, int(counts.sum()), algorithm, a)


def allocate(pm: PowerMatrix, algorithm: str, p_max: float, s: int) -> AllocationResult:
    try:
        assign = ASSIGNERS[algorithm]
    except KeyError:
        raise AllocationError(f"unknown algorithm {algorithm!r}") from None
    return fill_channels(assign(pm), pm, p_max, s, algorithm)


@dataclass
class ConstraintReport:
    one_owner_per_group: bool  # (1.a)
    power_budget: bool  # (1.b)
    count_range: bool  # (1.c)
    residual_consistent: bool
    throughput_consistent: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.one_owner_per_group
            and self.power_budget
            and self.count_range
            and self.residual_consistent
            and self.throughput_consistent
        )


def validate_allocation(
    r: AllocationResult, pm: PowerMatrix, p_max: float, s: int, atol: float = RESIDUAL_ATOL
) -> ConstraintReport:
    counts = np.asarray(r.counts)
    if counts.shape != pm.p.shape:
        raise AllocationError(
            f"counts shape {counts.shape} does not match power matrix shape {pm.p.shape}"
        )
    violations = []

    owners_per_group = np.count_nonzero(counts, axis=1)
    for g in np.flatnonzero(owners_per_group > 1):
        users = np.flatnonzero(counts[g]).tolist()
        violations.append(("1.a", int(g), users, int(owners_per_group[g])))

    bad = np.argwhere((counts < 0) | (counts > s))
    for g, u in bad:
        violations.append(("1.c", int(g), int(u), int(counts[g, u])))

    spent = float(np.sum(counts * pm.p))
    budget_ok = spent <= p_max + atol
    if not budget_ok:
        violations.append(("1.b", spent, float(p_max), spent - p_max))

    residual_ok = abs(r.residual_power - (p_max - spent)) <= atol and r.residual_power >= -atol
    if not residual_ok:
        violations.append(("residual", float(r.residual_power), float(p_max - spent)))

    tp_ok = int(r.throughput) == int(counts.sum())
    if not tp_ok:
        violations.append(("throughput", int(r.throughput), int(counts.sum())))

    return ConstraintReport(
        one_owner_per_group=not np.any(owners_per_group > 1),
        power_budget=budget_ok,
        count_range=bad.size == 0,
        residual_consistent=residual_ok,
        throughput_consistent=tp_ok,
        violations=violations,
    )
