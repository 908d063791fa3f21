"""Scheduling algorithms: greedy selection, the two hybrid grouping
algorithms (group-number minimization and degree-of-freedom
maximization), exhaustive-search grouping/selection and a random
baseline.

All schedulers are deterministic given their inputs (and RNG, where one
applies): argmax ties break toward the lowest user id, and every emitted
group keeps the sum of member channel ranks within the transmit antenna
count so BD precoding stays feasible.  ``comparisons`` counts criterion
evaluations (or enumerated alternatives, for the exhaustive searches).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .channel import ChannelRealization, UserChannel
from .criteria import CriterionKind, evaluate_criterion, metric_largest_principal_angle
from .precoding import BDInfeasibleError, group_sum_capacity

__all__ = [
    "SchedulerKind",
    "GroupingArrangement",
    "greedy_select",
    "schedule_group_min",
    "schedule_dof_max",
    "schedule_conventional",
    "exhaustive_select",
    "random_schedule",
]

DEFAULT_EXHAUSTIVE_LIMIT = 12


class SchedulerKind(str, enum.Enum):
    GREEDY_SELECTION = "greedy-selection"
    ALGORITHM1_GROUP_MIN = "algorithm1-group-min"
    ALGORITHM2_DOF_MAX = "algorithm2-dof-max"
    CONVENTIONAL_GROUPING = "conventional-grouping"
    EXHAUSTIVE_SELECTION = "exhaustive-selection"
    EXHAUSTIVE_GROUPING = "exhaustive-grouping"
    RANDOM = "random"


@dataclass(frozen=True)
class GroupingArrangement:
    """Ordered groups of user ids plus the metric-evaluation count."""

    groups: tuple[tuple[int, ...], ...]
    comparisons: int = 0

    def all_users(self) -> tuple[int, ...]:
        return tuple(uid for g in self.groups for uid in g)


def _users_by_id(realization: ChannelRealization) -> dict[int, UserChannel]:
    users = {u.user_id: u for u in realization.users}
    if len(users) != len(realization.users):
        raise ValueError("duplicate user ids in realization")
    if not users:
        raise ValueError("empty user pool")
    return users


def _max_frobenius(pool: Iterable[UserChannel]) -> UserChannel:
    best = None
    best_norm = -1.0
    for u in sorted(pool, key=lambda u: u.user_id):
        n = float(np.linalg.norm(u.h))
        if n > best_norm:
            best, best_norm = u, n
    return best


def _argmax_first(items: Sequence, scores: Sequence[float]):
    """First strict maximum; callers pass items in ascending-id order."""
    best_i = 0
    for i in range(1, len(items)):
        if scores[i] > scores[best_i]:
            best_i = i
    return items[best_i]


def greedy_select(
    realization: ChannelRealization,
    m_t: int,
    criterion: CriterionKind,
    sigma_n2: float = 1.0,
    rng: np.random.Generator | None = None,
) -> GroupingArrangement:
    """Greedy single-group user selection.

    Seeds with the largest-Frobenius-norm user, then repeatedly adds the
    best-scoring candidate whose channel rank still fits, until none
    does.
    """
    criterion = CriterionKind(criterion)
    if criterion is CriterionKind.RANDOM:
        if rng is None:
            raise ValueError("random criterion needs an rng")
        return random_schedule(realization, m_t, rng)
    pool = _users_by_id(realization)
    first = _max_frobenius(pool.values())
    selected = [first]
    del pool[first.user_id]
    rank_sum = first.rank
    comparisons = 0
    while pool:
        feasible = [
            u for u in sorted(pool.values(), key=lambda u: u.user_id)
            if rank_sum + u.rank <= m_t
        ]
        if not feasible:
            break
        scores = [evaluate_criterion(criterion, u, selected, sigma_n2) for u in feasible]
        comparisons += len(feasible)
        pick = _argmax_first(feasible, scores)
        selected.append(pick)
        rank_sum += pick.rank
        del pool[pick.user_id]
    return GroupingArrangement(
        groups=(tuple(u.user_id for u in selected),), comparisons=comparisons
    )


def schedule_group_min(
    realization: ChannelRealization,
    m_t: int,
    criterion: CriterionKind = CriterionKind.SELECTION_SIMPLIFIED,
    sigma_n2: float = 1.0,
    rng: np.random.Generator | None = None,
) -> GroupingArrangement:
    """Hybrid scheduling, variant 1: minimize the number of groups.

    Opens ``floor(sum M_r / m_t)`` groups seeded with the strongest
    users by Frobenius norm, then assigns each remaining user (strongest
    first) to its best-scoring group under the rank constraint, opening
    a new group only when none fits.
    """
    criterion = CriterionKind(criterion)
    pool = _users_by_id(realization)
    n_users = len(pool)
    n_groups = sum(u.m_r for u in pool.values()) // m_t
    n_groups = max(1, min(n_groups, n_users))

    groups: list[list[UserChannel]] = []
    for _ in range(n_groups):
        seed = _max_frobenius(pool.values())
        groups.append([seed])
        del pool[seed.user_id]

    comparisons = 0
    while pool:
        user = _max_frobenius(pool.values())
        del pool[user.user_id]
        feasible = [
            g for g in groups if sum(u.rank for u in g) + user.rank <= m_t
        ]
        if feasible:
            if criterion is CriterionKind.RANDOM:
                pick = feasible[int(rng.integers(len(feasible)))]
            else:
                scores = [evaluate_criterion(criterion, user, g, sigma_n2) for g in feasible]
                comparisons += len(feasible)
                pick = _argmax_first(feasible, scores)
            pick.append(user)
        else:
            groups.append([user])
    return GroupingArrangement(
        groups=tuple(tuple(u.user_id for u in g) for g in groups),
        comparisons=comparisons,
    )


def schedule_dof_max(
    realization: ChannelRealization,
    m_t: int,
    criterion: CriterionKind = CriterionKind.SELECTION_SIMPLIFIED,
    sigma_n2: float = 1.0,
    rng: np.random.Generator | None = None,
) -> GroupingArrangement:
    """Hybrid scheduling, variant 2: fill each group to the antenna limit.

    Seeds a group with the strongest remaining user, fills it greedily
    by the criterion while the rank constraint admits anyone, then opens
    the next group, until the pool is empty.
    """
    criterion = CriterionKind(criterion)
    pool = _users_by_id(realization)
    groups: list[list[UserChannel]] = []
    current: list[UserChannel] = []
    comparisons = 0
    while pool:
        if not current:
            seed = _max_frobenius(pool.values())
            current.append(seed)
            del pool[seed.user_id]
            continue
        rank_sum = sum(u.rank for u in current)
        feasible = [
            u for u in sorted(pool.values(), key=lambda u: u.user_id)
            if rank_sum + u.rank <= m_t
        ]
        if feasible:
            if criterion is CriterionKind.RANDOM:
                pick = feasible[int(rng.integers(len(feasible)))]
            else:
                scores = [evaluate_criterion(criterion, u, current, sigma_n2) for u in feasible]
                comparisons += len(feasible)
                pick = _argmax_first(feasible, scores)
            current.append(pick)
            del pool[pick.user_id]
        else:
            groups.append(current)
            current = []
    if current:
        groups.append(current)
    return GroupingArrangement(
        groups=tuple(tuple(u.user_id for u in g) for g in groups),
        comparisons=comparisons,
    )


def _partitions(ids: tuple[int, ...], group_size: int):
    """All partitions into unordered groups of ``group_size``, plus one
    smaller residual group when the pool does not divide evenly."""
    residual = len(ids) % group_size
    if residual:
        for rest in itertools.combinations(ids, residual):
            remaining = tuple(i for i in ids if i not in rest)
            for part in _partitions_even(remaining, group_size):
                yield part + (rest,)
    else:
        yield from _partitions_even(ids, group_size)


def _partitions_even(ids: tuple[int, ...], group_size: int):
    if not ids:
        yield ()
        return
    head = ids[0]
    for partners in itertools.combinations(ids[1:], group_size - 1):
        group = (head,) + partners
        remaining = tuple(i for i in ids[1:] if i not in partners)
        for rest in _partitions_even(remaining, group_size):
            yield (group,) + rest


def schedule_conventional(
    realization: ChannelRealization,
    m_t: int,
    group_size: int = 2,
    max_users: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> GroupingArrangement:
    """Exhaustive max-min grouping over fixed-size groups.

    Enumerates every partition into groups of ``group_size`` (one
    smaller residual group when the pool does not divide evenly), skips
    rank-infeasible arrangements, scores each arrangement by its worst
    (smallest) largest principal angle of any member against its
    in-group interference, and returns the arrangement maximizing that
    minimum.
    """
    users = _users_by_id(realization)
    n = len(users)
    if n > max_users:
        raise ValueError(
            f"combinatorial blow-up: {n} users exceeds the exhaustive limit {max_users}"
        )
    if group_size < 1 or group_size > n:
        raise ValueError(f"cannot partition {n} users into groups of {group_size}")
    ids = tuple(sorted(users))
    best = None
    best_score = -1.0
    comparisons = 0
    for part in _partitions(ids, group_size):
        if any(sum(users[i].rank for i in g) > m_t for g in part):
            continue
        score = np.pi / 2  # all-singleton arrangements have no interference
        for g in part:
            if len(g) < 2:
                continue
            for uid in g:
                stacked = np.vstack([users[i].h for i in g if i != uid])
                angle = metric_largest_principal_angle(users[uid].h, stacked)
                comparisons += 1
                score = min(score, angle)
        if score > best_score:
            best, best_score = part, score
    if best is None:
        raise BDInfeasibleError("no BD-feasible arrangement for this group size")
    return GroupingArrangement(groups=best, comparisons=comparisons)


def exhaustive_select(
    realization: ChannelRealization,
    m_t: int,
    p_t: float,
    sigma_n2: float = 1.0,
    max_users: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> GroupingArrangement:
    """Optimal single-group selection by subset enumeration.

    Maximizes the water-filling sum rate over every rank-feasible
    non-empty subset.  Guarded by ``max_users`` against combinatorial
    blow-up.
    """
    users = _users_by_id(realization)
    n = len(users)
    if n > max_users:
        raise ValueError(
            f"combinatorial blow-up: {n} users exceeds the exhaustive limit {max_users}"
        )
    ids = tuple(sorted(users))
    best = None
    best_cap = -1.0
    comparisons = 0
    for size in range(1, n + 1):
        for combo in itertools.combinations(ids, size):
            members = [users[i] for i in combo]
            if sum(u.rank for u in members) > m_t:
                continue
            cap = group_sum_capacity(members, "waterfilling", p_t, sigma_n2)
            comparisons += 1
            if cap > best_cap:
                best, best_cap = combo, cap
    return GroupingArrangement(groups=(best,), comparisons=comparisons)


def random_schedule(
    realization: ChannelRealization, m_t: int, rng: np.random.Generator
) -> GroupingArrangement:
    """Uniformly random feasible greedy fill (statistical floor)."""
    users = _users_by_id(realization)
    order = list(sorted(users))
    rng.shuffle(order)
    selected: list[int] = []
    rank_sum = 0
    for uid in order:
        if rank_sum + users[uid].rank <= m_t or not selected:
            selected.append(uid)
            rank_sum += users[uid].rank
    return GroupingArrangement(groups=(tuple(selected),), comparisons=0)
