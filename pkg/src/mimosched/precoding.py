"""Block-diagonalization precoding, power allocation and group capacity.

Each scheduled user's precoder is constrained to the null space of the
other group members' stacked channels, which removes inter-user
interference entirely; a group is servable only while the sum of the
members' channel ranks stays within the transmit antenna count.  On top
of the null-space stage, power is spread either uniformly over all
active eigenmodes of the group or by water-filling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import UserChannel
from .subspace import DEFAULT_RANK_TOL, null_space_basis

__all__ = [
    "BDInfeasibleError",
    "UserPrecoder",
    "BDPrecoderSet",
    "CapacityBounds",
    "waterfill",
    "bd_precoders",
    "user_capacities",
    "group_sum_capacity",
    "bd_capacity_bounds",
]

POWER_POLICIES = ("equal", "waterfilling")


class BDInfeasibleError(ValueError):
    """The group violates the dimensionality constraint of BD."""


@dataclass(frozen=True)
class UserPrecoder:
    """Null-space stage and power allocation for one group member.

    ``fa`` spans the null space of the other members' stacked channels;
    ``effective`` is ``h @ fa``; ``mode_gains`` are the squared singular
    values of the effective channel for the active modes, and ``powers``
    the per-mode transmit powers.
    """

    user_id: int
    fa: np.ndarray
    effective: np.ndarray
    mode_gains: np.ndarray
    powers: np.ndarray


@dataclass(frozen=True)
class BDPrecoderSet:
    users: tuple[UserPrecoder, ...]
    policy: str
    p_t: float
    beta: float  # sqrt of the per-mode power under the equal policy; 1.0 otherwise


@dataclass(frozen=True)
class CapacityBounds:
    """Angle-based sandwich on one user's BD rate under equal power."""

    lower: float
    upper: float
    sin2_sum: float
    lambda_min: float
    lambda_max: float

    def __post_init__(self):
        if self.lower > self.upper + 1e-9:
            raise ValueError("lower bound exceeds upper bound")


def waterfill(gains, budget: float, rel_tol: float = 1e-12) -> np.ndarray:
    """Water-filling power allocation over parallel channels.

    Returns powers ``p_i = max(0, mu - 1/g_i)`` with the water level
    ``mu`` bisected until ``sum(p) == budget`` to ``rel_tol`` relative.
    Zero-gain modes receive zero power; all-zero gains are an error.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1:
        raise ValueError("gains must be 1-D")
    if np.any(g < 0):
        raise ValueError("gains must be nonnegative")
    if budget <= 0:
        raise ValueError("budget must be positive")
    active = g > 0
    if not active.any():
        raise ValueError("all gains zero")
    inv = 1.0 / g[active]
    lo = float(inv.min())          # total allocation 0 here
    hi = float(inv.max()) + budget  # total allocation >= budget here
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        total = float(np.sum(np.maximum(0.0, mid - inv)))
        if total < budget:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * max(hi, 1.0):
            total = float(np.sum(np.maximum(0.0, 0.5 * (lo + hi) - inv)))
            if abs(total - budget) <= rel_tol * budget:
                break
    mu = 0.5 * (lo + hi)
    p = np.zeros_like(g)
    p[active] = np.maximum(0.0, mu - inv)
    return p


def _null_of_others(group: Sequence[UserChannel], k: int, m_t: int, tol: float):
    others = [u.h for i, u in enumerate(group) if i != k]
    stacked = np.vstack(others) if others else np.zeros((0, m_t), dtype=complex)
    return null_space_basis(stacked, m_t, tol)


def bd_precoders(
    group: Sequence[UserChannel],
    policy: str,
    p_t: float,
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> BDPrecoderSet:
    """Null-space precoders plus power allocation for one group.

    ``policy`` is "equal" (uniform power per active eigenmode across the
    whole group) or "waterfilling" (over the effective-channel
    eigenvalues, noise-normalized).  Raises :class:`BDInfeasibleError`
    when the members' channel ranks sum past the transmit antennas.
    """
    if policy not in POWER_POLICIES:
        raise ValueError(f"unknown power policy {policy!r}")
    if not group:
        raise ValueError("empty group")
    if p_t <= 0 or sigma_n2 <= 0:
        raise ValueError("p_t and sigma_n2 must be positive")
    m_t = group[0].h.shape[1]
    rank_sum = sum(u.rank for u in group)
    if rank_sum > m_t:
        raise BDInfeasibleError(
            f"BD infeasible: rank sum {rank_sum} exceeds {m_t} transmit antennas"
        )

    fas, effs, gains = [], [], []
    for k, user in enumerate(group):
        fa = _null_of_others(group, k, m_t, tol)
        eff = user.h @ fa
        s = np.linalg.svd(eff, compute_uv=False)
        if s.size and s[0] > 0.0:
            g = s[s > tol * s[0]] ** 2
        else:
            g = np.zeros(0)
        fas.append(fa)
        effs.append(eff)
        gains.append(g)

    n_modes = sum(g.size for g in gains)
    if n_modes == 0:
        powers = [np.zeros(0) for _ in gains]
        beta = 0.0
    elif policy == "equal":
        per_mode = p_t / n_modes
        powers = [np.full(g.size, per_mode) for g in gains]
        beta = float(np.sqrt(per_mode))
    else:
        flat = waterfill(np.concatenate(gains) / sigma_n2, p_t)
        powers, pos = [], 0
        for g in gains:
            powers.append(flat[pos : pos + g.size])
            pos += g.size
        beta = 1.0

    users = tuple(
        UserPrecoder(u.user_id, fa, eff, g, p)
        for u, fa, eff, g, p in zip(group, fas, effs, gains, powers)
    )
    return BDPrecoderSet(users=users, policy=policy, p_t=float(p_t), beta=beta)


def user_capacities(pset: BDPrecoderSet, sigma_n2: float = 1.0) -> np.ndarray:
    """Per-user rates sum_i log2(1 + p_i * g_i / sigma_n2) in bits/s/Hz."""
    return np.array(
        [
            float(np.sum(np.log2(1.0 + u.powers * u.mode_gains / sigma_n2)))
            for u in pset.users
        ]
    )


def group_sum_capacity(
    group: Sequence[UserChannel],
    policy: str,
    p_t: float,
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> float:
    """Sum rate of one BD group in bits/s/Hz (0 for an all-zero group)."""
    pset = bd_precoders(group, policy, p_t, sigma_n2, tol)
    return float(np.sum(user_capacities(pset, sigma_n2)))


def bd_capacity_bounds(
    group: Sequence[UserChannel],
    index: int,
    p_t: float,
    sigma_n2: float = 1.0,
    tol: float = DEFAULT_RANK_TOL,
) -> CapacityBounds:
    """Angle-based lower/upper bounds on one member's BD rate.

    Assumes the equal power policy.  With ``S = sum_i sin^2 theta_i``
    over the principal angles between the user's row space and its
    in-group interference row space, and ``c = beta^2 * rho / sigma_n2``:

        lower = log2(1 + c * lambda_min^2 * S)
        upper = m_r * log2(1 + c / m_r * lambda_max^2 * S)

    where lambda_min/max are the extreme singular values of the user's
    unit-power channel.  The sum of squared sines is evaluated as the
    squared Frobenius norm of ``V0^H V1`` (null-space basis of the
    interference against the user's row-space basis), which counts the
    angles against the interference row space including the ones pinned
    at pi/2 by a dimension deficit.
    """
    if not 0 <= index < len(group):
        raise ValueError("index out of range")
    user = group[index]
    m_t = user.h.shape[1]
    pset = bd_precoders(group, "equal", p_t, sigma_n2, tol)
    per_mode = pset.beta**2

    v0 = _null_of_others(group, index, m_t, tol)
    s = np.linalg.svd(user.hbar, compute_uv=False)
    _, _, vh = np.linalg.svd(user.hbar, full_matrices=False)
    v1 = vh.conj().T  # thin right singular vectors, one per receive antenna
    t = v0.conj().T @ v1
    sin2_sum = float(np.linalg.norm(t) ** 2)

    lam_min = float(s.min())
    lam_max = float(s.max())
    c = per_mode * user.rho / sigma_n2
    m_r = user.m_r
    lower = float(np.log2(1.0 + c * lam_min**2 * sin2_sum))
    upper = float(m_r * np.log2(1.0 + c / m_r * lam_max**2 * sin2_sum))
    return CapacityBounds(
        lower=lower,
        upper=upper,
        sin2_sum=sin2_sum,
        lambda_min=lam_min,
        lambda_max=lam_max,
    )
