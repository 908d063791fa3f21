"""Heterogeneous user populations and correlated channel realizations.

Users differ in antenna count, distance (hence received power) and
spatial correlation.  Per trial, each user's channel is drawn from a
Kronecker model

    H_k = sqrt(rho_k) * R_r^(1/2) @ H_w @ R_t^(1/2)

with H_w i.i.d. circularly-symmetric complex Gaussian, correlation
matrices R[i, j] = coef**((i - j)**2), and rho_k the received power
normalized to 1 at the reference distance.  Absolute transmit power
enters the capacity computation through the SNR sweep, not here.

Randomness uses one counter-based (Philox) substream per (trial, user),
so trials are reproducible individually and independent of execution
order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .subspace import DEFAULT_RANK_TOL

__all__ = [
    "UserProfile",
    "Scenario",
    "UserChannel",
    "ChannelRealization",
    "received_power",
    "correlation_matrix",
    "matrix_sqrt_psd",
    "generate_realization",
    "make_user_channel",
]

# Substream namespaces: channel draws, scheduler randomness, frozen attributes.
_DOMAIN_CHANNEL = 0
_DOMAIN_SCHED = 1
_DOMAIN_ATTR = 2


@dataclass(frozen=True)
class UserProfile:
    """Static description of one user; ``None`` fields are redrawn each trial.

    m_r       receive antennas, or None for uniform on {1..scenario.m_r_max}
    d         distance in meters (>= d_ref), or None for uniform on [d_ref, d_max]
    gamma_r   receive correlation coefficient in [0, 1], or None for uniform
    tau_t     transmit correlation coefficient in [0, 1], or None for uniform
    """

    user_id: int
    m_r: int | None = None
    d: float | None = None
    gamma_r: float | None = None
    tau_t: float | None = None

    def __post_init__(self):
        if self.m_r is not None and self.m_r < 1:
            raise ValueError(f"user {self.user_id}: m_r must be >= 1")
        for name in ("gamma_r", "tau_t"):
            v = getattr(self, name)
            if v is not None and not 0.0 <= v <= 1.0:
                raise ValueError(f"user {self.user_id}: {name} must be in [0, 1]")


@dataclass(frozen=True)
class Scenario:
    """Immutable simulation setup: antenna counts, powers, sweep, RNG seed."""

    m_t: int
    users: tuple[UserProfile, ...]
    p_t: float = 1.0
    sigma_n2: float = 1.0
    alpha: float = 3.0
    d_ref: float = 200.0
    d_max: float = 1000.0
    m_r_max: int = 4
    snr_db: tuple[float, ...] = (0.0, 10.0, 20.0, 30.0, 40.0)
    trials: int = 2000
    seed: int = 0
    fixed_attributes: bool = False  # freeze per-user random attributes across trials

    def __post_init__(self):
        object.__setattr__(self, "users", tuple(self.users))
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if self.m_t < 1:
            raise ValueError("m_t must be >= 1")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.users:
            raise ValueError("at least one user required")
        if self.m_r_max < 1:
            raise ValueError("m_r_max must be >= 1")
        if not 0 < self.d_ref <= self.d_max:
            raise ValueError("need 0 < d_ref <= d_max")
        for u in self.users:
            if u.d is not None and u.d < self.d_ref:
                raise ValueError(f"user {u.user_id}: d < d_ref")
        max_sum = sum(u.m_r if u.m_r is not None else self.m_r_max for u in self.users)
        if max_sum <= self.m_t:
            warnings.warn(
                "total receive antennas <= m_t: the system is not overloaded "
                "and scheduling is trivial",
                stacklevel=2,
            )


@dataclass(frozen=True)
class UserChannel:
    """One user's channel in one trial: h = sqrt(rho) * hbar."""

    user_id: int
    m_r: int
    rho: float
    hbar: np.ndarray
    h: np.ndarray
    rank: int
    d: float = float("nan")
    gamma_r: float = float("nan")
    tau_t: float = float("nan")


@dataclass(frozen=True)
class ChannelRealization:
    m_t: int
    trial: int
    users: tuple[UserChannel, ...] = field(default_factory=tuple)


def received_power(d: float, alpha: float = 3.0, d_ref: float = 200.0) -> float:
    """Normalized received power ``(d_ref / d)**alpha`` in (0, 1].

    Path loss relative to the maximum received power at the reference
    distance; the transmit-power-per-antenna factor cancels in the
    normalization.
    """
    if d_ref <= 0:
        raise ValueError("d_ref must be positive")
    if d < d_ref:
        raise ValueError(f"distance {d} below reference distance {d_ref}")
    return float((d_ref / d) ** alpha)


def correlation_matrix(coef: float, n: int) -> np.ndarray:
    """Antenna correlation matrix with entries ``coef**((i - j)**2)``.

    Gaussian-kernel (squared-exponent) Toeplitz structure; positive
    semi-definite for any coef in [0, 1], identity at 0, all-ones at 1.
    """
    if not 0.0 <= coef <= 1.0:
        raise ValueError("correlation coefficient must be in [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = np.arange(n)
    expo = (idx[:, None] - idx[None, :]) ** 2
    with np.errstate(invalid="ignore"):
        r = np.power(float(coef), expo)  # 0**0 == 1 by numpy convention
    return r


def matrix_sqrt_psd(r) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-1e-10, 0) are clamped to zero; anything more
    negative, or a non-Hermitian input, is rejected.
    """
    a = np.asarray(r)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    if np.max(np.abs(a - a.conj().T)) > 1e-10:
        raise ValueError("matrix is not Hermitian")
    w, v = np.linalg.eigh(a)
    if np.min(w) < -1e-10:
        raise ValueError(f"matrix is indefinite (eigenvalue {np.min(w):.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def _stream(seed: int, spawn_key: tuple[int, ...]) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=spawn_key))
    )


def scheduler_rng(seed: int, trial: int, slot: int = 0) -> np.random.Generator:
    """Per-trial randomness for randomized schedulers, independent of the
    channel substreams."""
    return _stream(seed, (_DOMAIN_SCHED, trial, slot))


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


def _draw_attributes(profile: UserProfile, scenario: Scenario, rng):
    # Draw order is part of the determinism contract: m_r, d, gamma_r, tau_t.
    m_r = profile.m_r
    if m_r is None:
        m_r = int(rng.integers(1, scenario.m_r_max + 1))
    d = profile.d
    if d is None:
        d = float(rng.uniform(scenario.d_ref, scenario.d_max))
    gamma_r = profile.gamma_r
    if gamma_r is None:
        gamma_r = float(rng.uniform(0.0, 1.0))
    tau_t = profile.tau_t
    if tau_t is None:
        tau_t = float(rng.uniform(0.0, 1.0))
    return m_r, d, gamma_r, tau_t


def _numerical_rank(h: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    s = np.linalg.svd(h, compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def make_user_channel(user_id: int, hbar, rho: float = 1.0, **attrs) -> UserChannel:
    """Build a UserChannel from a raw unit-power channel matrix (test and
    construction helper)."""
    hb = np.asarray(hbar, dtype=complex)
    if hb.ndim != 2:
        raise ValueError("hbar must be 2-D")
    if not 0.0 < rho <= 1.0 + 1e-12:
        raise ValueError("rho must be in (0, 1]")
    h = np.sqrt(rho) * hb
    return UserChannel(
        user_id=user_id,
        m_r=hb.shape[0],
        rho=float(rho),
        hbar=hb,
        h=h,
        rank=_numerical_rank(h),
        **attrs,
    )


def generate_realization(scenario: Scenario, trial: int) -> ChannelRealization:
    """Draw one Monte Carlo trial: per-user attributes (where randomized)
    and Kronecker-correlated channel matrices.

    With ``scenario.fixed_attributes`` the random attributes are drawn
    once from a trial-independent substream; the fast-fading part still
    varies per trial.
    """
    if trial < 0:
        raise ValueError("trial must be >= 0")
    users = []
    for idx, profile in enumerate(scenario.users):
        rng = _stream(scenario.seed, (_DOMAIN_CHANNEL, trial, idx))
        if scenario.fixed_attributes:
            attr_rng = _stream(scenario.seed, (_DOMAIN_ATTR, idx))
            m_r, d, gamma_r, tau_t = _draw_attributes(profile, scenario, attr_rng)
        else:
            m_r, d, gamma_r, tau_t = _draw_attributes(profile, scenario, rng)
        rho = received_power(d, scenario.alpha, scenario.d_ref)
        hw = _complex_normal(rng, (m_r, scenario.m_t))
        hbar = hw
        if gamma_r != 0.0:
            hbar = matrix_sqrt_psd(correlation_matrix(gamma_r, m_r)) @ hbar
        if tau_t != 0.0:
            hbar = hbar @ matrix_sqrt_psd(correlation_matrix(tau_t, scenario.m_t))
        users.append(
            make_user_channel(
                profile.user_id, hbar, rho, d=d, gamma_r=gamma_r, tau_t=tau_t
            )
        )
    return ChannelRealization(m_t=scenario.m_t, trial=trial, users=tuple(users))
