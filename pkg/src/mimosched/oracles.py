"""Independent reference computations for verification.

Each routine here deliberately avoids the library code path it is used
to check: orthonormalization by classical Gram-Schmidt instead of SVD,
water levels by dense scanning instead of bisection, capacity changes
by stacked-null-space BD rates instead of the angle decomposition, and
quantiles by the explicit order-statistic formula.  The ``oracle`` CLI
subcommand runs named checks from :data:`ORACLE_CHECKS` and prints the
computed reference values.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg as sla
from scipy import stats as sstats

__all__ = [
    "gram_schmidt",
    "quantile_by_formula",
    "waterfill_mu_scan",
    "exact_bd_rates",
    "exact_delta_capacity",
    "ORACLE_CHECKS",
    "run_oracle_check",
]


def gram_schmidt(m: np.ndarray) -> np.ndarray:
    """Classical Gram-Schmidt orthonormalization of the columns of ``m``,
    dropping (numerically) dependent columns."""
    basis = []
    for col in np.asarray(m, dtype=complex).T:
        v = col.copy()
        for b in basis:
            v -= (b.conj() @ col) * b
        # second pass for numerical orthogonality
        for b in basis:
            v -= (b.conj() @ v) * b
        n = np.linalg.norm(v)
        if n > 1e-10 * max(1.0, np.linalg.norm(col)):
            basis.append(v / n)
    return np.array(basis).T


def quantile_by_formula(samples, level: float) -> float:
    """Linear interpolation between order statistics at rank
    ``(n - 1) * level``, written out explicitly."""
    x = sorted(float(v) for v in samples)
    n = len(x)
    if n == 0:
        raise ValueError("empty sample set")
    h = (n - 1) * level
    lo = int(np.floor(h))
    hi = min(lo + 1, n - 1)
    return x[lo] + (h - lo) * (x[hi] - x[lo])


def waterfill_mu_scan(gains, budget: float, points: int = 200001) -> np.ndarray:
    """Water-filling by dense scan over the water level (two refinement
    passes)."""
    g = np.asarray(gains, dtype=float)
    inv = np.where(g > 0, 1.0 / np.where(g > 0, g, 1.0), np.inf)
    lo, hi = 0.0, float(np.min(inv)) + budget
    for _ in range(2):
        mus = np.linspace(lo, hi, points)
        totals = np.maximum(0.0, mus[:, None] - inv[None, :]).sum(axis=1)
        i = int(np.argmin(np.abs(totals - budget)))
        lo, hi = mus[max(0, i - 1)], mus[min(points - 1, i + 1)]
    mu = 0.5 * (lo + hi)
    return np.maximum(0.0, mu - inv)


def _null_basis(stacked: np.ndarray, m_t: int) -> np.ndarray:
    if stacked.shape[0] == 0:
        return np.eye(m_t, dtype=complex)
    return sla.null_space(stacked)


def exact_bd_rates(users, sigma_n2: float = 1.0, per_mode_power: float = 1.0):
    """Per-user BD rates with uniform per-mode power and exact null-space
    projection of each user's channel.

    ``users`` is a sequence of objects with ``h``, ``hbar`` and ``rho``
    attributes.  Returns ``log2 det(I + (p * rho / sigma_n2) *
    hbar P hbar^H)`` per user, ``P`` projecting onto the null space of
    the other members' stacked channels.
    """
    m_t = users[0].h.shape[1]
    rates = []
    for k, user in enumerate(users):
        others = [u.h for i, u in enumerate(users) if i != k]
        stacked = np.vstack(others) if others else np.zeros((0, m_t), dtype=complex)
        v0 = _null_basis(stacked, m_t)
        proj = user.hbar @ v0
        c = per_mode_power * user.rho / sigma_n2
        gram = np.eye(user.hbar.shape[0]) + c * (proj @ proj.conj().T)
        sign, logdet = np.linalg.slogdet(gram)
        rates.append(float(logdet / np.log(2.0)))
    return np.array(rates)


def exact_delta_capacity(candidate, subset, sigma_n2: float = 1.0) -> float:
    """Exact change in the BD sum rate from adding ``candidate`` to
    ``subset`` (uniform per-mode power, stacked null spaces, no
    alternating-projection approximation)."""
    before = float(np.sum(exact_bd_rates(list(subset), sigma_n2))) if subset else 0.0
    after = float(np.sum(exact_bd_rates(list(subset) + [candidate], sigma_n2)))
    return after - before


# ---------------------------------------------------------------------------
# Named checks for the CLI

def _check_quantile(seed: int) -> dict:
    samples = list(range(1, 101))
    refs = {lvl: quantile_by_formula(samples, lvl) for lvl in (0.10, 0.50, 0.90)}
    for lvl, v in refs.items():
        print(f"quantile(1..100, level={lvl:.2f}) = {v:.6f}")
    return {"q10": refs[0.10]}


def _check_waterfill(seed: int) -> dict:
    from .precoding import waterfill

    rng = np.random.default_rng(seed)
    gains = rng.uniform(0.05, 2.0, size=6)
    budget = 1.0
    ref = waterfill_mu_scan(gains, budget)
    got = waterfill(gains, budget)
    err = float(np.max(np.abs(ref - got)))
    print(f"gains = {np.array2string(gains, precision=4)}")
    print(f"scan powers     = {np.array2string(ref, precision=6)}")
    print(f"bisection powers= {np.array2string(got, precision=6)}")
    print(f"max |diff| = {err:.3e}")
    return {"max_diff": err}


def _check_capacity_bounds(seed: int) -> dict:
    from .channel import make_user_channel
    from .precoding import bd_capacity_bounds, bd_precoders, user_capacities

    rng = np.random.default_rng(seed)
    worst_lo, worst_hi = np.inf, np.inf
    n = 500
    for _ in range(n):
        m_t = int(rng.choice([4, 6, 8]))
        sizes = []
        while sum(sizes) < m_t - 1:
            sizes.append(int(rng.integers(1, 3)))
        if sum(sizes) > m_t:
            sizes[-1] -= sum(sizes) - m_t
        users = [
            make_user_channel(
                i,
                (rng.standard_normal((s, m_t)) + 1j * rng.standard_normal((s, m_t)))
                / np.sqrt(2),
                rho=float(rng.uniform(0.01, 1.0)),
            )
            for i, s in enumerate(sizes)
            if s > 0
        ]
        p_t = float(rng.uniform(0.5, 50.0))
        pset = bd_precoders(users, "equal", p_t)
        caps = user_capacities(pset)
        for k in range(len(users)):
            b = bd_capacity_bounds(users, k, p_t)
            worst_lo = min(worst_lo, caps[k] - b.lower)
            worst_hi = min(worst_hi, b.upper - caps[k])
    print(f"{n} random groups: min(C - lower) = {worst_lo:.3e}, "
          f"min(upper - C) = {worst_hi:.3e}")
    return {"min_lower_slack": worst_lo, "min_upper_slack": worst_hi}


def _check_delta_ranking(seed: int) -> dict:
    from .channel import make_user_channel
    from .criteria import metric_selection_full

    rng = np.random.default_rng(seed)
    sigma_n2 = 1e-4  # 40 dB at unit transmit power
    taus = []
    for _ in range(50):
        m_t = 8
        subset = [
            make_user_channel(
                100 + j,
                (rng.standard_normal((1, m_t)) + 1j * rng.standard_normal((1, m_t)))
                / np.sqrt(2),
                rho=float(rng.uniform(0.05, 1.0)),
            )
            for j in range(2)
        ]
        metric, exact = [], []
        for c in range(10):
            cand = make_user_channel(
                c,
                (rng.standard_normal((1, m_t)) + 1j * rng.standard_normal((1, m_t)))
                / np.sqrt(2),
                rho=float(rng.uniform(0.05, 1.0)),
            )
            metric.append(metric_selection_full(cand, subset, sigma_n2))
            exact.append(exact_delta_capacity(cand, subset, sigma_n2))
        taus.append(sstats.kendalltau(metric, exact).statistic)
    med = float(np.median(taus))
    print(f"median Kendall tau over {len(taus)} candidate pools = {med:.4f}")
    return {"median_tau": med}


ORACLE_CHECKS = {
    "quantile": _check_quantile,
    "waterfill": _check_waterfill,
    "capacity-bounds": _check_capacity_bounds,
    "delta-ranking": _check_delta_ranking,
}


def run_oracle_check(name: str, seed: int = 0) -> dict:
    """Run one named oracle check, printing its reference values."""
    if name not in ORACLE_CHECKS:
        raise ValueError(
            f"unknown oracle check {name!r}; available: {', '.join(sorted(ORACLE_CHECKS))}"
        )
    return ORACLE_CHECKS[name](seed)
