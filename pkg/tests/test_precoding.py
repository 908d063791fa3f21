import numpy as np
import pytest

from mimosched.channel import make_user_channel
from mimosched.oracles import waterfill_mu_scan
from mimosched.precoding import (
    BDInfeasibleError,
    bd_capacity_bounds,
    bd_precoders,
    group_sum_capacity,
    user_capacities,
    waterfill,
)

from conftest import crandn, random_unitary


def random_group(rng, m_t, sizes, rho_range=(0.01, 1.0)):
    return [
        make_user_channel(i, crandn(rng, s, m_t), rho=float(rng.uniform(*rho_range)))
        for i, s in enumerate(sizes)
    ]


class TestWaterfill:
    def test_equal_gains_split_evenly(self):
        p = waterfill(np.array([2.0, 2.0, 2.0]), 0.9)
        assert np.allclose(p, 0.3)

    def test_single_gain_gets_all(self):
        assert waterfill(np.array([0.7]), 2.5) == pytest.approx([2.5])

    def test_weak_mode_excluded(self):
        # budget too small to lift the weak mode above its floor
        p = waterfill(np.array([1.0, 0.1]), 1.0)
        ref = waterfill_mu_scan(np.array([1.0, 0.1]), 1.0)
        assert p[1] == 0.0
        assert np.allclose(p, ref, atol=1e-4)
        assert p.sum() == pytest.approx(1.0, rel=1e-12)

    def test_matches_mu_scan(self, rng):
        for _ in range(20):
            gains = rng.uniform(0.0, 3.0, size=6)
            gains[rng.integers(6)] = 0.0
            budget = float(rng.uniform(0.5, 10.0))
            p = waterfill(gains, budget)
            ref = waterfill_mu_scan(gains, budget)
            assert np.allclose(p, ref, atol=1e-3)
            assert p[gains == 0.0].sum() == 0.0

    def test_complementary_slackness(self, rng):
        gains = rng.uniform(0.05, 2.0, size=8)
        budget = 3.0
        p = waterfill(gains, budget)
        assert p.sum() == pytest.approx(budget, rel=1e-10)
        active = p > 0
        mu = p[active] + 1.0 / gains[active]
        assert np.ptp(mu) < 1e-10 * mu.max()

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError, match="all gains zero"):
            waterfill(np.zeros(3), 1.0)


class TestBDPrecoders:
    def test_single_user_full_space(self, rng):
        group = random_group(rng, 4, [2])
        pset = bd_precoders(group, "equal", 2.0)
        assert pset.users[0].fa.shape == (4, 4)
        assert np.allclose(pset.users[0].fa, np.eye(4))
        assert sum(p.sum() for p in (u.powers for u in pset.users)) == pytest.approx(2.0)

    def test_orthogonal_pair_keeps_own_subspace(self):
        e = np.eye(6)
        u0 = make_user_channel(0, e[:2].astype(complex))
        u1 = make_user_channel(1, e[2:4].astype(complex))
        pset = bd_precoders([u0, u1], "equal", 1.0)
        # the effective channel keeps the full per-user singular values
        s0 = np.linalg.svd(pset.users[0].effective, compute_uv=False)
        assert np.allclose(np.sort(s0)[-2:], 1.0, atol=1e-10)

    def test_zero_interference_residual(self, rng):
        for _ in range(30):
            group = random_group(rng, 8, [2, 3, 2])
            pset = bd_precoders(group, "waterfilling", 5.0)
            for k, up in enumerate(pset.users):
                for j, other in enumerate(group):
                    if j == k:
                        continue
                    resid = np.linalg.norm(other.h @ up.fa)
                    assert resid <= 1e-10 * np.linalg.norm(other.h)

    def test_budget_respected(self, rng):
        for policy in ("equal", "waterfilling"):
            group = random_group(rng, 6, [2, 2, 1])
            pset = bd_precoders(group, policy, 3.7)
            total = sum(float(u.powers.sum()) for u in pset.users)
            assert total <= 3.7 * (1 + 1e-9)
            assert total == pytest.approx(3.7, rel=1e-9)

    def test_infeasible_group_rejected(self, rng):
        group = random_group(rng, 4, [2, 2, 1])
        with pytest.raises(BDInfeasibleError, match="BD infeasible"):
            bd_precoders(group, "equal", 1.0)


class TestGroupSumCapacity:
    def test_zero_channel_group(self):
        users = [make_user_channel(0, np.zeros((2, 4)), rho=1.0)]
        assert group_sum_capacity(users, "equal", 1.0) == 0.0

    def test_single_antenna_closed_form(self, rng):
        h = crandn(rng, 1, 5)
        user = make_user_channel(0, h, rho=0.3)
        p_t, sigma_n2 = 4.0, 0.5
        got = group_sum_capacity([user], "equal", p_t, sigma_n2)
        ref = np.log2(1.0 + p_t / sigma_n2 * np.linalg.norm(user.h) ** 2)
        assert got == pytest.approx(ref, rel=1e-12)

    def test_waterfilling_beats_equal(self, rng):
        for _ in range(30):
            group = random_group(rng, 6, [2, 2, 1])
            p_t = float(rng.uniform(0.5, 20.0))
            cap_wf = group_sum_capacity(group, "waterfilling", p_t)
            cap_eq = group_sum_capacity(group, "equal", p_t)
            assert cap_wf >= cap_eq - 1e-9

    def test_monotone_in_power(self, rng):
        group = random_group(rng, 6, [2, 2])
        caps = [group_sum_capacity(group, "waterfilling", p) for p in (0.5, 1, 2, 4, 8)]
        assert all(b >= a - 1e-9 for a, b in zip(caps, caps[1:]))

    def test_transmit_rotation_invariance(self, rng):
        group = random_group(rng, 6, [2, 2, 1])
        rot = random_unitary(rng, 6)
        rotated = [
            make_user_channel(u.user_id, u.hbar @ rot, rho=u.rho) for u in group
        ]
        for policy in ("equal", "waterfilling"):
            assert group_sum_capacity(rotated, policy, 3.0) == pytest.approx(
                group_sum_capacity(group, policy, 3.0), rel=1e-9
            )

    def test_det_identity_small_vs_large_form(self, rng):
        # log2 det(I_mt + c H^H H P) == log2 det(I_mr + c H P H^H)
        from mimosched.subspace import null_space_basis

        group = random_group(rng, 6, [2, 3])
        pset = bd_precoders(group, "equal", 4.0)
        c = pset.beta**2 / 1.0
        for u, up in zip(group, pset.users):
            v0 = up.fa
            proj = v0 @ v0.conj().T
            big = np.eye(6) + c * (u.h.conj().T @ u.h @ proj)
            small = np.eye(u.m_r) + c * (u.h @ proj @ u.h.conj().T)
            _, ld_big = np.linalg.slogdet(big)
            _, ld_small = np.linalg.slogdet(small)
            assert ld_big == pytest.approx(ld_small, rel=1e-9)
            # eigenvalue form of the same rate
            eig = np.linalg.eigvalsh(u.h @ proj @ u.h.conj().T)
            assert np.sum(np.log2(1 + c * np.clip(eig, 0, None))) == pytest.approx(
                ld_small / np.log(2), rel=1e-9
            )


class TestCapacityBounds:
    def test_single_antenna_bounds_coincide(self, rng):
        group = random_group(rng, 4, [1, 2])
        b = bd_capacity_bounds(group, 0, 2.0)
        assert b.lower == pytest.approx(b.upper, rel=1e-12)

    def test_orthogonal_interference_full_angle_sum(self):
        e = np.eye(6)
        u0 = make_user_channel(0, e[:2].astype(complex), rho=0.8)
        u1 = make_user_channel(1, e[3:5].astype(complex), rho=0.5)
        b = bd_capacity_bounds([u0, u1], 0, 4.0)
        assert b.sin2_sum == pytest.approx(u0.m_r, abs=1e-10)
        caps = user_capacities(bd_precoders([u0, u1], "equal", 4.0))
        assert b.lower <= caps[0] + 1e-9
        assert caps[0] <= b.upper + 1e-9

    def test_sandwich_random_instances(self, rng):
        for _ in range(300):
            m_t = int(rng.choice([4, 6, 8]))
            sizes = [1, 2] if m_t == 4 else [1, 2, m_t - 4]
            group = random_group(rng, m_t, sizes)
            p_t = float(rng.uniform(0.1, 50.0))
            caps = user_capacities(bd_precoders(group, "equal", p_t))
            for k in range(len(group)):
                b = bd_capacity_bounds(group, k, p_t)
                assert caps[k] - b.lower >= -1e-9
                assert b.upper - caps[k] >= -1e-9
