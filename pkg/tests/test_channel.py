import numpy as np
import pytest

from mimosched.channel import (
    ChannelRealization,
    Scenario,
    UserProfile,
    correlation_matrix,
    generate_realization,
    make_user_channel,
    matrix_sqrt_psd,
    received_power,
)


def small_scenario(**kw):
    defaults = dict(
        m_t=3,
        users=(UserProfile(0, m_r=2), UserProfile(1, m_r=2)),
        trials=4,
        seed=7,
        snr_db=(0.0, 10.0),
    )
    defaults.update(kw)
    return Scenario(**defaults)


class TestReceivedPower:
    def test_reference_distance(self):
        assert received_power(200.0, 3.0, 200.0) == 1.0

    def test_half_distance_cube(self):
        assert received_power(400.0, 3.0, 200.0) == pytest.approx(0.125)

    def test_far_user(self):
        assert received_power(1000.0, 3.0, 200.0) == pytest.approx(0.008)

    def test_below_reference_rejected(self):
        with pytest.raises(ValueError, match="reference"):
            received_power(150.0, 3.0, 200.0)

    def test_monotone_in_distance(self):
        d = np.linspace(200.0, 1000.0, 30)
        rho = [received_power(x, 3.0) for x in d]
        assert all(a > b for a, b in zip(rho, rho[1:]))


class TestCorrelationMatrix:
    def test_zero_coef_identity(self):
        assert np.array_equal(correlation_matrix(0.0, 3), np.eye(3))

    def test_unit_coef_all_ones(self):
        assert np.array_equal(correlation_matrix(1.0, 3), np.ones((3, 3)))

    def test_two_antennas(self):
        assert np.allclose(correlation_matrix(0.5, 2), [[1.0, 0.5], [0.5, 1.0]])

    def test_squared_exponent(self):
        r = correlation_matrix(0.5, 4)
        assert r[0, 2] == pytest.approx(0.5**4)
        assert r[0, 3] == pytest.approx(0.5**9)

    def test_psd_over_coef_range(self):
        for coef in np.linspace(0.0, 1.0, 21):
            w = np.linalg.eigvalsh(correlation_matrix(float(coef), 6))
            assert w.min() >= -1e-10

    def test_invalid_coef(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            correlation_matrix(1.2, 3)


class TestMatrixSqrtPsd:
    def test_identity(self):
        assert np.allclose(matrix_sqrt_psd(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        assert np.allclose(matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_reconstruction(self, rng):
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        r = a @ a.conj().T
        s = matrix_sqrt_psd(r)
        assert np.linalg.norm(s @ s - r) <= 1e-9 * np.linalg.norm(r)
        assert np.max(np.abs(s - s.conj().T)) < 1e-10

    def test_rejects_non_hermitian(self, rng):
        with pytest.raises(ValueError, match="Hermitian"):
            matrix_sqrt_psd(rng.standard_normal((3, 3)) + np.triu(np.ones((3, 3)), 1))

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError, match="indefinite"):
            matrix_sqrt_psd(np.diag([1.0, -0.5]))


class TestScenarioValidation:
    def test_overload_warning(self):
        with pytest.warns(UserWarning, match="not overloaded"):
            Scenario(m_t=8, users=(UserProfile(0, m_r=2),), trials=1)

    def test_bad_coefficient(self):
        with pytest.raises(ValueError, match="gamma_r"):
            UserProfile(0, m_r=1, gamma_r=1.5)

    def test_distance_below_reference(self):
        with pytest.raises(ValueError, match="d_ref"):
            small_scenario(users=(UserProfile(0, m_r=2, d=50.0), UserProfile(1, m_r=2)))


class TestGenerateRealization:
    def test_uncorrelated_reference_user_is_white(self):
        scn = small_scenario(
            users=(
                UserProfile(0, m_r=2, d=200.0, gamma_r=0.0, tau_t=0.0),
                UserProfile(1, m_r=2),
            )
        )
        real = generate_realization(scn, 0)
        u = real.users[0]
        assert u.rho == 1.0
        assert np.array_equal(u.h, u.hbar)
        # unit-variance white entries at moderate scale
        assert np.linalg.norm(u.hbar) ** 2 < 50.0

    def test_shapes_and_rho_range(self):
        scn = small_scenario()
        real = generate_realization(scn, 3)
        assert isinstance(real, ChannelRealization)
        for u in real.users:
            assert u.h.shape == (u.m_r, scn.m_t)
            assert 0.0 < u.rho <= 1.0
            assert np.allclose(u.h, np.sqrt(u.rho) * u.hbar)

    def test_deterministic_given_seed(self):
        scn = small_scenario()
        a = generate_realization(scn, 2)
        b = generate_realization(scn, 2)
        for ua, ub in zip(a.users, b.users):
            assert np.array_equal(ua.h, ub.h)
            assert ua.d == ub.d and ua.gamma_r == ub.gamma_r

    def test_trials_differ(self):
        scn = small_scenario()
        a = generate_realization(scn, 0)
        b = generate_realization(scn, 1)
        assert not np.allclose(a.users[0].h, b.users[0].h)

    def test_random_antenna_count_bounded(self):
        scn = small_scenario(
            users=(UserProfile(0), UserProfile(1), UserProfile(2)), m_r_max=3
        )
        counts = set()
        for t in range(40):
            for u in generate_realization(scn, t).users:
                counts.add(u.m_r)
        assert counts <= {1, 2, 3}
        assert len(counts) > 1

    def test_fixed_attributes_mode(self):
        scn = small_scenario(
            users=(UserProfile(0, m_r=2), UserProfile(1, m_r=2)),
            fixed_attributes=True,
        )
        a = generate_realization(scn, 0)
        b = generate_realization(scn, 5)
        for ua, ub in zip(a.users, b.users):
            assert ua.d == ub.d
            assert ua.gamma_r == ub.gamma_r
            assert ua.tau_t == ub.tau_t
            assert not np.allclose(ua.h, ub.h)  # fading still varies

    def test_serial_independence_across_trials(self):
        scn = small_scenario(trials=2000)
        vals = np.array(
            [generate_realization(scn, t).users[0].hbar[0, 0].real for t in range(2000)]
        )
        r = np.corrcoef(vals[:-1], vals[1:])[0, 1]
        assert abs(r) < 4.0 / np.sqrt(len(vals))

    def test_kronecker_covariance_oracle(self):
        # vec(hbar) covariance must match kron(R_t, R_r) (column stacking)
        gamma, tau = 0.6, 0.4
        m_r, m_t = 2, 3
        scn = Scenario(
            m_t=m_t,
            users=(UserProfile(0, m_r=m_r, d=200.0, gamma_r=gamma, tau_t=tau),
                   UserProfile(1, m_r=2)),
            trials=1,
            seed=99,
        )
        n = 100_000
        acc = np.zeros((m_r * m_t, m_r * m_t), dtype=complex)
        frob2 = 0.0
        for t in range(n):
            hbar = generate_realization(scn, t).users[0].hbar
            v = hbar.flatten(order="F")
            acc += np.outer(v, v.conj())
            frob2 += np.linalg.norm(hbar) ** 2
        emp = acc / n
        target = np.kron(
            correlation_matrix(tau, m_t), correlation_matrix(gamma, m_r)
        )
        rel = np.linalg.norm(emp - target) / np.linalg.norm(target)
        assert rel < 0.03
        # mean squared Frobenius norm equals m_r * m_t for any coefficients
        assert frob2 / n == pytest.approx(m_r * m_t, rel=0.02)


def test_make_user_channel_rank():
    h = np.array([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]], dtype=complex)
    u = make_user_channel(5, h, rho=0.5)
    assert u.rank == 1
    assert u.m_r == 2
    assert np.allclose(u.h, np.sqrt(0.5) * h)
