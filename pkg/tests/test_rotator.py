import numpy as np
import pytest
import sympy

from qkr_detector import (ClassicalPoint, DetectorState, SimParams,
                          classical_jacobian, classical_step, free_propagate,
                          init_gaussian, kick, lyapunov, p_mean,
                          p_second_moment, rotator_step, theta_mean)


def params_for(n, K=8.0, epsilon=None, epsilon_c=None, delta=0.2, t_max=1):
    if epsilon is None and epsilon_c is None:
        epsilon = 0.3
    return SimParams.for_levels(n, K=K, epsilon=epsilon, epsilon_c=epsilon_c,
                                delta=delta, t_max=t_max)


class TestGaussianPacket:
    def test_normalized(self):
        p = params_for(512)
        g = init_gaussian(1.0, 0.5, p)
        assert abs(g.norm() - 1.0) < 1e-12

    def test_centered_at_fixed_point(self):
        p = params_for(512)
        g = init_gaussian(np.pi, 0.0, p)
        assert abs(theta_mean(g, p) - np.pi) < 1e-6
        assert abs(p_mean(g, p)) < 1e-6

    def test_minimum_uncertainty(self):
        p = params_for(512)
        g = init_gaussian(np.pi, 0.0, p)
        theta = p.theta_grid()
        w = np.abs(g.amplitudes) ** 2
        mean = np.sum(w * theta)
        d_theta = np.sqrt(np.sum(w * (theta - mean) ** 2))
        d_p = np.sqrt(p_second_moment(g, p) - p_mean(g, p) ** 2)
        assert d_theta * d_p == pytest.approx(p.hbar / 2, rel=0.1)

    def test_off_torus_rejected(self):
        p = params_for(64)
        with pytest.raises(ValueError):
            init_gaussian(-0.1, 0.0, p)
        with pytest.raises(ValueError):
            init_gaussian(np.pi, np.pi, p)


class TestKick:
    def test_zero_strength_is_identity(self):
        rng = np.random.default_rng(0)
        p = params_for(64)
        psi = rng.normal(size=64) + 1j * rng.normal(size=64)
        psi /= np.linalg.norm(psi)
        out = kick(DetectorState(psi.copy()), 0.0, p)
        assert out.amplitudes == pytest.approx(psi)

    def test_norm_preserved(self):
        rng = np.random.default_rng(1)
        p = params_for(256)
        psi = rng.normal(size=256) + 1j * rng.normal(size=256)
        psi /= np.linalg.norm(psi)
        out = kick(DetectorState(psi), 7.3, p)
        assert abs(out.norm() - 1.0) < 1e-14

    def test_matches_direct_evaluation(self):
        p = params_for(8, K=1.0, epsilon_c=0.0)
        psi = np.zeros(8, dtype=complex)
        psi[0] = 1.0
        out = kick(DetectorState(psi), 1.0, p)
        expected = np.exp(-1j * np.cos(p.theta_grid()) / p.hbar) * psi
        assert out.amplitudes == pytest.approx(expected, abs=1e-15)

    def test_wrong_representation(self):
        p = params_for(8)
        with pytest.raises(ValueError):
            kick(DetectorState(np.ones(8) / np.sqrt(8), "momentum"), 1.0, p)


class TestFreePropagate:
    def test_momentum_eigenstate_gets_global_phase(self):
        p = params_for(32)
        k = 5
        psi = np.exp(1j * k * p.theta_grid()) / np.sqrt(32)
        out = free_propagate(DetectorState(psi), p)
        expected = np.exp(-0.5j * p.hbar * k ** 2) * psi
        assert out.amplitudes == pytest.approx(expected, abs=1e-14)

    def test_uniform_state_unchanged(self):
        p = params_for(32)
        psi = np.ones(32, dtype=complex) / np.sqrt(32)
        out = free_propagate(DetectorState(psi), p)
        assert out.amplitudes == pytest.approx(psi, abs=1e-14)

    def test_matches_dense_fourier_construction(self):
        rng = np.random.default_rng(2)
        n = 8
        p = params_for(n)
        psi = rng.normal(size=n) + 1j * rng.normal(size=n)
        psi /= np.linalg.norm(psi)
        j = np.arange(n)
        fourier = np.exp(-2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
        k = p.momentum_index()
        dense = fourier.conj().T @ np.diag(
            np.exp(-0.5j * p.hbar * k ** 2)) @ fourier
        out = free_propagate(DetectorState(psi.copy()), p)
        assert out.amplitudes == pytest.approx(dense @ psi, abs=1e-12)


class TestRotatorPeriod:
    def test_matches_dense_oracle_small_n(self):
        # Full kick period against an explicit matrix, spin left out.
        rng = np.random.default_rng(3)
        for n in (8, 16, 32):
            p = params_for(n, K=1.7, epsilon_c=0.0, delta=0.0)
            psi = rng.normal(size=n) + 1j * rng.normal(size=n)
            psi /= np.linalg.norm(psi)
            j = np.arange(n)
            fourier = np.exp(-2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
            free = fourier.conj().T @ np.diag(
                np.exp(-0.5j * p.hbar * p.momentum_index() ** 2)) @ fourier
            dense = np.diag(np.exp(-1j * 1.7 * np.cos(p.theta_grid())
                                   / p.hbar)) @ free
            out = rotator_step(DetectorState(psi.copy()), 1.7, p)
            assert out.amplitudes == pytest.approx(dense @ psi, abs=1e-10)

    def test_long_run_norm_conservation(self):
        p = params_for(2 ** 13, K=8.0, epsilon_c=0.0, delta=0.0)
        state = init_gaussian(np.pi, 0.0, p)
        for _ in range(2000):
            state = rotator_step(state, 8.0, p)
        assert abs(state.norm() - 1.0) < 1e-12


class TestClassicalMap:
    def test_fixed_point(self):
        pt = ClassicalPoint(np.pi, 0.0)
        out = classical_step(pt, 4.5)
        assert out.theta == pytest.approx(np.pi, abs=1e-12)
        assert out.p == pytest.approx(0.0, abs=1e-12)

    def test_free_rotation(self):
        out = classical_step(ClassicalPoint(1.0, 0.5), 0.0)
        assert out.p == pytest.approx(0.5)
        assert out.theta == pytest.approx(1.5)

    def test_fixed_point_stability_boundary(self):
        # Trace of the one-step Jacobian at (pi, 0) is 2 - K_eff, so the
        # fixed point is stable exactly for 0 <= K_eff <= 4.
        for k_eff in (0.5, 2.0, 3.9, 4.1, 8.0):
            jac = classical_jacobian(np.pi, k_eff)
            assert np.trace(jac) == pytest.approx(2.0 - k_eff)
            stable = abs(np.trace(jac)) <= 2.0
            assert stable == (0.0 <= k_eff <= 4.0)

    def test_area_preservation_symbolic(self):
        theta, k = sympy.symbols("theta k", real=True)
        jac = sympy.Matrix([[1, k * sympy.cos(theta)],
                            [1, 1 + k * sympy.cos(theta)]])
        assert sympy.simplify(jac.det()) == 1

    def test_area_preservation_numeric(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            jac = classical_jacobian(rng.uniform(0, 2 * np.pi),
                                     rng.uniform(0, 10))
            det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
            assert det == pytest.approx(1.0, abs=1e-12)

    def test_tangent_dynamics(self):
        pt = ClassicalPoint(1.2, -0.4, np.array([0.3, 0.7]))
        out = classical_step(pt, 2.0)
        jac = classical_jacobian(1.2, 2.0)
        assert out.tangent == pytest.approx(jac @ np.array([0.3, 0.7]))


class TestLyapunov:
    def test_chaotic_values(self):
        assert lyapunov(4.5, 100, 10_000, seed=1) == pytest.approx(0.81,
                                                                   rel=0.15)
        assert lyapunov(8.0, 100, 10_000, seed=1) == pytest.approx(np.log(4),
                                                                   rel=0.10)

    def test_quasi_integrable(self):
        assert lyapunov(0.5, 50, 2000, seed=1) < 0.05

    def test_deterministic(self):
        assert lyapunov(4.5, 20, 1500, seed=42) == lyapunov(4.5, 20, 1500,
                                                            seed=42)

    def test_converged_in_steps(self):
        a = lyapunov(4.5, 50, 4000, seed=3)
        b = lyapunov(4.5, 50, 8000, seed=3)
        assert abs(a - b) / b < 0.05

    def test_preconditions(self):
        with pytest.raises(ValueError):
            lyapunov(4.5, 5, 10_000)
        with pytest.raises(ValueError):
            lyapunov(4.5, 100, 100)
