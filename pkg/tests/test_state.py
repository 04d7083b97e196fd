import numpy as np
import pytest

from qkr_detector import (BlochVector, CoupledState, QubitDensity, SimParams,
                          bloch_from_density, dense_oracle_step,
                          density_from_bloch)


def random_coupled(n, rng):
    v = rng.normal(size=(2, n)) + 1j * rng.normal(size=(2, n))
    return CoupledState(v / np.linalg.norm(v))


def random_params(n, rng, t_max=1):
    hbar = 2 * np.pi / n
    return SimParams(K=rng.uniform(0.5, 8.0),
                     epsilon_c=rng.uniform(0.0, 0.5) * hbar,
                     delta=rng.uniform(0.0, 0.3),
                     hbar=hbar, n_levels=n, t_max=t_max)


class TestSimParams:
    def test_quantization_constraint(self):
        with pytest.raises(ValueError, match="2\\*pi"):
            SimParams(K=8.0, epsilon_c=0.0, delta=0.1, hbar=1e-3,
                      n_levels=512, t_max=1)

    def test_power_of_two(self):
        with pytest.raises(ValueError, match="power of two"):
            SimParams(K=8.0, epsilon_c=0.0, delta=0.1,
                      hbar=2 * np.pi / 100, n_levels=100, t_max=1)

    def test_epsilon_derived(self):
        p = SimParams.for_levels(512, K=8.0, epsilon=0.3, delta=0.1, t_max=1)
        assert p.epsilon == pytest.approx(0.3, rel=1e-14)
        assert p.n_levels * p.hbar == pytest.approx(2 * np.pi, rel=1e-13)

    def test_momentum_grid_on_torus(self):
        p = SimParams.for_levels(64, K=1.0, epsilon=0.0, delta=0.0, t_max=1)
        grid = p.momentum_grid()
        assert grid.min() == pytest.approx(-np.pi)
        assert grid.max() < np.pi
        assert len(np.unique(p.momentum_index())) == 64


class TestBloch:
    def test_north_pole(self):
        rho = density_from_bloch(BlochVector(0.0, 0.0, 1.0))
        assert rho.matrix == pytest.approx(np.diag([1.0, 0.0]))

    def test_maximally_mixed(self):
        rho = density_from_bloch(BlochVector(0.0, 0.0, 0.0))
        assert rho.matrix == pytest.approx(np.eye(2) / 2)

    def test_x_eigenstate(self):
        rho = density_from_bloch(BlochVector(1.0, 0.0, 0.0))
        assert rho.rho01 == pytest.approx(0.5)
        assert rho.rho00 == pytest.approx(0.5)
        assert rho.rho11 == pytest.approx(0.5)

    def test_round_trip(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            v = rng.normal(size=3)
            v *= rng.uniform(0, 1) / np.linalg.norm(v)
            b = BlochVector(*v)
            back = bloch_from_density(density_from_bloch(b))
            assert abs(back.x - b.x) < 1e-14
            assert abs(back.y - b.y) < 1e-14
            assert abs(back.z - b.z) < 1e-14

    def test_unphysical_rejected(self):
        with pytest.raises(ValueError):
            density_from_bloch(BlochVector(1.0, 1.0, 1.0))


class TestDenseOracle:
    def test_unitarity(self):
        rng = np.random.default_rng(0)
        state = random_coupled(8, rng)
        out = dense_oracle_step(state, random_params(8, rng))
        assert abs(out.norm() - 1.0) < 1e-12

    def test_block_diagonal_when_uncoupled(self):
        rng = np.random.default_rng(1)
        p = SimParams.for_levels(8, K=1.0, epsilon_c=0.0, delta=0.0, t_max=1)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi /= np.linalg.norm(psi)
        state = CoupledState(np.stack([psi, np.zeros(8, dtype=complex)]))
        out = dense_oracle_step(state, p)
        assert np.max(np.abs(out.components[1])) == 0.0

    def test_linearity(self):
        rng = np.random.default_rng(2)
        p = random_params(16, rng)
        a = random_coupled(16, rng)
        b = random_coupled(16, rng)
        mix = CoupledState(0.3 * a.components + 0.7j * b.components)
        direct = dense_oracle_step(mix, p).components
        combined = (0.3 * dense_oracle_step(a, p).components
                    + 0.7j * dense_oracle_step(b, p).components)
        assert direct == pytest.approx(combined, abs=1e-12)

    def test_dimension_limit(self):
        rng = np.random.default_rng(3)
        with pytest.raises(ValueError, match="n_levels"):
            dense_oracle_step(random_coupled(128, rng),
                              random_params(128, rng))


class TestQubitDensity:
    def test_purity(self):
        assert QubitDensity(np.eye(2) / 2).purity == pytest.approx(0.5)
        assert QubitDensity(np.diag([1.0, 0.0])).purity == pytest.approx(1.0)
