import numpy as np
import pytest

from qkr_detector import (BlochVector, NonDecayingSeriesError, SimParams,
                          fit_damped_sine, fit_exp_decay, map_trajectory,
                          proportional_fit, residual_level, sweep)


class TestFitExpDecay:
    def test_synthetic_exact(self):
        t = np.arange(400)
        fit = fit_exp_decay(0.4 * np.exp(-0.0217 * t))
        assert fit.rate == pytest.approx(0.0217, abs=1e-6)
        assert fit.amplitude == pytest.approx(0.4, rel=1e-6)
        assert fit.frequency == 0.0

    def test_oscillating_synthetic(self):
        # A decaying envelope with Rabi wiggles: the envelope fit must see
        # through the oscillation.
        t = np.arange(600)
        series = 0.4 * np.exp(-0.02 * t) * np.abs(np.cos(0.2 * t + 0.3))
        series += 1e-6
        fit = fit_exp_decay(series)
        assert fit.rate == pytest.approx(0.02, rel=0.05)

    def test_constant_series_rejected(self):
        with pytest.raises(NonDecayingSeriesError):
            fit_exp_decay(np.full(100, 0.25))

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            fit_exp_decay(np.exp(-0.1 * np.arange(10)))

    def test_scale_equivariance(self):
        t = np.arange(500)
        base = 0.3 * np.exp(-0.015 * t) * (1.0 + 0.4 * np.cos(0.4 * t))
        base = np.abs(base) + 1e-9
        a = fit_exp_decay(base)
        b = fit_exp_decay(7.5 * base)
        assert b.rate == pytest.approx(a.rate, abs=1e-10)
        assert b.window == a.window
        assert b.amplitude == pytest.approx(7.5 * a.amplitude, rel=1e-10)

    def test_recovers_map_contraction(self):
        # Starting the channel on the x axis gives a pure exponential with
        # the exact per-kick contraction ln(1/(1 - eps^2)).
        for eps in (0.1, 0.2, 0.3):
            traj = map_trajectory(BlochVector(1.0, 0.0, 0.0), eps, 0.2, 400)
            fit = fit_exp_decay(np.abs(traj.rho01))
            assert fit.rate == pytest.approx(-np.log(1 - eps ** 2), rel=0.02)


class TestFitDampedSine:
    def test_synthetic_exact(self):
        t = np.arange(400)
        series = 0.5 + 0.5 * np.sin(0.404 * t + 0.405) * np.exp(-0.0436 * t)
        fit = fit_damped_sine(series, freq_hint=0.4)
        assert fit.amplitude == pytest.approx(0.5, abs=1e-4)
        assert fit.frequency == pytest.approx(0.404, abs=1e-4)
        assert fit.phase == pytest.approx(0.405, abs=1e-4)
        assert fit.rate == pytest.approx(0.0436, abs=1e-4)
        assert fit.converged

    def test_without_hint_uses_spectrum(self):
        t = np.arange(600)
        series = 0.5 + 0.3 * np.sin(0.25 * t + 1.0) * np.exp(-0.01 * t)
        fit = fit_damped_sine(series)
        assert fit.frequency == pytest.approx(0.25, abs=1e-6)

    def test_overdamped_pure_decay(self):
        # No oscillation at all: the frequency-zero start must win.
        t = np.arange(800)
        series = 0.5 + 0.3 * np.exp(-0.008 * t)
        fit = fit_damped_sine(series, freq_hint=0.2)
        model = (fit.amplitude * np.sin(fit.frequency * t + fit.phase)
                 * np.exp(-fit.rate * t))
        assert np.max(np.abs(model - (series - 0.5))) < 1e-6
        assert fit.rate == pytest.approx(0.008, rel=0.01)

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            fit_damped_sine(np.full(30, 0.5))

    def test_scale_equivariance(self):
        t = np.arange(400)
        base = 0.4 * np.sin(0.3 * t + 0.2) * np.exp(-0.02 * t)
        a = fit_damped_sine(0.5 + base, freq_hint=0.3)
        b = fit_damped_sine(0.5 + 3.0 * base, freq_hint=0.3)
        assert b.rate == pytest.approx(a.rate, abs=1e-10)
        assert b.frequency == pytest.approx(a.frequency, abs=1e-10)
        assert b.phase == pytest.approx(a.phase, abs=1e-10)
        assert b.amplitude == pytest.approx(3.0 * a.amplitude, rel=1e-8)


class TestResidualLevel:
    def test_constant(self):
        assert residual_level(np.full(50, 0.125), 10, 40) == 0.125

    def test_window_validation(self):
        with pytest.raises(ValueError):
            residual_level(np.ones(10), 5, 20)
        with pytest.raises(ValueError):
            residual_level(np.ones(10), 7, 3)

    def test_ergodic_scaling(self):
        # Random unit vectors reproduce the 1/sqrt(N) coherence floor with
        # an N-independent prefactor of sqrt(pi)/2 / sqrt(2) ~ 0.63.
        rng = np.random.default_rng(9)
        scaled = []
        for n_levels in (128, 256, 512, 1024, 2048, 4096):
            values = []
            for _ in range(100):
                c = rng.normal(size=(2, n_levels)) + 1j * rng.normal(
                    size=(2, n_levels))
                c /= np.linalg.norm(c)
                values.append(abs(np.vdot(c[1], c[0])))
            scaled.append(np.mean(values) * np.sqrt(2 * n_levels))
        assert max(scaled) / min(scaled) < 1.3
        assert all(s == pytest.approx(np.sqrt(np.pi) / (2 * np.sqrt(2)),
                                      rel=0.25) for s in scaled)


class TestProportionalFit:
    def test_exact_line(self):
        x = np.array([1.0, 2.0, 3.0])
        assert proportional_fit(x, 0.57 * x) == pytest.approx(0.57)


class TestSweep:
    @staticmethod
    def template(t_max=400):
        return SimParams.for_levels(128, K=8.0, epsilon=0.3, delta=0.2,
                                    t_max=t_max)

    def test_rows_in_input_order(self):
        rows = sweep(self.template(), "epsilon", [0.4, 0.2, 0.3],
                     (1 / np.sqrt(5), 2 / np.sqrt(5)))
        assert [r.value for r in rows] == [0.4, 0.2, 0.3]

    def test_bad_row_flagged_not_fatal(self):
        rows = sweep(self.template(t_max=30), "epsilon", [0.3],
                     (1 / np.sqrt(5), 2 / np.sqrt(5)))
        assert rows[0].flag.startswith("error:")
        assert np.isnan(rows[0].gamma1)

    def test_unknown_parameter(self):
        with pytest.raises(ValueError):
            sweep(self.template(), "bogus", [1.0], (1.0, 0.0))

    def test_empty_values(self):
        with pytest.raises(ValueError):
            sweep(self.template(), "epsilon", [], (1.0, 0.0))

    def test_parallel_identical_to_serial(self):
        qubit = (1 / np.sqrt(5), 2 / np.sqrt(5))
        serial = sweep(self.template(), "epsilon", [0.2, 0.3, 0.4], qubit,
                       workers=1)
        parallel = sweep(self.template(), "epsilon", [0.2, 0.3, 0.4], qubit,
                         workers=3)
        for a, b in zip(serial, parallel):
            assert a.value == b.value
            assert (a.gamma1 == b.gamma1) or (np.isnan(a.gamma1)
                                              and np.isnan(b.gamma1))
            assert (a.gamma2 == b.gamma2) or (np.isnan(a.gamma2)
                                              and np.isnan(b.gamma2))
            assert a.flag == b.flag
