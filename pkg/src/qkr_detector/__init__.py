"""Spin-1/2 coupled to a quantum kicked rotator.

A deterministic detector model: the rotator's chaotic dynamics dephases
and relaxes the qubit, and the qubit state steers the rotator between
stable and chaotic motion.  The package simulates the full coupled
Floquet dynamics, extracts decoherence rates, and provides the analytic
phase-damping channel the dynamics converges to.
"""

__version__ = "0.1.0"

from .channel import (ContinuousRates, continuous_rates, continuous_solution,
                      free_rotation, map_step, map_trajectory, phase_damp,
                      phase_kick_exact, phase_kick_factor)
from .coupled import (HusimiGrid, Trajectory, box_integral, conditional_component,
                      coupled_step, evolve, fidelity_amplitude, fidelity_series,
                      husimi, initial_state, iterate_states,
                      phase_space_participation, reduced_density, wd_series)
from .fitting import (DecayFit, NonDecayingSeriesError, SweepRow,
                      fit_damped_sine, fit_exp_decay, proportional_fit,
                      residual_level, sweep)
from .rotator import (ClassicalPoint, classical_jacobian, classical_step,
                      free_propagate, init_gaussian, kick, lyapunov, p_mean,
                      p_second_moment, rotator_step, theta_mean, to_angle,
                      to_momentum)
from .state import (BlochVector, CoupledState, DetectorState, QubitDensity,
                    SimParams, bloch_from_density, dense_one_kick_unitary,
                    dense_oracle_step, density_from_bloch, qubit_rotation)

__all__ = [name for name in dir() if not name.startswith("_")]
