"""Analytic phase-damping channel approached by the chaotic detector.

Per kick the qubit Bloch vector is rotated about x by the Rabi angle
2*delta and then contracted in the x-y plane by (1 - epsilon^2); this is
the small-epsilon average of random phase kicks exp(-i*epsilon*cos(theta)
*sigma_z), whose exact off-diagonal factor is the mean of
exp(-2i*epsilon*cos(theta)) over theta.  The continuous-time limit is the
linear system dx/dt = -G x, dy/dt = -G y - 2*delta*z, dz/dt = 2*delta*y
with G = epsilon^2, solved in closed form for both the oscillatory and
the overdamped branch.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .coupled import Trajectory
from .state import TWO_PI, BlochVector, QubitDensity

PHASE_KICK_QUADRATURE_POINTS = 256


def free_rotation(b: BlochVector, delta: float) -> BlochVector:
    """Rotate the Bloch vector about x by the Rabi angle 2*delta."""
    c, s = np.cos(2.0 * delta), np.sin(2.0 * delta)
    return BlochVector(x=b.x, y=c * b.y - s * b.z, z=s * b.y + c * b.z)


def phase_damp(b: BlochVector, epsilon: float) -> BlochVector:
    """Contract the transverse components by (1 - epsilon^2).

    Valid as the leading-order average of random phase kicks; warns when
    epsilon is large enough that the expansion is unreliable.
    """
    if abs(epsilon) > 0.5:
        warnings.warn(f"phase_damp used outside its small-coupling regime "
                      f"(epsilon = {epsilon})", stacklevel=2)
    f = 1.0 - epsilon * epsilon
    return BlochVector(x=f * b.x, y=f * b.y, z=b.z)


def phase_kick_factor(epsilon: float,
                      n_points: int = PHASE_KICK_QUADRATURE_POINTS) -> float:
    """Exact off-diagonal factor: mean of exp(-2i*epsilon*cos(theta)).

    Evaluated by trapezoid quadrature on the periodic integrand, which is
    spectrally accurate; the imaginary part vanishes by symmetry.
    """
    theta = TWO_PI * np.arange(n_points) / n_points
    return float(np.mean(np.cos(2.0 * epsilon * np.cos(theta))))


def phase_kick_exact(rho: QubitDensity, epsilon: float) -> QubitDensity:
    """Average the phase kick exactly: diagonal entries unchanged,
    off-diagonal entries multiplied by :func:`phase_kick_factor`."""
    f = phase_kick_factor(epsilon)
    m = rho.matrix.copy()
    m[0, 1] *= f
    m[1, 0] *= f
    return QubitDensity(m)


def map_step(b: BlochVector, epsilon: float, delta: float) -> BlochVector:
    """One kick of the channel: rotation, then transverse contraction."""
    return phase_damp(free_rotation(b, delta), epsilon)


def map_trajectory(b0: BlochVector, epsilon: float, delta: float,
                   t_max: int) -> Trajectory:
    """Iterate the per-kick channel and record the qubit observables.

    The detector observable slot p2 is not defined for the channel and is
    filled with NaN.
    """
    c, s = np.cos(2.0 * delta), np.sin(2.0 * delta)
    f = 1.0 - epsilon * epsilon
    if abs(epsilon) > 0.5:
        warnings.warn(f"phase damping iterated outside its small-coupling "
                      f"regime (epsilon = {epsilon})", stacklevel=2)
    n_rec = t_max + 1
    xs = np.empty(n_rec)
    ys = np.empty(n_rec)
    zs = np.empty(n_rec)
    x, y, z = b0.x, b0.y, b0.z
    xs[0], ys[0], zs[0] = x, y, z
    for t in range(1, n_rec):
        x = f * x
        y, z = f * (c * y - s * z), s * y + c * z
        xs[t], ys[t], zs[t] = x, y, z
    r2 = xs * xs + ys * ys + zs * zs
    return Trajectory(t=np.arange(n_rec),
                      rho01=0.5 * (xs - 1j * ys),
                      rho11=0.5 * (1.0 - zs),
                      p2=np.full(n_rec, np.nan),
                      purity=0.5 * (1.0 + r2))


@dataclass(frozen=True)
class ContinuousRates:
    """Decay rates of the continuous-time channel.

    gamma_x is the exact decay rate of x.  For gamma_x < 4*delta the
    transverse pair (y, z) oscillates at ``omega`` under an envelope
    decaying at ``gamma_envelope`` = gamma_x/2; otherwise it splits into
    two pure decays with rates ``gamma_minus`` < ``gamma_plus``.
    """

    gamma_x: float
    oscillatory: bool
    omega: float
    gamma_envelope: float
    gamma_minus: float
    gamma_plus: float


def continuous_rates(epsilon: float, delta: float) -> ContinuousRates:
    """Characteristic rates of the continuous channel, G = epsilon^2."""
    g = epsilon * epsilon
    disc = 0.25 * g * g - 4.0 * delta * delta
    if disc < 0.0:
        omega = float(np.sqrt(-disc))
        return ContinuousRates(gamma_x=g, oscillatory=True, omega=omega,
                               gamma_envelope=0.5 * g, gamma_minus=0.5 * g,
                               gamma_plus=0.5 * g)
    root = float(np.sqrt(disc))
    return ContinuousRates(gamma_x=g, oscillatory=False, omega=0.0,
                           gamma_envelope=0.5 * g,
                           gamma_minus=0.5 * g - root,
                           gamma_plus=0.5 * g + root)


def _cos_sinc(omega2: float, t: float) -> tuple[float, float]:
    """cos(w*t) and sin(w*t)/w for w = sqrt(omega2), valid on both branches.

    omega2 < 0 turns the pair into cosh/sinh growth, which combined with
    the exp(-G*t/2) prefactor yields the two overdamped decay rates; a
    series handles |w*t| -> 0 so the critically damped limit (a + b*t) is
    reached without a 0/0.
    """
    u2 = omega2 * t * t
    if abs(u2) < 1e-6:
        # cos(wt) = 1 - u2/2 + u2^2/24; sin(wt)/w = t*(1 - u2/6 + u2^2/120)
        return 1.0 - u2 / 2.0 + u2 * u2 / 24.0, \
            t * (1.0 - u2 / 6.0 + u2 * u2 / 120.0)
    if omega2 > 0.0:
        w = np.sqrt(omega2)
        return float(np.cos(w * t)), float(np.sin(w * t) / w)
    w = np.sqrt(-omega2)
    return float(np.cosh(w * t)), float(np.sinh(w * t) / w)


def continuous_solution(b0: BlochVector, epsilon: float, delta: float,
                        t: float) -> BlochVector:
    """Closed-form Bloch vector of the continuous channel at time t.

    Covers the oscillatory (G < 4*delta), overdamped (G > 4*delta) and
    critically damped branches continuously.
    """
    g = epsilon * epsilon
    omega2 = 4.0 * delta * delta - 0.25 * g * g
    cos_t, sinc_t = _cos_sinc(omega2, t)
    envelope = np.exp(-0.5 * g * t)
    # d/dt at t=0 plus (G/2)*value, the coefficient of sin(w*t)/w.
    ay = -0.5 * g * b0.y - 2.0 * delta * b0.z
    az = 2.0 * delta * b0.y + 0.5 * g * b0.z
    return BlochVector(
        x=float(b0.x * np.exp(-g * t)),
        y=float(envelope * (b0.y * cos_t + ay * sinc_t)),
        z=float(envelope * (b0.z * cos_t + az * sinc_t)),
    )
