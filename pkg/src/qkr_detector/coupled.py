"""Floquet evolution of the qubit (x) kicked-rotator system.

One kick applies, in order, the qubit rotation exp(-i*delta*sigma_x), the
free propagation exp(-i*p^2/(2*hbar)) of both spin components, and the
spin-conditional kick with effective strength K + epsilon_c (spin up) or
K - epsilon_c (spin down).  From the evolved state we extract the reduced
qubit density matrix, detector observables (<p^2>, Husimi distributions
and their coarse-grained box integrals) and the fidelity amplitude of the
two conditional detector evolutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .state import (ANGLE, TWO_PI, CoupledState, DetectorState, QubitDensity,
                    SimParams, qubit_rotation)
from .rotator import free_phase, init_gaussian


@dataclass
class Trajectory:
    """Per-kick records of a coupled run, indexed from t = 0."""

    t: np.ndarray
    rho01: np.ndarray
    rho11: np.ndarray
    p2: np.ndarray
    purity: np.ndarray

    def __len__(self) -> int:
        return len(self.t)


def _kick_phases(params: SimParams) -> np.ndarray:
    """Spin-conditional kick phases, shape (2, N)."""
    cos_theta = np.cos(params.theta_grid())
    k_up = params.K + params.epsilon_c
    k_down = params.K - params.epsilon_c
    return np.stack([np.exp(-1j * k_up * cos_theta / params.hbar),
                     np.exp(-1j * k_down * cos_theta / params.hbar)])


def coupled_step(state: CoupledState, params: SimParams) -> CoupledState:
    """Apply one kick of the coupled Floquet map."""
    c = qubit_rotation(params.delta) @ state.components
    phi = np.fft.fft(c, axis=1, norm="ortho") * free_phase(params)
    c = np.fft.ifft(phi, axis=1, norm="ortho")
    c *= _kick_phases(params)
    return CoupledState(c)


def reduced_density(state: CoupledState) -> QubitDensity:
    """Reduced qubit density matrix, rho_ij = sum_n c_{i,n} conj(c_{j,n})."""
    c = state.components
    return QubitDensity(c @ c.conj().T)


def initial_state(params: SimParams, qubit_init: tuple[complex, complex],
                  detector_init: tuple[float, float] = (np.pi, 0.0),
                  ) -> CoupledState:
    """Separable initial state: qubit (alpha, beta) (x) Gaussian packet."""
    alpha, beta = qubit_init
    norm = np.hypot(abs(alpha), abs(beta))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"qubit amplitudes not normalized: |alpha|^2+|beta|^2 = {norm**2}")
    packet = init_gaussian(detector_init[0], detector_init[1], params)
    return CoupledState.product(alpha, beta, packet)


def iterate_states(params: SimParams, qubit_init: tuple[complex, complex],
                   detector_init: tuple[float, float] = (np.pi, 0.0),
                   ) -> Iterator[tuple[int, CoupledState]]:
    """Yield (t, state) for t = 0 .. t_max.

    The yielded state shares its buffer with the iteration; copy it if it
    must outlive the next step.
    """
    state = initial_state(params, qubit_init, detector_init)
    c = state.components
    rot = qubit_rotation(params.delta)
    free = free_phase(params)
    kicks = _kick_phases(params)
    yield 0, state
    for t in range(1, params.t_max + 1):
        c = rot @ c
        phi = np.fft.fft(c, axis=1, norm="ortho") * free
        c = np.fft.ifft(phi, axis=1, norm="ortho")
        c *= kicks
        state.components = c
        yield t, state


def evolve(params: SimParams, qubit_init: tuple[complex, complex],
           detector_init: tuple[float, float] = (np.pi, 0.0)) -> Trajectory:
    """Run t_max kicks from a separable state and record the trajectory."""
    n_rec = params.t_max + 1
    rho01 = np.empty(n_rec, dtype=complex)
    rho11 = np.empty(n_rec)
    p2 = np.empty(n_rec)
    purity = np.empty(n_rec)
    p2_grid = params.momentum_grid() ** 2
    for t, state in iterate_states(params, qubit_init, detector_init):
        c = state.components
        r01 = np.vdot(c[1], c[0])          # sum_n c0 conj(c1)
        r11 = float(np.linalg.norm(c[1]) ** 2)
        r00 = float(np.linalg.norm(c[0]) ** 2)
        rho01[t] = r01
        rho11[t] = r11
        purity[t] = r00 * r00 + r11 * r11 + 2.0 * abs(r01) ** 2
        phi = np.fft.fft(c, axis=1, norm="ortho")
        p2[t] = float(np.sum((np.abs(phi[0]) ** 2 + np.abs(phi[1]) ** 2)
                             * p2_grid))
    return Trajectory(t=np.arange(n_rec), rho01=rho01, rho11=rho11, p2=p2,
                      purity=purity)


def fidelity_series(params: SimParams,
                    detector_init: tuple[float, float] = (np.pi, 0.0),
                    t_max: int | None = None) -> np.ndarray:
    """Overlap <psi_+(t)|psi_-(t)> of the two conditional detector evolutions.

    Both copies start from the same Gaussian packet; one evolves with kick
    strength K + epsilon_c, the other with K - epsilon_c (free propagation
    then kick, no qubit rotation).  Returns the complex overlap for
    t = 0 .. t_max.
    """
    if t_max is None:
        t_max = params.t_max
    packet = init_gaussian(detector_init[0], detector_init[1], params)
    pair = np.stack([packet.amplitudes, packet.amplitudes.copy()])
    free = free_phase(params)
    kicks = _kick_phases(params)      # row 0: K+eps_c, row 1: K-eps_c
    f = np.empty(t_max + 1, dtype=complex)
    f[0] = np.vdot(pair[0], pair[1])
    for t in range(1, t_max + 1):
        phi = np.fft.fft(pair, axis=1, norm="ortho") * free
        pair = np.fft.ifft(phi, axis=1, norm="ortho")
        pair *= kicks
        f[t] = np.vdot(pair[0], pair[1])
    return f


def fidelity_amplitude(params: SimParams,
                       detector_init: tuple[float, float] = (np.pi, 0.0),
                       t: int = 0) -> complex:
    """Fidelity amplitude after t kicks (see :func:`fidelity_series`)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return complex(fidelity_series(params, detector_init, t_max=t)[t])


@dataclass
class HusimiGrid:
    """Husimi distribution sampled on an m_theta x m_p grid of cell centers.

    values[i, j] is the distribution at theta = (i + 1/2)*2*pi/m_theta,
    p = -pi + (j + 1/2)*2*pi/m_p.
    """

    values: np.ndarray
    m_theta: int
    m_p: int

    @property
    def d_theta(self) -> float:
        return TWO_PI / self.m_theta

    @property
    def d_p(self) -> float:
        return TWO_PI / self.m_p

    def theta_centers(self) -> np.ndarray:
        return (np.arange(self.m_theta) + 0.5) * self.d_theta

    def p_centers(self) -> np.ndarray:
        return -np.pi + (np.arange(self.m_p) + 0.5) * self.d_p

    def total(self) -> float:
        """Torus integral of the sampled distribution."""
        return float(np.sum(self.values) * self.d_theta * self.d_p)


@lru_cache(maxsize=2)
def _husimi_kernel(m_theta: int, m_p: int, n_levels: int,
                   hbar: float) -> tuple[np.ndarray, np.ndarray]:
    """Precomputed projection kernel onto the analyzing coherent states.

    Returns (start, step): ``start[i, j]`` is conj(coherent) at cell row i
    and the lowest momentum column; multiplying by ``step`` advances the
    momentum column by one cell.  Wrapping the angle difference into
    [-pi, pi) makes a single Gaussian image exact to ~exp(-pi^2/(2*hbar)).
    """
    theta = TWO_PI * np.arange(n_levels) / n_levels
    theta0 = (np.arange(m_theta) + 0.5) * TWO_PI / m_theta
    d = np.mod(theta[None, :] - theta0[:, None] + np.pi, TWO_PI) - np.pi
    envelope = np.exp(-d * d / (2.0 * hbar))     # sigma^2 = hbar/2
    envelope /= np.linalg.norm(envelope, axis=1, keepdims=True)
    p_first = -np.pi + 0.5 * TWO_PI / m_p
    start = envelope * np.exp(-1j * (p_first / hbar) * d)
    step = np.exp(-1j * (TWO_PI / m_p / hbar) * d)
    return start, step


def husimi(component: DetectorState, grid: tuple[int, int],
           params: SimParams) -> HusimiGrid:
    """Husimi distribution H(theta0, p0) = |<coherent(theta0, p0)|psi>|^2.

    The analyzing coherent states are the same Gaussian packets used for
    initial conditions (sigma = sqrt(hbar/2)), so a normalized state
    integrates to 2*pi*hbar over the torus (one Planck cell).
    """
    m_theta, m_p = grid
    if m_theta < 16 or m_p < 16:
        raise ValueError(f"grid resolution must be >= 16, got {grid}")
    if component.representation != ANGLE:
        raise ValueError("husimi expects the angle representation")
    psi = component.amplitudes
    start, step = _husimi_kernel(m_theta, m_p, params.n_levels, params.hbar)
    proj = start.copy()
    values = np.empty((m_theta, m_p))
    for jp in range(m_p):
        values[:, jp] = np.abs(proj @ psi) ** 2
        if jp + 1 < m_p:
            proj *= step
    return HusimiGrid(values=values, m_theta=m_theta, m_p=m_p)


def phase_space_participation(grid: HusimiGrid) -> float:
    """Inverse participation measure of the spread: 1 / sum(H^2 * dA),
    larger for states occupying more phase-space cells."""
    h = grid.values / grid.total()
    return float(1.0 / (np.sum(h * h) * grid.d_theta * grid.d_p))


def conditional_component(state: CoupledState, spin: int) -> DetectorState:
    """Normalized detector component conditioned on spin 0 (up) or 1 (down)."""
    psi = state.components[spin]
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError(f"spin component {spin} has zero weight")
    return DetectorState(psi / norm, ANGLE)


def box_integral(grid: HusimiGrid, center: tuple[float, float],
                 side: float) -> float:
    """Fraction of the (unit-normalized) distribution inside a square box.

    Cells count as inside when their centers lie within the box; the box
    may wrap around either torus direction.
    """
    if side <= 0.0:
        raise ValueError("box side must be positive")
    theta_c, p_c = center
    half = 0.5 * side
    d_theta = np.abs(np.mod(grid.theta_centers() - theta_c + np.pi, TWO_PI)
                     - np.pi)
    d_p = np.abs(np.mod(grid.p_centers() - p_c + np.pi, TWO_PI) - np.pi)
    mask = (d_theta[:, None] <= half) & (d_p[None, :] <= half)
    weight = np.sum(grid.values[mask]) * grid.d_theta * grid.d_p
    return float(weight / grid.total())


def wd_series(params: SimParams, qubit_init: tuple[complex, complex],
              detector_init: tuple[float, float] = (np.pi, 0.0),
              box_center: tuple[float, float] = (np.pi, 0.0),
              box_side: float = 0.253, grid: tuple[int, int] = (128, 128),
              mode: str = "conditional") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Box integral of the spin-up / spin-down Husimi distribution per kick.

    mode "conditional" reads both spin components out of one coupled run;
    mode "eigenstate" runs the detector alone with the two conditional kick
    strengths K +/- epsilon_c (no qubit rotation).
    Returns (t, wd_up, wd_down).
    """
    n_rec = params.t_max + 1
    wd = np.empty((2, n_rec))
    if mode == "conditional":
        for t, state in iterate_states(params, qubit_init, detector_init):
            for spin in (0, 1):
                h = husimi(conditional_component(state, spin), grid, params)
                wd[spin, t] = box_integral(h, box_center, box_side)
    elif mode == "eigenstate":
        packet = init_gaussian(detector_init[0], detector_init[1], params)
        pair = np.stack([packet.amplitudes, packet.amplitudes.copy()])
        free = free_phase(params)
        kicks = _kick_phases(params)
        for t in range(n_rec):
            if t > 0:
                phi = np.fft.fft(pair, axis=1, norm="ortho") * free
                pair = np.fft.ifft(phi, axis=1, norm="ortho")
                pair *= kicks
            for spin in (0, 1):
                h = husimi(DetectorState(pair[spin], ANGLE), grid, params)
                wd[spin, t] = box_integral(h, box_center, box_side)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return np.arange(n_rec), wd[0], wd[1]
