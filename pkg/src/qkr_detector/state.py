"""Core state types shared by all simulator modules.

The detector is a particle on the torus 0 <= theta < 2*pi, -pi <= p < pi,
discretized on N angle points theta_j = 2*pi*j/N.  Momenta are p = hbar*k
with integer k in [-N/2, N/2), kept in FFT frequency order, and
hbar = 2*pi/N ties the two grids together.  The qubit rides along as a
second tensor factor, so a coupled state is a pair of length-N complex
vectors (spin-up and spin-down amplitudes).

A dense 2N x 2N one-kick unitary assembled on the same grid serves as a
brute-force cross-check of the split-operator evolution (small N only).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

TWO_PI = 2.0 * np.pi

ANGLE = "angle"
MOMENTUM = "momentum"


@dataclass(frozen=True)
class SimParams:
    """Parameter set of one run.

    K          classical kick strength (dimensionless)
    epsilon_c  qubit-detector coupling strength
    delta      half Rabi frequency (Rabi frequency is 2*delta)
    hbar       effective Planck constant, hbar = 2*pi/n_levels
    n_levels   detector Hilbert-space dimension (power of two)
    t_max      number of kicks to evolve
    """

    K: float
    epsilon_c: float
    delta: float
    hbar: float
    n_levels: int
    t_max: int

    def __post_init__(self):
        n = self.n_levels
        if n <= 0 or (n & (n - 1)) != 0:
            raise ValueError(f"n_levels must be a power of two, got {n}")
        if self.hbar <= 0.0:
            raise ValueError("hbar must be positive")
        if abs(n * self.hbar - TWO_PI) > 1e-12 * TWO_PI:
            raise ValueError(
                f"n_levels * hbar = {n * self.hbar!r} must equal 2*pi "
                "(torus quantization)"
            )
        if self.t_max < 0:
            raise ValueError("t_max must be non-negative")

    @property
    def epsilon(self) -> float:
        """Coupling strength in units of hbar, epsilon = epsilon_c / hbar."""
        return self.epsilon_c / self.hbar

    @classmethod
    def for_levels(cls, n_levels: int, *, K: float, delta: float, t_max: int,
                   epsilon: float | None = None,
                   epsilon_c: float | None = None) -> "SimParams":
        """Build params from the level count, deriving hbar = 2*pi/n_levels.

        The coupling may be given either directly (epsilon_c) or in units
        of hbar (epsilon); exactly one of the two must be provided.
        """
        if (epsilon is None) == (epsilon_c is None):
            raise ValueError("give exactly one of epsilon or epsilon_c")
        hbar = TWO_PI / n_levels
        if epsilon_c is None:
            epsilon_c = epsilon * hbar
        return cls(K=K, epsilon_c=epsilon_c, delta=delta, hbar=hbar,
                   n_levels=n_levels, t_max=t_max)

    def theta_grid(self) -> np.ndarray:
        """Angle grid theta_j = 2*pi*j/N."""
        return TWO_PI * np.arange(self.n_levels) / self.n_levels

    def momentum_index(self) -> np.ndarray:
        """Integer momentum indices k in [-N/2, N/2), FFT frequency order."""
        n = self.n_levels
        k = np.arange(n)
        k[n // 2:] -= n
        return k

    def momentum_grid(self) -> np.ndarray:
        """Momentum values p = hbar*k in [-pi, pi), FFT frequency order."""
        return self.hbar * self.momentum_index()


@dataclass
class DetectorState:
    """Detector wavefunction with its representation tag.

    In the angle representation ``amplitudes[j]`` is psi(theta_j); in the
    momentum representation it is the coefficient of exp(i*k*theta) with k
    in FFT frequency order.
    """

    amplitudes: np.ndarray
    representation: str = ANGLE

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "DetectorState":
        return DetectorState(self.amplitudes.copy(), self.representation)


@dataclass
class CoupledState:
    """Qubit (x) detector wavefunction in the angle representation.

    ``components`` has shape (2, N): row 0 holds the spin-up amplitudes
    c_{0,n}, row 1 the spin-down amplitudes c_{1,n}.
    """

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=complex)
        if c.ndim != 2 or c.shape[0] != 2:
            raise ValueError(f"components must have shape (2, N), got {c.shape}")
        self.components = c

    @property
    def n_levels(self) -> int:
        return self.components.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def copy(self) -> "CoupledState":
        return CoupledState(self.components.copy())

    @classmethod
    def product(cls, alpha: complex, beta: complex,
                detector: DetectorState) -> "CoupledState":
        """Separable state (alpha|0> + beta|1>) (x) |detector>."""
        if detector.representation != ANGLE:
            raise ValueError("detector state must be in the angle representation")
        psi = detector.amplitudes
        return cls(np.stack([alpha * psi, beta * psi]))


@dataclass(frozen=True)
class QubitDensity:
    """2x2 reduced density matrix of the qubit."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def rho00(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def rho01(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def rho10(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def rho11(self) -> complex:
        return complex(self.matrix[1, 1])

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True)
class BlochVector:
    """Bloch-sphere coordinates (x, y, z) of a qubit density matrix,
    with rho11 = (1 - z)/2 and rho01 = (x - i*y)/2."""

    x: float
    y: float
    z: float

    def r2(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z


def density_from_bloch(b: BlochVector) -> QubitDensity:
    """Density matrix of the Bloch vector (x, y, z); requires |r| <= 1."""
    if b.r2() > 1.0 + 1e-10:
        raise ValueError(f"Bloch vector has |r|^2 = {b.r2()} > 1")
    return QubitDensity(np.array([
        [0.5 * (1.0 + b.z), 0.5 * (b.x - 1j * b.y)],
        [0.5 * (b.x + 1j * b.y), 0.5 * (1.0 - b.z)],
    ]))


def bloch_from_density(rho: QubitDensity) -> BlochVector:
    """Inverse of :func:`density_from_bloch`."""
    m = rho.matrix
    return BlochVector(x=float(2.0 * m[0, 1].real),
                       y=float(-2.0 * m[0, 1].imag),
                       z=float((m[0, 0] - m[1, 1]).real))


def qubit_rotation(delta: float) -> np.ndarray:
    """One-kick qubit rotation exp(-i*delta*sigma_x)."""
    c, s = np.cos(delta), np.sin(delta)
    return np.array([[c, -1j * s], [-1j * s, c]])


DENSE_ORACLE_MAX_LEVELS = 64


def dense_one_kick_unitary(params: SimParams) -> np.ndarray:
    """Explicit 2N x 2N one-kick unitary on the stacked vector [c_up; c_down].

    Assembled factor by factor: qubit rotation exp(-i*delta*sigma_x), free
    propagator built from the dense discrete Fourier matrix, then the
    spin-conditional kick exp(-i*(K +/- epsilon_c)*cos(theta)/hbar).
    O(N^3) to build; intended for cross-checks at small N.
    """
    n = params.n_levels
    if n > DENSE_ORACLE_MAX_LEVELS:
        raise ValueError(
            f"dense oracle limited to n_levels <= {DENSE_ORACLE_MAX_LEVELS}, "
            f"got {n}")
    j = np.arange(n)
    # Unitary DFT: angle -> momentum, F[k, j] = exp(-2i*pi*k*j/N)/sqrt(N).
    fourier = np.exp(-2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    k = params.momentum_index()
    free = fourier.conj().T @ np.diag(np.exp(-0.5j * params.hbar * k**2)) @ fourier

    theta = params.theta_grid()
    kick_up = np.diag(np.exp(-1j * (params.K + params.epsilon_c)
                             * np.cos(theta) / params.hbar))
    kick_down = np.diag(np.exp(-1j * (params.K - params.epsilon_c)
                               * np.cos(theta) / params.hbar))

    eye = np.eye(n)
    rot = np.kron(qubit_rotation(params.delta), eye)
    free_both = np.kron(np.eye(2), free)
    kick = np.block([[kick_up, np.zeros((n, n))],
                     [np.zeros((n, n)), kick_down]])
    return kick @ free_both @ rot


def dense_oracle_step(state: CoupledState, params: SimParams) -> CoupledState:
    """Apply one kick by dense matrix-vector product (verification oracle)."""
    u = dense_one_kick_unitary(params)
    vec = state.components.reshape(-1)
    return CoupledState((u @ vec).reshape(2, -1))
