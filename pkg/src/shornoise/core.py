"""Dense complex statevectors, measurement distributions, and seeded deviate streams.

Basis convention: index ``a`` of the amplitude array is the integer value of
the register, with qubit 0 as the least-significant bit.  Statevectors are
dense ``complex128`` arrays; the supported register width is capped at
MAX_QUBITS = 24 (16M amplitudes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 24

NORM_TOL = 1e-10       # unitary-path norm drift allowance
RELATIVE_TOL = 1e-9    # |norm^2 - 1| above this marks a distribution as relative


class DegenerateStateError(ValueError):
    """Raised when a zero-norm state or zero-sum distribution is used where it cannot be."""


class ResourceLimitError(RuntimeError):
    """Raised when an operation would exceed its documented size limit."""


class LuckyFactorError(Exception):
    """gcd(y, N) != 1: no order to find, but the gcd is already a nontrivial factor."""

    def __init__(self, y: int, modulus: int, factor: int):
        super().__init__(f"gcd({y}, {modulus}) = {factor} is a nontrivial factor")
        self.y = y
        self.modulus = modulus
        self.factor = factor


@dataclass
class StateVector:
    """Amplitudes of an ``num_qubits``-qubit register over 2^L basis states."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}, got {self.num_qubits}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())


@dataclass
class Distribution:
    """Probabilities (or relative probabilities) over the 2^L output indices.

    ``relative=True`` means the values are |amplitude|^2 of an unnormalized
    state and do not sum to 1; they are still valid up to a common scale.
    """

    probs: np.ndarray
    relative: bool = False

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        if self.probs.ndim != 1:
            raise ValueError("probs must be a 1-d array")
        if np.any(self.probs < -1e-12):
            raise ValueError("probabilities must be non-negative")
        self.probs = np.maximum(self.probs, 0.0)  # absorb round-off residue
        if not self.relative and abs(self.probs.sum() - 1.0) > RELATIVE_TOL:
            raise ValueError("non-relative distribution must sum to 1 within 1e-9")

    def normalized(self) -> np.ndarray:
        total = self.probs.sum()
        if total <= 0:
            raise DegenerateStateError("cannot normalize a zero-sum distribution")
        return self.probs / total


class RngStream:
    """Reproducible deviate stream keyed by (seed, stream_id).

    Backed by the Philox 4x64 counter-based generator with key
    ``[seed, stream_id]``, so equal keys give bit-identical sequences on any
    platform and distinct stream ids give statistically independent streams.
    Never uses the process-global generator.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.stream_id = int(stream_id) & 0xFFFFFFFFFFFFFFFF
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def random(self) -> float:
        """Uniform deviate on [0, 1)."""
        return float(self._gen.random())

    def normal(self, sigma: float) -> float:
        """Zero-mean Gaussian deviate with standard deviation sigma."""
        return float(sigma) * float(self._gen.standard_normal())

    def spawn(self, stream_id: int) -> "RngStream":
        """Independent stream with the same seed and a new stream id."""
        return RngStream(self.seed, stream_id)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def new_basis_state(num_qubits: int, index: int) -> StateVector:
    """Computational basis state |index> on a register of the given width."""
    dim = 1 << num_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def to_distribution(state: StateVector, normalize: bool = False) -> Distribution:
    """Squared-modulus distribution of a state.

    With ``normalize`` the probabilities are rescaled to sum to 1 (raising
    DegenerateStateError on a zero state).  Otherwise the raw |amplitude|^2
    values are returned and flagged relative when the state norm is off 1 by
    more than 1e-9, as happens for modeled (non-unitary) transforms.
    """
    probs = np.abs(state.amplitudes) ** 2
    total = probs.sum()
    if normalize:
        if total <= 0:
            raise DegenerateStateError("cannot normalize the all-zero state")
        return Distribution(probs / total, relative=False)
    return Distribution(probs, relative=bool(abs(total - 1.0) > RELATIVE_TOL))


def sample_index(dist: Distribution, rng: RngStream) -> int:
    """Draw an output index c with probability probs[c] / sum(probs)."""
    probs = dist.probs
    cum = np.cumsum(probs)
    total = cum[-1] if cum.size else 0.0
    if total <= 0:
        raise DegenerateStateError("cannot sample from a zero-sum distribution")
    u = rng.random() * total
    return int(np.searchsorted(cum, u, side="right"))
