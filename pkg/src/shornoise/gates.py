"""Perfect and imperfect elementary gates, error modes, and application kernels.

Two single-qubit conventions are exposed.  ``hadamard_gate`` is the plain
y-rotation by pi/2 + 2*delta.  ``walsh_hadamard_gate`` is the textbook
Hadamard followed by the same miscalibration rotation; it reduces to the
exact Hadamard at delta = 0 and differs from ``hadamard_gate`` only by a
trailing basis-phase flip (a Z factor), so the two act identically on |0>.
The DFT circuit uses the Walsh-Hadamard convention so its zero-error limit
is the exact transform.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import RngStream, StateVector

UNITARY_TOL = 1e-12


class ErrorMode(enum.Enum):
    """Gate-error channel: systematic offset, random deviate, or both."""

    NONE = "none"
    EM1 = "em1"                # constant offset delta0 on every gate
    EM2_UNIFORM = "em2u"       # uniform on [-s_max, +s_max], no offset
    EM2_GAUSS = "em2g"         # N(0, sigma0), no offset, no cut-off
    EM3_UNIFORM = "em3u"       # delta0 + uniform
    EM3_GAUSS = "em3g"         # delta0 + Gaussian

    @classmethod
    def from_string(cls, name: str) -> "ErrorMode":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown error mode {name!r}; expected one of: {valid}") from None


_RANDOM_MODES = frozenset(
    {ErrorMode.EM2_UNIFORM, ErrorMode.EM2_GAUSS, ErrorMode.EM3_UNIFORM, ErrorMode.EM3_GAUSS}
)
_PURE_RANDOM_MODES = frozenset({ErrorMode.EM2_UNIFORM, ErrorMode.EM2_GAUSS})


@dataclass(frozen=True)
class ErrorModel:
    """Error mode plus its parameters (radians) and the run seed.

    Pure-random modes have no systematic part: delta0 is forced to 0 for
    EM2_UNIFORM and EM2_GAUSS.
    """

    mode: ErrorMode = ErrorMode.NONE
    delta0: float = 0.0
    s_max: float = 0.0
    sigma0: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.s_max < 0:
            raise ValueError("s_max must be >= 0")
        if self.sigma0 < 0:
            raise ValueError("sigma0 must be >= 0")
        if self.mode in _PURE_RANDOM_MODES and self.delta0 != 0.0:
            object.__setattr__(self, "delta0", 0.0)

    @property
    def is_random(self) -> bool:
        return self.mode in _RANDOM_MODES

    @classmethod
    def from_config(
        cls,
        mode: str,
        delta0: float = 0.0,
        s_max: float = 0.0,
        sigma0: float = 0.0,
        seed: int = 0,
    ) -> "ErrorModel":
        """Build from the flat config / CLI field names."""
        return cls(ErrorMode.from_string(mode), delta0, s_max, sigma0, seed)


@dataclass(frozen=True)
class ControlledPhaseGate:
    """diag(1, 1, 1, e^{i*phase}) on a (control, target) qubit pair."""

    phase: float


def rotation_y(theta: float) -> np.ndarray:
    """[[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def hadamard_gate(delta: float) -> np.ndarray:
    """Imperfect superposition gate: the exact y-rotation by pi/2 + 2*delta.

    Returns (1/sqrt(2)) [[cos d - sin d, -(sin d + cos d)],
                         [sin d + cos d,   cos d - sin d]].
    The nominal validity range is |delta| < pi/4; larger offsets are allowed
    but warn, since the gate then no longer resembles a superposition gate.
    """
    if abs(delta) >= math.pi / 4:
        warnings.warn(
            "hadamard_gate offset outside the documented |delta| < pi/4 validity range",
            stacklevel=2,
        )
    c, s = math.cos(delta), math.sin(delta)
    inv = 1.0 / math.sqrt(2.0)
    return np.array(
        [[c - s, -(s + c)], [s + c, c - s]], dtype=np.complex128
    ) * inv


_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / math.sqrt(2.0)


def walsh_hadamard_gate(delta: float) -> np.ndarray:
    """Hadamard with a calibration error: y-rotation by 2*delta applied after H.

    Equals hadamard_gate(delta) @ diag(1, -1); at delta = 0 it is the exact
    Hadamard, which makes the zero-error DFT circuit exactly unitary-correct.
    """
    return rotation_y(2.0 * delta) @ _HADAMARD


def controlled_phase_gate(j: int, k: int, delta: float) -> ControlledPhaseGate:
    """Two-qubit conditional phase pi / 2^(k-j) + delta between bit lines j < k."""
    if k <= j:
        raise ValueError(f"controlled_phase_gate requires k > j, got j={j}, k={k}")
    return ControlledPhaseGate(phase=math.pi / (1 << (k - j)) + delta)


def sample_gate_error(model: ErrorModel, rng: RngStream) -> float:
    """Draw one gate-error angle (radians) for a single gate application.

    Uniform modes draw a magnitude s_max * u(0,1) and then a fair-coin sign,
    giving a symmetric uniform on [-s_max, +s_max].  Gaussian modes draw
    N(0, sigma0) with no cut-off.  EM1 is the constant delta0.
    """
    mode = model.mode
    if mode is ErrorMode.NONE:
        return 0.0
    if mode is ErrorMode.EM1:
        return model.delta0
    if mode in (ErrorMode.EM2_UNIFORM, ErrorMode.EM3_UNIFORM):
        magnitude = model.s_max * rng.random()
        sign = 1.0 if rng.random() < 0.5 else -1.0
        return model.delta0 + sign * magnitude
    if mode in (ErrorMode.EM2_GAUSS, ErrorMode.EM3_GAUSS):
        return model.delta0 + rng.normal(model.sigma0)
    raise ValueError(f"unhandled error mode {mode!r}")


def apply_single_qubit(state: StateVector, qubit: int, gate: np.ndarray) -> StateVector:
    """Apply a 2x2 gate to one qubit (qubit 0 = least-significant bit)."""
    n = state.num_qubits
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n}-qubit state")
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got shape {gate.shape}")
    tensor = state.amplitudes.reshape([2] * n)
    axis = n - 1 - qubit  # reshape puts the most-significant bit on axis 0
    tensor = np.moveaxis(tensor, axis, -1)
    tensor = tensor @ gate.T
    tensor = np.moveaxis(tensor, -1, axis)
    return StateVector(n, tensor.reshape(-1))


def apply_controlled_phase(
    state: StateVector, control: int, target: int, gate: ControlledPhaseGate
) -> StateVector:
    """Multiply every amplitude with both addressed bits set by e^{i*phase}."""
    n = state.num_qubits
    if control == target:
        raise ValueError("control and target must differ")
    for q in (control, target):
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range for {n}-qubit state")
    amps = state.amplitudes.copy()
    idx = np.arange(amps.size)
    mask = ((idx >> control) & 1).astype(bool) & ((idx >> target) & 1).astype(bool)
    amps[mask] *= np.exp(1j * gate.phase)
    return StateVector(n, amps)
