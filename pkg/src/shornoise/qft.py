"""The discrete Fourier transform three ways.

``noisy_qft`` runs the gate circuit: one superposition gate per qubit
interleaved with conditional-phase gates of angle pi/2^(k-j), processed from
the most-significant qubit down, followed by the bit-reversal relabeling that
restores the standard integer meaning of the output index.  Every gate draws
its own error angle; the drawn angles are recorded so a run can be replayed.

``exact_dft`` is the independent oracle: direct O(4^L) summation of
out[c] = (1/sqrt(q)) sum_a e^{2 pi i a c / q} in[a], never the circuit.

``modeled_dft`` is the per-input-index error model: each input amplitude is
scaled by (1 + amp_errors[a]) and rotated by e^{i * phase_errors[a] * a}
before an exact transform, so the output is generally unnormalized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ResourceLimitError, StateVector
from .gates import (
    ErrorModel,
    RngStream,
    apply_controlled_phase,
    apply_single_qubit,
    controlled_phase_gate,
    sample_gate_error,
    walsh_hadamard_gate,
)

MAX_EXACT_DFT_QUBITS = 16

_DFT_BLOCK_ROWS = 1024  # keeps the direct-sum working set small at large L


@dataclass
class QftReport:
    """Circuit output plus the per-gate error transcript that produced it."""

    num_qubits: int
    model: ErrorModel
    deltas: np.ndarray
    state: StateVector

    def __post_init__(self):
        expected = gate_count(self.num_qubits)
        if len(self.deltas) != expected:
            raise ValueError(
                f"transcript has {len(self.deltas)} deltas, circuit has {expected} gates"
            )


def gate_count(num_qubits: int) -> int:
    """L superposition gates plus L(L-1)/2 conditional phases."""
    return num_qubits * (num_qubits + 1) // 2


def bit_reverse_permutation(num_qubits: int) -> np.ndarray:
    """perm[i] = the index whose bits are those of i in reverse order."""
    q = 1 << num_qubits
    perm = np.zeros(q, dtype=np.int64)
    for i in range(q):
        rev = 0
        for b in range(num_qubits):
            if (i >> b) & 1:
                rev |= 1 << (num_qubits - 1 - b)
        perm[i] = rev
    return perm


def _gate_sequence(num_qubits: int):
    """Yield ('phase', j, k) and ('had', m) ops in circuit order.

    Qubits are processed m = L-1 down to 0; each group applies the phases
    coupling m to every higher qubit, then the superposition gate on m.  The
    transcript index of each op is its position in this iteration.
    """
    for m in range(num_qubits - 1, -1, -1):
        for k in range(num_qubits - 1, m, -1):
            yield ("phase", m, k)
        yield ("had", m)


def qft_with_deltas(state: StateVector, deltas: np.ndarray) -> StateVector:
    """Run the transform circuit with one prescribed error angle per gate.

    Replaying a QftReport's transcript through this function reproduces its
    output bit-exactly.
    """
    n = state.num_qubits
    deltas = np.asarray(deltas, dtype=np.float64)
    if deltas.shape != (gate_count(n),):
        raise ValueError(f"expected {gate_count(n)} deltas, got shape {deltas.shape}")
    out = state
    for gi, op in enumerate(_gate_sequence(n)):
        if op[0] == "phase":
            _, m, k = op
            out = apply_controlled_phase(out, m, k, controlled_phase_gate(m, k, deltas[gi]))
        else:
            _, m = op
            out = apply_single_qubit(out, m, walsh_hadamard_gate(deltas[gi]))
    perm = bit_reverse_permutation(n)
    return StateVector(n, out.amplitudes[perm])


def noisy_qft(state: StateVector, model: ErrorModel, rng: RngStream) -> QftReport:
    """Gate-level transform under an error model, with a fresh deviate per gate."""
    deltas = np.array(
        [sample_gate_error(model, rng) for _ in range(gate_count(state.num_qubits))]
    )
    return QftReport(
        num_qubits=state.num_qubits,
        model=model,
        deltas=deltas,
        state=qft_with_deltas(state, deltas),
    )


def exact_dft(state: StateVector) -> StateVector:
    """Direct-summation Fourier transform (the circuit-independent oracle)."""
    n = state.num_qubits
    if n > MAX_EXACT_DFT_QUBITS:
        raise ResourceLimitError(
            f"exact_dft supports at most {MAX_EXACT_DFT_QUBITS} qubits, got {n}"
        )
    q = state.dim
    amps = state.amplitudes
    a = np.arange(q)
    out = np.empty(q, dtype=np.complex128)
    scale = 1.0 / np.sqrt(q)
    for start in range(0, q, _DFT_BLOCK_ROWS):
        c = np.arange(start, min(start + _DFT_BLOCK_ROWS, q))
        block = np.exp((2j * np.pi / q) * np.outer(c, a))
        out[c] = scale * (block @ amps)
    return StateVector(n, out)


def modeled_dft(
    state: StateVector, phase_errors: np.ndarray, amp_errors: np.ndarray
) -> StateVector:
    """Transform with per-input-index phase and amplitude errors.

    out[c] = (1/sqrt(q)) sum_a (1 + amp_errors[a])
             * e^{i (2 pi c / q + phase_errors[a]) a} * in[a]

    The per-index factors are independent of c, so the sum factorizes into a
    modulation of the input followed by the exact transform.  Amplitude
    errors make the map non-unitary: convert outputs to distributions with
    normalize=False to get relative probabilities.
    """
    q = state.dim
    phase_errors = np.asarray(phase_errors, dtype=np.float64)
    amp_errors = np.asarray(amp_errors, dtype=np.float64)
    if phase_errors.shape != (q,) or amp_errors.shape != (q,):
        raise ValueError(
            f"error arrays must have length {q}, got {phase_errors.shape} and {amp_errors.shape}"
        )
    a = np.arange(q)
    modulated = state.amplitudes * (1.0 + amp_errors) * np.exp(1j * phase_errors * a)
    return exact_dft(StateVector(state.num_qubits, modulated))
