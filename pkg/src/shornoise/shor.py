"""End-to-end order finding: instance setup, register simulation, recovery.

The modular-exponentiation stage is not simulated gate by gate; y^a mod N is
evaluated classically and only its entangling effect is kept, as a map from
each second-register value to the first-register amplitudes of its residue
class.  Gate imperfections enter through the first-register preparation and
the transform circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Distribution,
    LuckyFactorError,
    RngStream,
    StateVector,
    new_basis_state,
    sample_index,
    to_distribution,
)
from .formulas import PeriodicStateSpec
from .gates import ErrorModel, apply_single_qubit, hadamard_gate, sample_gate_error
from .qft import noisy_qft

WILSON_Z = 1.959963984540054  # two-sided 95%

RECOVERY_MULTIPLE_CAP = 64  # bound on the multiple search when verifying candidates


def multiplicative_order(y: int, modulus: int) -> int:
    """Smallest r > 0 with y^r = 1 (mod modulus), by direct iteration.

    Raises LuckyFactorError when gcd(y, modulus) != 1; the gcd is then
    already a nontrivial factor and there is no order to find.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if not 1 <= y < modulus:
        raise ValueError(f"base must satisfy 1 <= y < modulus, got y={y}")
    g = math.gcd(y, modulus)
    if g != 1:
        raise LuckyFactorError(y, modulus, g)
    r, acc = 1, y % modulus
    while acc != 1:
        acc = (acc * y) % modulus
        r += 1
    return r


@dataclass(frozen=True)
class ShorInstance:
    """Factoring target N with base y, register width L, q = 2^L, and the
    (classically derived) order r of y mod N."""

    N: int
    y: int
    L: int
    q: int
    r: int

    @classmethod
    def create(cls, N: int, y: int) -> "ShorInstance":
        """Build an instance with L = ceil(log2(N^2)), so N^2 <= q <= 2 N^2."""
        if N < 3:
            raise ValueError(f"N must be >= 3, got {N}")
        if not 1 < y < N:
            raise ValueError(f"base must satisfy 1 < y < N, got y={y}")
        r = multiplicative_order(y, N)  # raises LuckyFactorError on shared factor
        L = (N * N - 1).bit_length()
        return cls(N=N, y=y, L=L, q=1 << L, r=r)


@dataclass(frozen=True)
class TrialResult:
    """One simulated run: measured offset class, output index, and recovery."""

    measured_l: int
    measured_c: int
    recovered_r: int | None
    success: bool
    transcript_seed: int


@dataclass(frozen=True)
class SuccessEstimate:
    """Success fraction with its Wilson 95% confidence interval."""

    successes: int
    trials: int
    probability: float
    ci_low: float
    ci_high: float


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def prepare_uniform_noisy(L: int, model: ErrorModel, rng: RngStream) -> StateVector:
    """Apply one imperfect superposition gate per qubit to |0...0>.

    Gates are applied to qubits 0..L-1 in order, each with a fresh error
    deviate.  Under a constant offset the amplitude of |a> is the exact
    product of per-bit gate entries, which to first order is
    (1 + delta*(2s - L)) / sqrt(2^L) with s the set-bit count of a.
    """
    state = new_basis_state(L, 0)
    for qubit in range(L):
        state = apply_single_qubit(state, qubit, hadamard_gate(sample_gate_error(model, rng)))
    return state


def post_measurement_state(spec: PeriodicStateSpec) -> StateVector:
    """Uniform superposition over the periodic support {j*r + l}."""
    amps = np.zeros(spec.q, dtype=np.complex128)
    amps[spec.support()] = 1.0 / math.sqrt(spec.term_count)
    return StateVector(spec.num_qubits, amps)


def _continued_fraction_convergents(num: int, den: int):
    """Convergents h/k of num/den in increasing-denominator order."""
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    while den:
        a = num // den
        num, den = den, num - a * den
        h0, h1 = a * h0 + h1, h0
        k0, k1 = a * k0 + k1, k0
        yield h0, k0


def recover_period(
    c: int,
    q: int,
    N: int,
    y: int | None = None,
    multiple_cap: int = RECOVERY_MULTIPLE_CAP,
) -> int | None:
    """Recover a period candidate from a measured index via continued fractions.

    Scans the convergents h/d of c/q in increasing-denominator order for the
    first d < N with |c/q - h/d| <= 1/(2q).  Without a base this bare
    denominator is returned.  Given the base y, each candidate is boosted
    through small multiples m*d (m up to ceil(N/d), capped at multiple_cap)
    and the first multiple with y^(m*d) = 1 (mod N) is returned; None means
    no candidate verified.  c = 0 carries no information and yields None.
    """
    if not 0 <= c < q:
        raise ValueError(f"measured index {c} out of range for register size {q}")
    if c == 0:
        return None
    for h, d in _continued_fraction_convergents(c, q):
        if d >= N:
            break
        if abs(c / q - h / d) <= 1.0 / (2.0 * q):
            if y is None:
                return d
            for m in range(1, min(-(-N // d), multiple_cap) + 1):
                if pow(y, m * d, N) == 1:
                    return m * d
    return None


def _class_weights(amps: np.ndarray, r: int) -> np.ndarray:
    """Probability of each residue class a = l (mod r) in the prepared register."""
    probs = np.abs(amps) ** 2
    return np.array([probs[l::r].sum() for l in range(r)])


def simulate_full_run(instance: ShorInstance, model: ErrorModel, rng: RngStream) -> TrialResult:
    """One complete trial: prepare, entangle, measure, transform, recover.

    The second register holds y^a mod N, which is constant on each residue
    class a = l (mod r); measuring it selects class l with the class's
    squared-amplitude weight (not exactly uniform once preparation is
    imperfect) and collapses the first register onto that class.  Success
    means the continued-fraction denominator of the measured index equals
    the true order.
    """
    prep = prepare_uniform_noisy(instance.L, model, rng)

    weights = _class_weights(prep.amplitudes, instance.r)
    measured_l = sample_index(Distribution(weights, relative=True), rng)

    collapsed = np.zeros_like(prep.amplitudes)
    support = np.arange(measured_l, instance.q, instance.r)
    collapsed[support] = prep.amplitudes[support]
    collapsed /= np.linalg.norm(collapsed)

    report = noisy_qft(StateVector(instance.L, collapsed), model, rng)
    measured_c = sample_index(to_distribution(report.state, normalize=True), rng)

    recovered = recover_period(measured_c, instance.q, instance.N)
    return TrialResult(
        measured_l=measured_l,
        measured_c=measured_c,
        recovered_r=recovered,
        success=(recovered == instance.r),
        transcript_seed=rng.stream_id,
    )


def success_probability(
    instance: ShorInstance, model: ErrorModel, trials: int, seed: int
) -> SuccessEstimate:
    """Monte Carlo success fraction over independent trials.

    Trial t uses RngStream(seed, t), so the estimate is reproducible and
    trials may be distributed in any order or in parallel.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    successes = sum(
        simulate_full_run(instance, model, RngStream(seed, t)).success for t in range(trials)
    )
    low, high = wilson_interval(successes, trials)
    return SuccessEstimate(
        successes=successes,
        trials=trials,
        probability=successes / trials,
        ci_low=low,
        ci_high=high,
    )
