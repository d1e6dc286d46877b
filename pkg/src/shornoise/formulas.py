"""Closed-form and semi-analytic output probabilities for periodic input states.

All evaluators describe the transform of the measured-register state: a
uniform superposition over the indices {j*r + l : j = 0..A} inside a register
of size q = 2^L.  Three mutually checking routes are provided:

* ``ftilde_systematic`` -- geometric-sum closed form of the output amplitude
  under a constant phase offset per index step, with a direct-summation
  fallback wherever the geometric denominator vanishes;
* ``pc_systematic``     -- the real closed form of |amplitude|^2;
* ``pc_double_sum``     -- the explicit O((A+1)^2) cosine double sum with
  arbitrary per-term amplitude and phase errors.

With zero errors and r | q all three reduce to probability 1/r exactly at
the multiples of q/r and 0 elsewhere.

When r does not divide q the uniform superposition has A+1 = ceil((q-l)/r)
terms rather than q/r, so the sqrt(r)/q prefactor generalizes to
1/sqrt(q*(A+1)) and the geometric numerator exponent q to (A+1)*r; the
divisible case recovers the familiar constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SINGULARITY_TOL = 1e-9   # |sin| below this routes to the direct-sum branch
_DENOM_TOL = 1e-12       # complex geometric-denominator guard


@dataclass(frozen=True)
class PeriodicStateSpec:
    """Register size q = 2^L, period r, and offset l of a periodic support."""

    q: int
    r: int
    l: int = 0

    def __post_init__(self):
        if self.q < 2 or (self.q & (self.q - 1)) != 0:
            raise ValueError(f"q must be a power of two >= 2, got {self.q}")
        if not 0 < self.r < self.q:
            raise ValueError(f"period r must satisfy 0 < r < q, got r={self.r}")
        if not 0 <= self.l < self.r:
            raise ValueError(f"offset l must satisfy 0 <= l < r, got l={self.l}")

    @property
    def num_qubits(self) -> int:
        return self.q.bit_length() - 1

    @property
    def term_count(self) -> int:
        """A+1: the exact number of j >= 0 with j*r + l <= q - 1."""
        return (self.q - 1 - self.l) // self.r + 1

    @property
    def a_max(self) -> int:
        """A: the largest term index."""
        return self.term_count - 1

    def support(self) -> np.ndarray:
        """The indices {l, l+r, ..., l+A*r}."""
        return np.arange(self.l, self.q, self.r, dtype=np.int64)

    def divides(self) -> bool:
        return self.q % self.r == 0


def prep_amplitude_error(a: int, delta: float, n: int) -> float:
    """First-order relative amplitude 1 + delta*(2s - n) after n imperfect
    superposition gates, where s is the number of set bits of a."""
    if not 0 <= a < (1 << n):
        raise ValueError(f"index {a} out of range for {n} bits")
    s = bin(a).count("1")
    return 1.0 + delta * (2 * s - n)


def _ftilde_direct(c: int, spec: PeriodicStateSpec, delta: float) -> complex:
    phi = 2.0 * np.pi * c / spec.q + delta
    j = np.arange(spec.term_count)
    total = np.sum(np.exp(1j * phi * (j * spec.r + spec.l)))
    return complex(total / math.sqrt(spec.q * spec.term_count))


def ftilde_systematic(c: int, spec: PeriodicStateSpec, delta: float) -> complex:
    """Output amplitude at c under a constant per-step phase offset delta.

    Closed form: e^{i l phi} (1 - e^{i phi r (A+1)}) / (1 - e^{i phi r})
    / sqrt(q (A+1)) with phi = 2 pi c / q + delta.  Wherever the denominator
    vanishes (the offsets listed by ``singular_deltas``) the sum is evaluated
    directly; those points are removable and give the full 1/sqrt(r') peak.
    """
    phi = 2.0 * np.pi * c / spec.q + delta
    den = 1.0 - np.exp(1j * phi * spec.r)
    if abs(den) < _DENOM_TOL:
        return _ftilde_direct(c, spec, delta)
    num = 1.0 - np.exp(1j * phi * spec.r * spec.term_count)
    value = np.exp(1j * spec.l * phi) * num / den
    return complex(value / math.sqrt(spec.q * spec.term_count))


def pc_systematic(c: int, spec: PeriodicStateSpec, delta: float) -> float:
    """Relative probability of output c under a constant phase offset.

    For r | q this is the closed form
        (r / q^2) sin^2(delta q / 2) / sin^2(pi c r / q + delta r / 2),
    evaluated by the direct sum wherever the denominator sine is within
    1e-9 of zero (removable singularities, including the delta -> 0 ideal
    peaks, where the value tends to 1/r).  For r not dividing q the general
    |ftilde_systematic|^2 is used.
    """
    if not spec.divides():
        return abs(ftilde_systematic(c, spec, delta)) ** 2
    # reduce pi*(c r / q) mod pi exactly (q is a power of two, so the
    # fractional part is exact in binary); the sign flip squares away and
    # full precision survives near the peaks
    rem = (c * spec.r) % spec.q
    den = math.sin(math.pi * (rem / spec.q) + delta * spec.r / 2.0)
    if abs(den) < SINGULARITY_TOL:
        return abs(_ftilde_direct(c, spec, delta)) ** 2
    num = math.sin(delta * spec.q / 2.0)
    return (spec.r / spec.q**2) * (num / den) ** 2


def systematic_distribution(spec: PeriodicStateSpec, delta: float) -> np.ndarray:
    """pc_systematic evaluated over all q outputs."""
    return np.array([pc_systematic(c, spec, delta) for c in range(spec.q)])


def singular_deltas(spec: PeriodicStateSpec, c: int, k_range) -> np.ndarray:
    """Offsets where the geometric-sum denominator vanishes for output c.

    Solves sin(pi c r / q + delta r / 2) = 0: delta = (2 pi / r)(k - c r / q)
    for integer k.  At these offsets the closed forms must be replaced by the
    direct sum; the value there is finite (the aligned-phase peak).
    """
    ks = np.asarray(list(k_range), dtype=np.float64)
    return (2.0 * np.pi / spec.r) * (ks - c * spec.r / spec.q)


def pc_double_sum(
    c: int,
    spec: PeriodicStateSpec,
    amp_errors: np.ndarray,
    phase_errors: np.ndarray,
) -> float:
    """Explicit double-sum probability with per-term amplitude/phase errors.

    P_c = (1 / (q (A+1))) * sum_m sum_k (1 + amp_m)(1 + amp_k)
          * cos[(2 pi c / q) r (m - k)
                + (m r + l) phase_m - (k r + l) phase_k]

    The prefactor equals r/q^2 whenever r | q.  Arrays must have one entry
    per superposition term (length A+1).
    """
    n_terms = spec.term_count
    amp_errors = np.asarray(amp_errors, dtype=np.float64)
    phase_errors = np.asarray(phase_errors, dtype=np.float64)
    if amp_errors.shape != (n_terms,) or phase_errors.shape != (n_terms,):
        raise ValueError(
            f"error arrays must have length {n_terms}, "
            f"got {amp_errors.shape} and {phase_errors.shape}"
        )
    m = np.arange(n_terms)
    weights = 1.0 + amp_errors
    site_phase = (m * spec.r + spec.l) * phase_errors
    angle = (
        (2.0 * np.pi * c / spec.q) * spec.r * (m[:, None] - m[None, :])
        + site_phase[:, None]
        - site_phase[None, :]
    )
    total = np.sum(np.outer(weights, weights) * np.cos(angle))
    return float(total / (spec.q * n_terms))


def double_sum_distribution(
    spec: PeriodicStateSpec, amp_errors: np.ndarray, phase_errors: np.ndarray
) -> np.ndarray:
    """pc_double_sum evaluated over all q outputs."""
    return np.array(
        [pc_double_sum(c, spec, amp_errors, phase_errors) for c in range(spec.q)]
    )


def combined_amp_error(delta_a: float, delta_c: float) -> float:
    """First-order combination of two small relative-amplitude errors:
    (1 + delta_a)(1 + delta_c) = 1 + (delta_a + delta_c) + O(delta^2)."""
    return delta_a + delta_c
