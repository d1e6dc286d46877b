"""Built-in invariant suite behind the ``selftest`` CLI subcommand.

Every check is deterministic (fixed seeds) and fast; together they cover the
cross-oracle identities, gate/oracle equivalence, norm preservation,
sampling consistency, and the reproducibility contract.
"""

from __future__ import annotations

import numpy as np

from .core import RngStream, StateVector, new_basis_state, sample_index, to_distribution
from .experiments import FigureSpec, run_figure
from .formulas import (
    PeriodicStateSpec,
    double_sum_distribution,
    ftilde_systematic,
    pc_double_sum,
    pc_systematic,
    singular_deltas,
    systematic_distribution,
)
from .gates import ErrorMode, ErrorModel
from .qft import exact_dft, noisy_qft
from .shor import ShorInstance, post_measurement_state, success_probability

# chi-square 0.999 quantile for 127 degrees of freedom (128 uniform bins)
_CHI2_CRIT_DF127 = 181.9930452197729


def _check_ideal_peaks() -> tuple[bool, str]:
    spec = PeriodicStateSpec(128, 4, 0)
    zeros = np.zeros(spec.term_count)
    dist = double_sum_distribution(spec, zeros, zeros)
    gate = np.abs(
        noisy_qft(post_measurement_state(spec), ErrorModel(ErrorMode.NONE), RngStream(0))
        .state.amplitudes
    ) ** 2
    peaks = np.arange(0, 128, 32)
    ok = True
    for probs in (dist, gate):
        ok &= bool(np.all(np.abs(probs[peaks] - 0.25) < 1e-10))
        off = np.delete(probs, peaks)
        ok &= bool(np.all(off < 1e-12))
    return ok, "peaks 0.25 at multiples of q/r, zero elsewhere, both routes"


def _check_limit_law() -> tuple[bool, str]:
    spec = PeriodicStateSpec(128, 4, 0)
    err = abs(pc_systematic(32, spec, 1e-8) - 0.25)
    return err < 1e-6, f"|P(q/r) - 1/r| = {err:.2e} at offset 1e-8"


def _check_identity_chain() -> tuple[bool, str]:
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        q = 1 << int(rng.integers(4, 8))
        r = int(rng.integers(2, 9))
        l = int(rng.integers(0, r))
        spec = PeriodicStateSpec(q, r, l)
        c = int(rng.integers(0, q))
        delta = float(rng.uniform(-1.5, 1.5))
        direct = abs(ftilde_systematic(c, spec, delta)) ** 2
        closed = pc_systematic(c, spec, delta)
        constant = pc_double_sum(
            c, spec, np.zeros(spec.term_count), np.full(spec.term_count, delta)
        )
        worst = max(worst, abs(direct - closed), abs(direct - constant))
    # singular offsets must fall back to the direct sum and stay finite
    spec = PeriodicStateSpec(128, 4, 0)
    for c in (0, 5, 32):
        for delta in singular_deltas(spec, c, range(-1, 3)):
            value = pc_systematic(c, spec, float(delta))
            worst = max(worst, abs(value - abs(ftilde_systematic(c, spec, float(delta))) ** 2))
    return worst < 1e-10, f"worst route disagreement {worst:.2e}"


def _check_oracle_equivalence() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for L in (2, 3, 4, 5, 6):
        amps = rng.normal(size=1 << L) + 1j * rng.normal(size=1 << L)
        state = StateVector(L, amps / np.linalg.norm(amps))
        circuit = noisy_qft(state, ErrorModel(ErrorMode.NONE), RngStream(1)).state
        oracle = exact_dft(state)
        worst = max(worst, float(np.abs(circuit.amplitudes - oracle.amplitudes).max()))
    return worst < 1e-10, f"max amplitude deviation {worst:.2e}"


def _check_norm_preservation() -> tuple[bool, str]:
    state = post_measurement_state(PeriodicStateSpec(128, 4, 0))
    worst = 0.0
    models = [
        ErrorModel(ErrorMode.EM1, delta0=0.2),
        ErrorModel(ErrorMode.EM2_UNIFORM, s_max=0.3),
        ErrorModel(ErrorMode.EM2_GAUSS, sigma0=0.2),
        ErrorModel(ErrorMode.EM3_GAUSS, delta0=0.1, sigma0=0.1),
    ]
    for i, model in enumerate(models):
        out = noisy_qft(state, model, RngStream(3, i)).state
        worst = max(worst, abs(out.norm() - 1.0))
    return worst < 1e-10, f"max norm drift {worst:.2e}"


def _check_sampling() -> tuple[bool, str]:
    dist = to_distribution(exact_dft(new_basis_state(7, 0)))  # uniform over 128
    rng = RngStream(99)
    n = 100_000
    counts = np.zeros(128)
    for _ in range(n):
        counts[sample_index(dist, rng)] += 1
    expected = n / 128.0
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    return chi2 < _CHI2_CRIT_DF127, f"chi2 = {chi2:.1f} (crit {_CHI2_CRIT_DF127:.1f})"


def _check_determinism() -> tuple[bool, str]:
    instance = ShorInstance.create(15, 7)
    model = ErrorModel(ErrorMode.EM2_GAUSS, sigma0=0.05)
    a = success_probability(instance, model, trials=50, seed=11)
    b = success_probability(instance, model, trials=50, seed=11)
    fig_a = run_figure(FigureSpec(figure=3, seed=5))
    fig_b = run_figure(FigureSpec(figure=3, seed=5))
    same_fig = all(
        np.array_equal(sa.p, sb.p) for sa, sb in zip(fig_a.series, fig_b.series)
    )
    return a == b and same_fig, "equal seeds give identical estimates and datasets"


def _check_systematic_peak() -> tuple[bool, str]:
    spec = PeriodicStateSpec(128, 4, 0)
    probs = systematic_distribution(spec, 0.05)
    local_max = probs[127] > probs[126] and probs[127] > probs[0]
    ideal = systematic_distribution(spec, 0.0)
    return (
        local_max and probs[127] > 0.1 and ideal[127] < 1e-12,
        f"P(127) = {probs[127]:.4f} under offset 0.05, {ideal[127]:.1e} without",
    )


_CHECKS = [
    ("ideal-peaks", _check_ideal_peaks),
    ("limit-law", _check_limit_law),
    ("identity-chain", _check_identity_chain),
    ("oracle-equivalence", _check_oracle_equivalence),
    ("norm-preservation", _check_norm_preservation),
    ("systematic-peak-shift", _check_systematic_peak),
    ("sampling-consistency", _check_sampling),
    ("determinism", _check_determinism),
]


def run_selftest() -> int:
    """Run every invariant check, print one line each, return a process code."""
    failures = 0
    for name, check in _CHECKS:
        ok, detail = check()
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1
    print(f"{len(_CHECKS) - failures}/{len(_CHECKS)} checks passed")
    return 0 if failures == 0 else 1
