"""Statevector simulator and analysis toolkit for quantum period finding
under imperfect gate operations."""

__version__ = "0.1.0"

from .core import (
    Distribution,
    DegenerateStateError,
    LuckyFactorError,
    ResourceLimitError,
    RngStream,
    StateVector,
    new_basis_state,
    sample_index,
    to_distribution,
)
from .formulas import (
    PeriodicStateSpec,
    combined_amp_error,
    double_sum_distribution,
    ftilde_systematic,
    pc_double_sum,
    pc_systematic,
    prep_amplitude_error,
    singular_deltas,
    systematic_distribution,
)
from .gates import (
    ControlledPhaseGate,
    ErrorMode,
    ErrorModel,
    apply_controlled_phase,
    apply_single_qubit,
    controlled_phase_gate,
    hadamard_gate,
    sample_gate_error,
    walsh_hadamard_gate,
)
from .qft import QftReport, exact_dft, gate_count, modeled_dft, noisy_qft, qft_with_deltas
from .shor import (
    ShorInstance,
    SuccessEstimate,
    TrialResult,
    multiplicative_order,
    post_measurement_state,
    prepare_uniform_noisy,
    recover_period,
    simulate_full_run,
    success_probability,
    wilson_interval,
)
from .experiments import (
    Dataset,
    FigureSpec,
    PeakReport,
    Series,
    ThresholdReport,
    detect_peaks,
    emit_dataset,
    emit_svg,
    emit_threshold,
    parse_dataset,
    run_figure,
    threshold_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
