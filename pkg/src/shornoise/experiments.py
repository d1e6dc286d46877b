"""Figure reproduction, peak analysis, threshold sweeps, and serialization.

Figure datasets use relative probabilities over the output index c for a
q = 128, r = 4 periodic register by default:

* figure 1 -- zero errors (four 0.25 peaks at the multiples of q/r);
* figure 2 -- constant phase offsets 0.02 / 0.03 / 0.05, with the fourth
  panel overlaying 0.10 and 0.33;
* figure 3 -- uniform random per-term offsets with half-widths
  0.01 / 0.03 / 0.05 / 0.10;
* figure 4 -- Gaussian per-term offsets with widths 0.01 / 0.03 / 0.05 and a
  fourth panel combining a 0.33 constant offset with width 0.02.  The width
  parameter is interpreted as the Gaussian standard deviation sigma0 (this
  interpretation is flagged in the dataset metadata).

Random figures draw one error per superposition term (the per-index model
that the probability formulas integrate); ``gate_level=True`` switches to
drawing one error per circuit gate instead, for cross-checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import Distribution, RngStream
from .formulas import (
    PeriodicStateSpec,
    double_sum_distribution,
    systematic_distribution,
)
from .gates import ErrorMode, ErrorModel, sample_gate_error
from .qft import noisy_qft
from .shor import ShorInstance, SuccessEstimate, post_measurement_state, success_probability

DEFAULT_SUCCESS_TARGET = 0.25

_STREAM_STRIDE = 10_000  # stream ids: series_index * stride + trial


@dataclass(frozen=True)
class Series:
    """One plotted curve: (c, p) pairs plus its panel assignment."""

    name: str
    subfigure: int
    c: np.ndarray
    p: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.name == other.name
            and self.subfigure == other.subfigure
            and np.array_equal(self.c, other.c)
            and np.array_equal(self.p, other.p)
        )


@dataclass
class Dataset:
    series: list[Series]
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class FigureSpec:
    """Parameters of one figure run; the defaults reproduce the stock sweeps."""

    figure: int
    q: int = 128
    r: int = 4
    l: int = 0
    seed: int = 0
    trials: int = 1
    gate_level: bool = False

    def __post_init__(self):
        if self.figure not in (1, 2, 3, 4):
            raise ValueError(f"unknown figure id {self.figure}; expected 1..4")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class PeakReport:
    """Detected peaks versus the ideal peak layout of a periodic input."""

    peaks: tuple[tuple[int, float], ...]  # (c, height), highest first
    ideal_positions: tuple[int, ...]
    max_shift: int | None  # circular index distance; None when nothing was detected
    distortion: float      # total variation from the zero-error distribution
    # signed circular offset from each ideal position to its nearest detected
    # peak; systematic errors displace peaks coherently (all entries equal),
    # random errors jitter them with zero median
    signed_shifts: tuple[int, ...] | None = None


@dataclass(frozen=True)
class ThresholdReport:
    """Success curve over an error-magnitude grid and the estimated threshold."""

    N: int
    y: int
    mode: ErrorMode
    target: float
    grid: tuple[float, ...]
    estimates: tuple[SuccessEstimate, ...]
    threshold: float | None  # largest magnitude meeting the target; None if none does


# (subfigure, parameter) tables for the stock figures
_FIG2_DELTAS = ((1, 0.02), (2, 0.03), (3, 0.05), (4, 0.10), (4, 0.33))
_FIG3_SMAX = ((1, 0.01), (2, 0.03), (3, 0.05), (4, 0.10))
_FIG4_GAUSS = ((1, 0.0, 0.01), (2, 0.0, 0.03), (3, 0.0, 0.05), (4, 0.33, 0.02))


def draw_index_errors(model: ErrorModel, count: int, rng: RngStream) -> np.ndarray:
    """Draw one model-level error per superposition term."""
    return np.array([sample_gate_error(model, rng) for _ in range(count)])


def _gate_level_distribution(
    spec: PeriodicStateSpec, model: ErrorModel, rng: RngStream
) -> np.ndarray:
    report = noisy_qft(post_measurement_state(spec), model, rng)
    return np.abs(report.state.amplitudes) ** 2


def _figure_series_plan(fig_spec: FigureSpec) -> list[tuple[str, int, ErrorModel]]:
    """(series name, subfigure, error model) for each curve of the figure."""
    fig = fig_spec.figure
    if fig == 1:
        return [("ideal", 1, ErrorModel(ErrorMode.NONE))]
    if fig == 2:
        return [
            (f"delta0={d:g}", sub, ErrorModel(ErrorMode.EM1, delta0=d))
            for sub, d in _FIG2_DELTAS
        ]
    if fig == 3:
        return [
            (f"smax={s:g}", sub, ErrorModel(ErrorMode.EM2_UNIFORM, s_max=s))
            for sub, s in _FIG3_SMAX
        ]
    series = []
    for sub, d0, sigma in _FIG4_GAUSS:
        if d0 == 0.0:
            series.append((f"sigma0={sigma:g}", sub, ErrorModel(ErrorMode.EM2_GAUSS, sigma0=sigma)))
        else:
            series.append(
                (
                    f"delta0={d0:g} sigma0={sigma:g}",
                    sub,
                    ErrorModel(ErrorMode.EM3_GAUSS, delta0=d0, sigma0=sigma),
                )
            )
    return series


def run_figure(fig_spec: FigureSpec) -> Dataset:
    """Compute a figure's per-subfigure (c, relative probability) arrays.

    Deterministic curves (figure 1 and the constant-offset figure 2) yield
    one series each; random curves repeat ``trials`` times with independent
    streams, suffixing the series name with ``#t`` when trials > 1.
    """
    pspec = PeriodicStateSpec(fig_spec.q, fig_spec.r, fig_spec.l)
    cs = np.arange(pspec.q)
    all_series: list[Series] = []
    series_meta: dict[str, dict] = {}

    for series_index, (name, subfigure, model) in enumerate(_figure_series_plan(fig_spec)):
        n_draws = fig_spec.trials if model.is_random else 1
        for trial in range(n_draws):
            stream_id = series_index * _STREAM_STRIDE + trial
            rng = RngStream(fig_spec.seed, stream_id)
            if fig_spec.gate_level:
                probs = _gate_level_distribution(pspec, model, rng)
            elif model.mode is ErrorMode.NONE:
                probs = double_sum_distribution(
                    pspec, np.zeros(pspec.term_count), np.zeros(pspec.term_count)
                )
            elif model.mode is ErrorMode.EM1:
                probs = systematic_distribution(pspec, model.delta0)
            else:
                phase_errors = draw_index_errors(model, pspec.term_count, rng)
                probs = double_sum_distribution(
                    pspec, np.zeros(pspec.term_count), phase_errors
                )
            probs[np.abs(probs) < 1e-12] = 0.0  # cosine-sum round-off floor
            label = name if n_draws == 1 else f"{name}#{trial}"
            all_series.append(Series(label, subfigure, cs.copy(), probs))
            series_meta[label] = {
                "mode": model.mode.value,
                "delta0": model.delta0,
                "s_max": model.s_max,
                "sigma0": model.sigma0,
                "subfigure": subfigure,
                "stream_id": stream_id,
            }

    metadata = {
        "tool": "shornoise",
        "version": __version__,
        "figure": fig_spec.figure,
        "q": fig_spec.q,
        "r": fig_spec.r,
        "l": fig_spec.l,
        "seed": fig_spec.seed,
        "trials": fig_spec.trials,
        "gate_level": fig_spec.gate_level,
        "relative_probabilities": True,
        "series": series_meta,
    }
    if fig_spec.figure == 4:
        metadata["note"] = (
            "width parameter interpreted as the Gaussian standard deviation sigma0"
        )
    return Dataset(all_series, metadata)


def ideal_peak_positions(spec: PeriodicStateSpec) -> tuple[int, ...]:
    """Nearest integer outputs to the exact peak locations k*q/r."""
    return tuple(int(round(k * spec.q / spec.r)) % spec.q for k in range(spec.r))


def detect_peaks(
    dist: Distribution, spec: PeriodicStateSpec, reference: np.ndarray | None = None
) -> PeakReport:
    """Locate peaks and quantify their displacement and shape damage.

    A peak is a circular local maximum strictly above mean + 3*stddev of the
    values.  max_shift is the worst circular distance from any ideal position
    k*q/r to its nearest detected peak; distortion is the total variation
    distance (0.5 * L1) between the sum-normalized values and the zero-error
    distribution (or ``reference`` when given).
    """
    p = np.asarray(dist.probs, dtype=np.float64)
    q = p.size
    if q != spec.q:
        raise ValueError(f"distribution has {q} bins, spec has q={spec.q}")
    threshold = p.mean() + 3.0 * p.std()
    left, right = np.roll(p, 1), np.roll(p, -1)
    is_peak = (p > left) & (p > right) & (p > threshold)
    positions = np.flatnonzero(is_peak)
    peaks = tuple(
        sorted(((int(c), float(p[c])) for c in positions), key=lambda t: -t[1])
    )

    ideal = ideal_peak_positions(spec)
    if positions.size:
        signed = []
        for pos in ideal:
            offsets = (positions - pos + q // 2) % q - q // 2
            signed.append(int(offsets[np.argmin(np.abs(offsets))]))
        signed_shifts = tuple(signed)
        max_shift = max(abs(s) for s in signed_shifts)
    else:
        signed_shifts = None
        max_shift = None

    if reference is None:
        zeros = np.zeros(spec.term_count)
        reference = double_sum_distribution(spec, zeros, zeros)
    reference = np.asarray(reference, dtype=np.float64)
    distortion = 0.5 * float(
        np.abs(p / p.sum() - reference / reference.sum()).sum()
    )
    return PeakReport(
        peaks=peaks,
        ideal_positions=ideal,
        max_shift=max_shift,
        distortion=distortion,
        signed_shifts=signed_shifts,
    )


def model_for_magnitude(mode: ErrorMode, magnitude: float, delta0: float = 0.0) -> ErrorModel:
    """Error model whose swept knob is set to ``magnitude``.

    EM1 sweeps the constant offset; uniform modes sweep the half-width and
    Gaussian modes the standard deviation.  For the combined (EM3) modes the
    fixed systematic part is ``delta0``.  NONE ignores the magnitude.
    """
    if mode is ErrorMode.NONE:
        return ErrorModel(ErrorMode.NONE)
    if mode is ErrorMode.EM1:
        return ErrorModel(ErrorMode.EM1, delta0=magnitude)
    if mode is ErrorMode.EM2_UNIFORM:
        return ErrorModel(mode, s_max=magnitude)
    if mode is ErrorMode.EM2_GAUSS:
        return ErrorModel(mode, sigma0=magnitude)
    if mode is ErrorMode.EM3_UNIFORM:
        return ErrorModel(mode, delta0=delta0, s_max=magnitude)
    if mode is ErrorMode.EM3_GAUSS:
        return ErrorModel(mode, delta0=delta0, sigma0=magnitude)
    raise ValueError(f"unhandled error mode {mode!r}")


def threshold_sweep(
    instance: ShorInstance,
    mode: ErrorMode,
    grid,
    trials: int,
    target: float = DEFAULT_SUCCESS_TARGET,
    seed: int = 0,
    delta0: float = 0.0,
) -> ThresholdReport:
    """Success probability per grid magnitude and the largest passing one.

    Grid point i uses seed + i as its Monte Carlo seed, so individual points
    are reproducible in isolation.  The threshold is the largest magnitude
    whose success estimate meets the target, or None if none does.
    """
    grid = tuple(float(g) for g in grid)
    if not grid:
        raise ValueError("magnitude grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("magnitude grid must be strictly increasing")
    estimates = tuple(
        success_probability(instance, model_for_magnitude(mode, g, delta0), trials, seed + i)
        for i, g in enumerate(grid)
    )
    threshold = None
    for g, est in zip(grid, estimates):
        if est.probability >= target:
            threshold = g
    return ThresholdReport(
        N=instance.N,
        y=instance.y,
        mode=mode,
        target=target,
        grid=grid,
        estimates=estimates,
        threshold=threshold,
    )


def emit_dataset(dataset: Dataset, fmt: str, path) -> Path:
    """Write a dataset as CSV (columns c,p,series) or JSON with metadata.

    Floats are written with shortest round-trip formatting and LF line
    endings, so re-emitting an unchanged dataset is byte-identical.
    """
    path = Path(path)
    if fmt == "csv":
        lines = ["c,p,series"]
        for series in dataset.series:
            for c, p in zip(series.c, series.p):
                lines.append(f"{int(c)},{float(p)!r},{series.name}")
        _write_text(path, "\n".join(lines) + "\n")
    elif fmt == "json":
        doc = {
            "metadata": dataset.metadata,
            "columns": ["c", "p", "series"],
            "series": [
                {
                    "name": s.name,
                    "subfigure": s.subfigure,
                    "c": [int(v) for v in s.c],
                    "p": [float(v) for v in s.p],
                }
                for s in dataset.series
            ],
        }
        _write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown dataset format {fmt!r}; expected 'csv' or 'json'")
    return path


def parse_dataset(path, fmt: str) -> Dataset:
    """Read back a dataset written by emit_dataset (values bit-exact)."""
    path = Path(path)
    if fmt == "csv":
        lines = path.read_text(encoding="utf-8").splitlines()
        if not lines or lines[0] != "c,p,series":
            raise ValueError(f"{path} is not a dataset CSV (bad header)")
        groups: dict[str, tuple[list[int], list[float]]] = {}
        order: list[str] = []
        for line in lines[1:]:
            c_str, p_str, name = line.split(",", 2)
            if name not in groups:
                groups[name] = ([], [])
                order.append(name)
            groups[name][0].append(int(c_str))
            groups[name][1].append(float(p_str))
        series = [
            Series(name, 0, np.array(groups[name][0]), np.array(groups[name][1]))
            for name in order
        ]
        return Dataset(series, {})
    if fmt == "json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        series = [
            Series(s["name"], s["subfigure"], np.array(s["c"]), np.array(s["p"]))
            for s in doc["series"]
        ]
        return Dataset(series, doc.get("metadata", {}))
    raise ValueError(f"unknown dataset format {fmt!r}; expected 'csv' or 'json'")


def emit_svg(dataset: Dataset, path, options: dict | None = None) -> Path:
    """Render the dataset to a static SVG, one panel per subfigure."""
    from .plotting import render_dataset_svg

    return render_dataset_svg(dataset, path, options or {})


def threshold_to_rows(report: ThresholdReport) -> list[tuple]:
    rows = [("magnitude", "success", "ci_low", "ci_high", "successes", "trials")]
    for g, est in zip(report.grid, report.estimates):
        rows.append(
            (repr(g), repr(est.probability), repr(est.ci_low), repr(est.ci_high),
             est.successes, est.trials)
        )
    return rows


def emit_threshold(report: ThresholdReport, fmt: str, path) -> Path:
    """Write a threshold curve as CSV or JSON (deterministic bytes)."""
    path = Path(path)
    if fmt == "csv":
        lines = [",".join(str(v) for v in row) for row in threshold_to_rows(report)]
        _write_text(path, "\n".join(lines) + "\n")
    elif fmt == "json":
        doc = {
            "metadata": {
                "tool": "shornoise",
                "version": __version__,
                "N": report.N,
                "y": report.y,
                "mode": report.mode.value,
                "target": report.target,
                "threshold": report.threshold,
            },
            "points": [
                {
                    "magnitude": g,
                    "success": est.probability,
                    "ci_low": est.ci_low,
                    "ci_high": est.ci_high,
                    "successes": est.successes,
                    "trials": est.trials,
                }
                for g, est in zip(report.grid, report.estimates)
            ],
        }
        _write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown threshold format {fmt!r}; expected 'csv' or 'json'")
    return path


def _write_text(path: Path, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"failed to write {path}: {exc}") from exc
