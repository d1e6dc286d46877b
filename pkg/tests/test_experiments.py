"""Figure datasets, peak reports, threshold sweeps, and file emission."""

import numpy as np
import pytest

from shornoise.core import Distribution, RngStream
from shornoise.experiments import (
    Dataset,
    FigureSpec,
    Series,
    detect_peaks,
    draw_index_errors,
    emit_dataset,
    emit_svg,
    emit_threshold,
    ideal_peak_positions,
    parse_dataset,
    run_figure,
    threshold_sweep,
)
from shornoise.formulas import PeriodicStateSpec, double_sum_distribution, systematic_distribution
from shornoise.gates import ErrorMode, ErrorModel
from shornoise.shor import ShorInstance

SPEC128 = PeriodicStateSpec(128, 4, 0)


def test_figure1_exactly_four_nonzero_points():
    dataset = run_figure(FigureSpec(figure=1))
    assert len(dataset.series) == 1
    series = dataset.series[0]
    assert len(series.c) == 128
    nonzero = np.flatnonzero(series.p)
    np.testing.assert_array_equal(nonzero, [0, 32, 64, 96])
    np.testing.assert_allclose(series.p[nonzero], 0.25, atol=1e-10)


def test_figure2_series_layout_and_peak():
    dataset = run_figure(FigureSpec(figure=2))
    names = [s.name for s in dataset.series]
    assert names == [
        "delta0=0.02", "delta0=0.03", "delta0=0.05", "delta0=0.1", "delta0=0.33",
    ]
    assert [s.subfigure for s in dataset.series] == [1, 2, 3, 4, 4]
    mid = dataset.series[2].p
    window = mid[120:128]
    assert np.argmax(window) + 120 == 127


def test_figure3_reproducible_and_seed_sensitive():
    a = run_figure(FigureSpec(figure=3, seed=5))
    b = run_figure(FigureSpec(figure=3, seed=5))
    c = run_figure(FigureSpec(figure=3, seed=6))
    assert [s.name for s in a.series] == ["smax=0.01", "smax=0.03", "smax=0.05", "smax=0.1"]
    for sa, sb in zip(a.series, b.series):
        np.testing.assert_array_equal(sa.p, sb.p)
    assert any(not np.array_equal(sa.p, sc.p) for sa, sc in zip(a.series, c.series))


def test_figure4_combined_mode_and_metadata_note():
    dataset = run_figure(FigureSpec(figure=4, seed=1))
    names = [s.name for s in dataset.series]
    assert names[-1] == "delta0=0.33 sigma0=0.02"
    assert "sigma0" in dataset.metadata["note"]
    assert dataset.metadata["relative_probabilities"] is True
    assert dataset.metadata["series"][names[0]]["mode"] == "em2g"


def test_figure4_combined_panel_frozen_regression():
    # seed-0 values locked from the first verified run: the 0.33 constant
    # offset translates the peaks (multiples of 32 minus ~6.7) and the 0.02
    # Gaussian width jitters them
    dataset = run_figure(FigureSpec(figure=4, seed=0))
    panel = dataset.series[-1]
    assert panel.subfigure == 4
    assert int(panel.p.argmax()) == 121
    assert panel.p.max() == pytest.approx(0.08587773556154876, abs=1e-12)
    assert panel.p.sum() == pytest.approx(1.0, abs=1e-9)


def test_figure_trials_multiply_random_series_only():
    dataset = run_figure(FigureSpec(figure=3, trials=3, seed=2))
    assert len(dataset.series) == 12
    assert dataset.series[0].name == "smax=0.01#0"
    fixed = run_figure(FigureSpec(figure=2, trials=3, seed=2))
    assert len(fixed.series) == 5  # constant-offset curves are deterministic


def test_figure_gate_level_zero_error_matches_model():
    model_ds = run_figure(FigureSpec(figure=1))
    gate_ds = run_figure(FigureSpec(figure=1, gate_level=True))
    np.testing.assert_allclose(
        gate_ds.series[0].p, model_ds.series[0].p, atol=1e-10
    )


def test_figure_spec_validation():
    with pytest.raises(ValueError):
        FigureSpec(figure=5)
    with pytest.raises(ValueError):
        FigureSpec(figure=1, trials=0)


def test_detect_peaks_ideal():
    zeros = np.zeros(SPEC128.term_count)
    probs = double_sum_distribution(SPEC128, zeros, zeros)
    report = detect_peaks(Distribution(probs, relative=True), SPEC128)
    assert {c for c, _ in report.peaks} == {0, 32, 64, 96}
    heights = [h for _, h in report.peaks]
    assert heights == sorted(heights, reverse=True)
    assert report.max_shift == 0
    assert report.signed_shifts == (0, 0, 0, 0)
    assert report.distortion == pytest.approx(0.0, abs=1e-12)
    assert report.ideal_positions == (0, 32, 64, 96)


def test_detect_peaks_systematic_offset_translates():
    probs = systematic_distribution(SPEC128, 0.05)
    report = detect_peaks(Distribution(probs, relative=True), SPEC128)
    assert report.max_shift == 1
    assert report.signed_shifts == (-1, -1, -1, -1)
    assert report.peaks[0][0] in (31, 63, 95, 127)
    assert report.distortion > 0.9


def test_detect_peaks_random_errors_keep_median_position():
    # regression-locked medians over 100 seeds at half-width 0.05: random
    # jitter scatters the peaks symmetrically (median signed shift 0) while
    # distorting the shape
    model = ErrorModel(ErrorMode.EM2_UNIFORM, s_max=0.05)
    zeros = np.zeros(SPEC128.term_count)
    pooled, distortions = [], []
    for seed in range(100):
        phases = draw_index_errors(model, SPEC128.term_count, RngStream(1234, seed))
        probs = double_sum_distribution(SPEC128, zeros, phases)
        report = detect_peaks(Distribution(probs, relative=True), SPEC128)
        distortions.append(report.distortion)
        if report.signed_shifts is not None:
            pooled.extend(report.signed_shifts)
    assert np.median(pooled) == 0.0
    median_distortion = float(np.median(distortions))
    assert median_distortion > 0.0
    assert median_distortion == pytest.approx(0.9203, abs=0.02)


def test_detect_peaks_rejects_mismatched_sizes():
    with pytest.raises(ValueError):
        detect_peaks(Distribution(np.ones(64) / 64), SPEC128)


def test_ideal_peak_positions_non_divisible_period():
    spec = PeriodicStateSpec(16, 5, 0)
    assert ideal_peak_positions(spec) == (0, 3, 6, 10, 13)


def test_threshold_sweep_none_mode():
    instance = ShorInstance.create(15, 7)
    report = threshold_sweep(
        instance, ErrorMode.NONE, [0.01, 0.05, 0.1], trials=300, seed=4
    )
    assert report.threshold == 0.1  # every point meets the target
    for est in report.estimates:
        assert est.ci_low <= 0.5 <= est.ci_high


def test_threshold_sweep_grid_validation():
    instance = ShorInstance.create(15, 7)
    with pytest.raises(ValueError):
        threshold_sweep(instance, ErrorMode.EM1, [], trials=10)
    with pytest.raises(ValueError):
        threshold_sweep(instance, ErrorMode.EM1, [0.1, 0.05], trials=10)


def test_threshold_sweep_reports_none_when_target_unreachable():
    instance = ShorInstance.create(15, 7)
    report = threshold_sweep(
        instance, ErrorMode.EM1, [0.01, 0.02], trials=20, target=1.01, seed=0
    )
    assert report.threshold is None


def test_emit_parse_csv_round_trip(tmp_path):
    dataset = run_figure(FigureSpec(figure=2))
    path = emit_dataset(dataset, "csv", tmp_path / "fig2.csv")
    back = parse_dataset(path, "csv")
    assert len(back.series) == len(dataset.series)
    for original, parsed in zip(dataset.series, back.series):
        assert parsed.name == original.name
        np.testing.assert_array_equal(parsed.c, original.c)
        np.testing.assert_array_equal(parsed.p, original.p)  # bit-exact floats
    text = path.read_text()
    assert text.startswith("c,p,series\n")
    assert "\r" not in text


def test_emit_parse_json_round_trip(tmp_path):
    dataset = run_figure(FigureSpec(figure=3, seed=7))
    path = emit_dataset(dataset, "json", tmp_path / "fig3.json")
    back = parse_dataset(path, "json")
    assert back.metadata["seed"] == 7
    assert back.metadata["series"]["smax=0.01"]["stream_id"] == 0
    for original, parsed in zip(dataset.series, back.series):
        assert parsed == original


def test_emit_dataset_rejects_unknown_format(tmp_path):
    dataset = run_figure(FigureSpec(figure=1))
    with pytest.raises(ValueError):
        emit_dataset(dataset, "xml", tmp_path / "fig.xml")


def test_emit_dataset_row_count(tmp_path):
    dataset = run_figure(FigureSpec(figure=1))
    path = emit_dataset(dataset, "csv", tmp_path / "fig1.csv")
    lines = path.read_text().splitlines()
    assert len(lines) == 1 + 128  # header + one row per c per series


def test_emit_svg_deterministic(tmp_path):
    dataset = run_figure(FigureSpec(figure=2))
    a = emit_svg(dataset, tmp_path / "a.svg")
    b = emit_svg(dataset, tmp_path / "b.svg")
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().startswith(b"<?xml")


def test_emit_svg_empty_dataset(tmp_path):
    path = emit_svg(Dataset([], {}), tmp_path / "empty.svg")
    content = path.read_text()
    assert content.startswith("<?xml")
    assert "</svg>" in content


def test_emit_threshold_formats(tmp_path):
    instance = ShorInstance.create(15, 7)
    report = threshold_sweep(instance, ErrorMode.NONE, [0.01, 0.1], trials=20, seed=0)
    csv_path = emit_threshold(report, "csv", tmp_path / "thr.csv")
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "magnitude,success,ci_low,ci_high,successes,trials"
    assert len(lines) == 3
    json_path = emit_threshold(report, "json", tmp_path / "thr.json")
    import json

    doc = json.loads(json_path.read_text())
    assert doc["metadata"]["mode"] == "none"
    assert len(doc["points"]) == 2
    with pytest.raises(ValueError):
        emit_threshold(report, "yaml", tmp_path / "thr.yaml")


def test_series_equality_semantics():
    a = Series("x", 1, np.array([0, 1]), np.array([0.5, 0.5]))
    b = Series("x", 1, np.array([0, 1]), np.array([0.5, 0.5]))
    c = Series("x", 1, np.array([0, 1]), np.array([0.5, 0.4]))
    assert a == b
    assert a != c
