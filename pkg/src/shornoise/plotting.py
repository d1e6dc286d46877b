"""Deterministic matplotlib rendering of figure datasets to static SVG files.

Rendering is byte-reproducible: the SVG hash salt is pinned, glyphs are kept
as text instead of embedded paths, and the creation date is stripped from
the metadata, so equal datasets produce identical files.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_RC = {
    "svg.hashsalt": "shornoise",
    "svg.fonttype": "none",
    "figure.dpi": 100,
}

_SERIES_COLORS = ("tab:blue", "tab:red", "tab:green", "tab:purple", "tab:orange")


def render_dataset_svg(dataset, path, options: dict | None = None) -> Path:
    """Draw one panel per subfigure as a stem (or line) chart of p against c."""
    options = options or {}
    kind = options.get("kind", "stem")
    title = options.get("title", _default_title(dataset.metadata))

    panels = sorted({s.subfigure for s in dataset.series}) or [1]
    ncols = min(2, len(panels))
    nrows = math.ceil(len(panels) / ncols)

    path = Path(path)
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(
            nrows, ncols, figsize=(5.0 * ncols, 3.2 * nrows), squeeze=False
        )
        axis_of = {panel: axes[i // ncols][i % ncols] for i, panel in enumerate(panels)}
        for i in range(len(panels), nrows * ncols):
            axes[i // ncols][i % ncols].set_axis_off()

        for series in dataset.series:
            ax = axis_of.get(series.subfigure, axes[0][0])
            color = _SERIES_COLORS[_panel_series_index(dataset, series) % len(_SERIES_COLORS)]
            if kind == "line" or len(series.c) == 0:
                ax.plot(series.c, series.p, lw=0.9, color=color, label=series.name)
            else:
                ax.vlines(series.c, 0.0, series.p, lw=0.9, color=color)
                ax.plot(series.c, series.p, ".", ms=2.5, color=color, label=series.name)

        for panel in panels:
            ax = axis_of[panel]
            ax.set_xlabel("c")
            ax.set_ylabel("P_c")
            ax.margins(x=0.02)
            ax.set_ylim(bottom=0.0)
            if any(s.subfigure == panel for s in dataset.series):
                ax.legend(fontsize=7, loc="upper right")
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OSError(f"failed to write {path}: {exc}") from exc
        finally:
            plt.close(fig)
    return path


def _panel_series_index(dataset, series) -> int:
    """Position of the series within its own panel (for stable coloring)."""
    index = 0
    for other in dataset.series:
        if other is series:
            break
        if other.subfigure == series.subfigure:
            index += 1
    return index


def _default_title(metadata: dict) -> str:
    figure = metadata.get("figure")
    if figure is None:
        return ""
    parts = [f"figure {figure}"]
    if "q" in metadata and "r" in metadata:
        parts.append(f"q={metadata['q']}, r={metadata['r']}")
    return "  ".join(parts)
