"""Render experiment CSVs into figures plus a serializable plot-data layer.

Each figure id declares its input column schema; a violation raises
SchemaError naming the offending column.  render() returns the plot spec
(a plain dict of the plotted arrays and scales) so callers and tests can
verify the data layer independently of image bytes.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["SchemaError", "FigureSpec", "render", "FIGURE_IDS"]

GAP_SCAN_COLUMNS = ("s", "gap", "order_param", "flag_degenerate")
SCALING_COLUMNS = ("L", "delta_min")
ENUMERATION_COLUMNS = ("m", "config_index", "delta_min")
ENSEMBLE_COLUMNS = ("delta", "delta_c1", "delta_c2", "delta_0")

FIGURE_SCHEMAS: dict[str, tuple[str, ...]] = {
    "fig2": GAP_SCAN_COLUMNS,
    "fig3": SCALING_COLUMNS,
    "fig4": ENUMERATION_COLUMNS,
    "fig5": GAP_SCAN_COLUMNS,
    "fig6": SCALING_COLUMNS,
    "fig8": GAP_SCAN_COLUMNS,
    "appB": GAP_SCAN_COLUMNS,
    "appC": ENSEMBLE_COLUMNS,
}
FIGURE_IDS = tuple(FIGURE_SCHEMAS)


class SchemaError(ValueError):
    """Input CSV does not match the figure's declared column schema."""


@dataclass(frozen=True)
class FigureSpec:
    """A render request: figure id, input CSVs, output image, options."""

    figure: str
    inputs: tuple[str, ...]
    output: str
    log_gap: bool = True

    def __post_init__(self):
        if self.figure not in FIGURE_SCHEMAS:
            raise SchemaError(
                f"unknown figure id {self.figure!r}; known: {sorted(FIGURE_SCHEMAS)}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")


def _read_csv(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    rows = []
    footers: dict[str, float] = {}
    with open(path, newline="") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                try:
                    footers[key] = float(value)
                except ValueError:
                    pass
                continue
            rows.append(line)
    if not rows:
        raise SchemaError(f"{path}: empty file, missing column {required[0]!r}")
    header = next(csv.reader([rows[0]]))
    for column in required:
        if column not in header:
            raise SchemaError(f"{path}: missing column {column!r}")
    data: dict[str, list[float]] = {name: [] for name in header}
    for row in csv.reader(rows[1:]):
        if len(row) != len(header):
            raise SchemaError(f"{path}: row width {len(row)} != header {len(header)}")
        for name, value in zip(header, row):
            try:
                data[name].append(float(value))
            except ValueError as exc:
                raise SchemaError(f"{path}: non-numeric value in column {name!r}") from exc
    out = {name: np.asarray(values) for name, values in data.items()}
    out["__footers__"] = footers  # type: ignore[assignment]
    return out


def _series_label(path: str) -> str:
    return Path(path).stem


def _gap_scan_spec(spec: FigureSpec) -> dict:
    axes = [
        {"x_label": "s", "y_label": "gap",
         "x_scale": "linear", "y_scale": "log" if spec.log_gap else "linear",
         "series": []},
        {"x_label": "s", "y_label": "order parameter",
         "x_scale": "linear", "y_scale": "linear", "series": []},
    ]
    for path in spec.inputs:
        data = _read_csv(path, GAP_SCAN_COLUMNS)
        label = _series_label(path)
        axes[0]["series"].append({
            "label": label, "kind": "line",
            "x": data["s"].tolist(), "y": data["gap"].tolist(),
        })
        axes[1]["series"].append({
            "label": label, "kind": "line",
            "x": data["s"].tolist(), "y": data["order_param"].tolist(),
        })
    return {"figure": spec.figure, "axes": axes}


def _scaling_spec(spec: FigureSpec) -> dict:
    axis = {"x_label": "L", "y_label": "minimum gap",
            "x_scale": "linear", "y_scale": "log", "series": []}
    for path in spec.inputs:
        data = _read_csv(path, SCALING_COLUMNS)
        label = _series_label(path)
        axis["series"].append({
            "label": label, "kind": "scatter",
            "x": data["L"].tolist(), "y": data["delta_min"].tolist(),
        })
        footers = data["__footers__"]
        if "A" in footers and "b" in footers:
            sizes = np.linspace(min(data["L"]), max(data["L"]), 50)
            fit = footers["A"] * np.exp(-footers["b"] * sizes)
            axis["series"].append({
                "label": f"{label} fit b={footers['b']:.3g}", "kind": "dashed",
                "x": sizes.tolist(), "y": fit.tolist(),
            })
    return {"figure": spec.figure, "axes": [axis]}


def _density_colors(x: np.ndarray, y: np.ndarray, bins: int = 40) -> list[float]:
    """Per-point local density from a 2D histogram (for scatter coloring)."""
    if len(x) == 0:
        return []
    safe_y = np.log10(np.maximum(y, 1e-300))
    hist, x_edges, y_edges = np.histogram2d(x, safe_y, bins=bins)
    xi = np.clip(np.searchsorted(x_edges, x, side="right") - 1, 0, bins - 1)
    yi = np.clip(np.searchsorted(y_edges, safe_y, side="right") - 1, 0, bins - 1)
    return hist[xi, yi].tolist()


def _enumeration_spec(spec: FigureSpec) -> dict:
    axes = []
    for path in spec.inputs:
        data = _read_csv(path, ENUMERATION_COLUMNS)
        axes.append({
            "x_label": "m", "y_label": "minimum gap",
            "x_scale": "linear", "y_scale": "log",
            "series": [{
                "label": _series_label(path), "kind": "scatter",
                "x": data["m"].tolist(), "y": data["delta_min"].tolist(),
                "color": _density_colors(data["m"], data["delta_min"]),
            }],
        })
    return {"figure": spec.figure, "axes": axes}


def _ensemble_spec(spec: FigureSpec) -> dict:
    axes = []
    for path in spec.inputs:
        data = _read_csv(path, ENSEMBLE_COLUMNS)
        label = _series_label(path)
        base = data["delta"] / data["delta_0"]
        c1 = data["delta_c1"] / data["delta_0"]
        c2 = data["delta_c2"] / data["delta_0"]
        for x, y, panel in ((base, c1, "xx vs none"),
                            (base, c2, "xxx vs none"),
                            (c1, c2, "xxx vs xx")):
            lo = float(min(np.min(x), np.min(y)))
            hi = float(max(np.max(x), np.max(y)))
            axes.append({
                "x_label": panel.split(" vs ")[1], "y_label": panel.split(" vs ")[0],
                "x_scale": "log", "y_scale": "log",
                "series": [
                    {"label": f"{label} {panel}", "kind": "scatter",
                     "x": x.tolist(), "y": y.tolist()},
                    {"label": "slope 1", "kind": "dashed",
                     "x": [lo, hi], "y": [lo, hi]},
                ],
            })
    return {"figure": spec.figure, "axes": axes}


_BUILDERS = {
    "fig2": _gap_scan_spec,
    "fig5": _gap_scan_spec,
    "fig8": _gap_scan_spec,
    "appB": _gap_scan_spec,
    "fig3": _scaling_spec,
    "fig6": _scaling_spec,
    "fig4": _enumeration_spec,
    "appC": _ensemble_spec,
}


def _draw(plot_spec: dict, output: str) -> None:
    axes_specs = plot_spec["axes"]
    n_axes = len(axes_specs)
    cols = min(n_axes, 3)
    rows = math.ceil(n_axes / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(5.0 * cols, 4.0 * rows),
                             squeeze=False)
    for index, axis_spec in enumerate(axes_specs):
        ax = axes[index // cols][index % cols]
        for series in axis_spec["series"]:
            kind = series["kind"]
            if kind == "line":
                ax.plot(series["x"], series["y"], label=series["label"])
            elif kind == "dashed":
                ax.plot(series["x"], series["y"], "--", color="black",
                        label=series["label"])
            else:
                color = series.get("color")
                if color:
                    ax.scatter(series["x"], series["y"], c=color, cmap="hot_r",
                               s=12, label=series["label"])
                else:
                    ax.scatter(series["x"], series["y"], s=12,
                               label=series["label"])
        ax.set_xlabel(axis_spec["x_label"])
        ax.set_ylabel(axis_spec["y_label"])
        ax.set_xscale(axis_spec["x_scale"])
        ax.set_yscale(axis_spec["y_scale"])
        ax.legend(fontsize=7)
    for index in range(n_axes, rows * cols):
        axes[index // cols][index % cols].axis("off")
    fig.tight_layout()
    fig.savefig(output, dpi=150)
    plt.close(fig)


def render(spec: FigureSpec) -> dict:
    """Validate inputs, write the image, and return the plot-data layer."""
    plot_spec = _BUILDERS[spec.figure](spec)
    _draw(plot_spec, spec.output)
    return plot_spec
