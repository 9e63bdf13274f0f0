"""Figure builders and deterministic image output.

Each builder takes already-loaded inputs and returns a matplotlib
Figure; :func:`render_figure` maps a figure-kind name onto the right
loader + builder, and :func:`save_figure` writes PNG or SVG with all
run-dependent metadata pinned so reruns are byte-identical.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import PlotInputError, SffTable, load_json_payload, load_sff_csv

# Fixed salt so SVG element ids do not vary between processes.
matplotlib.rcParams["svg.hashsalt"] = "kickedmix-plots"

REFERENCE_STYLE = dict(color="0.4", linestyle=":", linewidth=1.0)
FIT_STYLE = dict(color="0.2", linestyle="--", linewidth=1.0)
_CYCLE = plt.rcParams["axes.prop_cycle"].by_key()["color"]


def _ramp_reference(ax, t_min: float, t_max: float) -> None:
    """The K = 2t linear-ramp guide line on a log-log SFF panel."""
    t = np.array([max(t_min, 1e-12), t_max])
    ax.plot(t, 2.0 * t, label="$2t$", **REFERENCE_STYLE)


def sff_panels(tables: Sequence[SffTable]) -> plt.Figure:
    """Four-panel SFF summary: raw, ramp-normalized, and collapsed axes.

    Every table needs the scaled columns; the runner adds them when a
    collapse is configured.
    """
    if not tables:
        raise PlotInputError("SffPanels needs at least one SFF series")
    for table in tables:
        if not table.has_collapse:
            raise PlotInputError(
                f"{table.label}: missing column 't_scaled' "
                "(rerun with a collapse configured)"
            )
    fig, axes = plt.subplots(2, 2, figsize=(8.0, 6.4))
    (ax_raw, ax_ratio), (ax_cross, ax_collapsed) = axes
    for k, table in enumerate(tables):
        color = _CYCLE[k % len(_CYCLE)]
        ax_raw.plot(table.t, table.K, color=color, label=table.label)
        ax_ratio.plot(table.t, table.K_over_2t, color=color, label=table.label)
        ax_cross.plot(table.t_scaled, table.K, color=color, label=table.label)
        ax_collapsed.plot(
            table.t_scaled, table.K_scaled, color=color, label=table.label
        )
    t_lo = min(float(t.t[0]) for t in tables)
    t_hi = max(float(t.t[-1]) for t in tables)
    s_lo = min(float(t.t_scaled[0]) for t in tables)
    s_hi = max(float(t.t_scaled[-1]) for t in tables)
    _ramp_reference(ax_raw, t_lo, t_hi)
    ax_ratio.axhline(1.0, label="ramp", **REFERENCE_STYLE)
    _ramp_reference(ax_collapsed, s_lo, s_hi)
    for ax in axes.flat:
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.legend(fontsize="small")
    ax_raw.set_xlabel("$t$")
    ax_raw.set_ylabel("$K(t)$")
    ax_ratio.set_xlabel("$t$")
    ax_ratio.set_ylabel("$K(t)/2t$")
    ax_cross.set_xlabel("$t/s(L)$")
    ax_cross.set_ylabel("$K(t)$")
    ax_collapsed.set_xlabel("$t/s(L)$")
    ax_collapsed.set_ylabel("$K(t)/s(L)$")
    fig.tight_layout()
    return fig


def exact_vs_rpa_overlay(tables: Sequence[SffTable]) -> plt.Figure:
    """Exact disorder-averaged SFF with analytic curves overlaid.

    The first series is drawn solid; the rest dashed.
    """
    if len(tables) < 2:
        raise PlotInputError("ExactVsRpaOverlay needs at least two SFF series")
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for k, table in enumerate(tables):
        ax.plot(
            table.t,
            table.K,
            color=_CYCLE[k % len(_CYCLE)],
            linestyle="-" if k == 0 else "--",
            label=table.label,
        )
    t_hi = max(float(t.t[-1]) for t in tables)
    t_lo = min(float(t.t[0]) for t in tables)
    _ramp_reference(ax, t_lo, t_hi)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("$t$")
    ax.set_ylabel("$K(t)$")
    ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def lambda1_vs_l(payloads: Sequence[dict]) -> plt.Figure:
    """Leading subunit map eigenvalue against a swept parameter.

    Accepts one or more JSON payloads with a ``points`` list of
    ``[x, lambda_1]`` pairs (the lambda-sweep runner output).
    """
    if not payloads:
        raise PlotInputError("Lambda1VsL needs at least one points payload")
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    for k, payload in enumerate(payloads):
        points = payload["points"]
        if not points:
            raise PlotInputError("payload has an empty 'points' list")
        x = np.array([p[0] for p in points], dtype=float)
        y = np.array([p[1] for p in points], dtype=float)
        label = payload.get("label", payload.get("map", f"series {k + 1}"))
        ax.plot(x, y, "o-", color=_CYCLE[k % len(_CYCLE)], label=str(label))
    ax.axhline(1.0, **REFERENCE_STYLE)
    ax.set_xlabel("sweep parameter")
    ax.set_ylabel(r"$\lambda_1$")
    ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def extrapolation_plot(payload: dict) -> plt.Figure:
    """Truncation sweep of lambda_1 against inverse cutoff with the
    fitted line and its zero-intercept (infinite-cutoff) estimate."""
    points = payload["points"]
    if not points:
        raise PlotInputError("payload has an empty 'points' list")
    n = np.array([p[0] for p in points], dtype=float)
    lam = np.array([p[1] for p in points], dtype=float)
    slope = float(payload["slope"])
    intercept = float(payload["intercept"])
    inv = 1.0 / n
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.plot(inv, lam, "o", color=_CYCLE[0], label=r"$\lambda_1(n_{\max})$")
    grid = np.linspace(0.0, float(inv.max()) * 1.05, 50)
    ax.plot(grid, intercept + slope * grid, label="linear fit", **FIT_STYLE)
    ax.plot([0.0], [intercept], "s", color=_CYCLE[1], label="extrapolated")
    ax.axhline(1.0, **REFERENCE_STYLE)
    ax.set_xlabel(r"$1/n_{\max}$")
    ax.set_ylabel(r"$\lambda_1$")
    ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def render_figure(kind: str, inputs: Sequence[Path]) -> plt.Figure:
    """Load the inputs appropriate for ``kind`` and build the figure."""
    if kind == "SffPanels":
        return sff_panels([load_sff_csv(p) for p in inputs])
    if kind == "ExactVsRpaOverlay":
        return exact_vs_rpa_overlay([load_sff_csv(p) for p in inputs])
    if kind == "Lambda1VsL":
        return lambda1_vs_l(
            [load_json_payload(p, required_keys=("points",)) for p in inputs]
        )
    if kind == "ExtrapolationPlot":
        if len(inputs) != 1:
            raise PlotInputError("ExtrapolationPlot takes exactly one input")
        return extrapolation_plot(
            load_json_payload(
                inputs[0], required_keys=("points", "slope", "intercept")
            )
        )
    raise PlotInputError(f"unknown figure kind {kind!r}")


FIGURE_KINDS = (
    "SffPanels",
    "ExactVsRpaOverlay",
    "Lambda1VsL",
    "ExtrapolationPlot",
)

# Creation dates and library version strings would otherwise leak into
# the image bytes and break reproducibility.
_PINNED_METADATA = {
    ".png": {"Software": "kickedmix-plots"},
    ".svg": {"Date": None, "Creator": "kickedmix-plots"},
}


def save_figure(fig: plt.Figure, out: Path) -> Path:
    """Write the figure as PNG or SVG with deterministic bytes."""
    suffix = out.suffix.lower()
    if suffix not in _PINNED_METADATA:
        raise PlotInputError(
            f"unsupported output format {suffix!r} (use .png or .svg)"
        )
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150, metadata=_PINNED_METADATA[suffix])
    plt.close(fig)
    return out
