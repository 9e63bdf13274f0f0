"""Figure rendering for kickedmix experiment outputs.

Consumes the CSV series and JSON payloads written by the ``kickedmix``
command line runner and renders publication-style figures.  Rendering is
deterministic: the same inputs produce byte-identical PNG and SVG files.
"""

from .io import PlotInputError, SffTable, load_json_payload, load_sff_csv
from .render import (
    FIGURE_KINDS,
    exact_vs_rpa_overlay,
    extrapolation_plot,
    lambda1_vs_l,
    render_figure,
    save_figure,
    sff_panels,
)

__all__ = [
    "PlotInputError",
    "SffTable",
    "load_json_payload",
    "load_sff_csv",
    "FIGURE_KINDS",
    "sff_panels",
    "exact_vs_rpa_overlay",
    "lambda1_vs_l",
    "extrapolation_plot",
    "render_figure",
    "save_figure",
]

__version__ = "0.1.0"
