"""Readers for the files emitted by the kickedmix experiment runner.

Two formats appear there: CSV spectral-form-factor series with header
``t,K,K_over_2t[,t_scaled,K_scaled]``, and JSON payloads (spectra,
lambda-1 sweeps, extrapolations).  Every loader raises
:class:`PlotInputError` with a message naming the offending path and,
where applicable, the missing column or key.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np

REQUIRED_SFF_COLUMNS = ("t", "K", "K_over_2t")
SCALED_SFF_COLUMNS = ("t_scaled", "K_scaled")


class PlotInputError(ValueError):
    """An input file is missing, malformed, or lacks a required field."""


@dataclass(frozen=True)
class SffTable:
    """One spectral-form-factor series read from a runner CSV."""

    label: str
    t: np.ndarray
    K: np.ndarray
    K_over_2t: np.ndarray
    t_scaled: Optional[np.ndarray] = None
    K_scaled: Optional[np.ndarray] = None

    @property
    def has_collapse(self) -> bool:
        return self.t_scaled is not None and self.K_scaled is not None


def _require_exists(path: Path) -> None:
    if not path.is_file():
        raise PlotInputError(f"input file not found: {path}")


def load_sff_csv(path: Path) -> SffTable:
    """Read one SFF series, validating the header columns."""
    _require_exists(path)
    with path.open(newline="") as handle:
        reader = csv.DictReader(handle)
        columns = reader.fieldnames or []
        for name in REQUIRED_SFF_COLUMNS:
            if name not in columns:
                raise PlotInputError(f"{path}: missing column {name!r}")
        rows = list(reader)
    if not rows:
        raise PlotInputError(f"{path}: no data rows")
    try:
        data = {
            name: np.array([float(row[name]) for row in rows])
            for name in columns
        }
    except (TypeError, ValueError) as exc:
        raise PlotInputError(f"{path}: non-numeric value ({exc})") from exc
    scaled = {}
    if all(name in columns for name in SCALED_SFF_COLUMNS):
        scaled = {name: data[name] for name in SCALED_SFF_COLUMNS}
    return SffTable(
        label=path.stem,
        t=data["t"],
        K=data["K"],
        K_over_2t=data["K_over_2t"],
        **scaled,
    )


def load_json_payload(path: Path, required_keys: Sequence[str]) -> Dict[str, Any]:
    """Read a runner JSON payload, validating the required top-level keys."""
    _require_exists(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PlotInputError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise PlotInputError(f"{path}: expected a JSON object")
    for key in required_keys:
        if key not in payload:
            raise PlotInputError(f"{path}: missing key {key!r}")
    return payload
