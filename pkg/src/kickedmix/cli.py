"""Configuration-driven experiment runner.

Reads a single JSON config, dispatches to the physics modules, and emits
CSV series / JSON arrays plus a manifest with checksums.  All floating
point output uses 17 significant digits so identical configs reproduce
byte-identical files.
"""

from __future__ import annotations

import argparse
import enum
import hashlib
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import analytic
from .basis import (
    DimensionCapError,
    Mixing,
    Parity,
    SectorSpec,
    Species,
    enumerate_sector,
)
from .model import ModelParams
from .sff import SpectralSeries, compute_exact_sff, default_t_grid
from .stochastic import (
    full_map_spectrum,
    map_spectrum,
    rpa_sff,
    lambda1_across_N,
    symmetry_report,
    trotter_generating_map,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_NUMERICAL = 4

FLOAT_FMT = "{:.17g}"


class Experiment(str, enum.Enum):
    SFF_EXACT = "SffExact"
    SFF_RPA = "SffRpa"
    SPECTRUM = "Spectrum"
    LAMBDA_ACROSS_N = "LambdaAcrossN"
    THOULESS = "Thouless"
    BOUND_STATE = "BoundState"
    EXTRAPOLATE = "Extrapolate"
    SYMMETRY_CHECK = "SymmetryCheck"


class ConfigError(ValueError):
    """Invalid configuration; message lists every offending field."""


class BudgetError(RuntimeError):
    """Requested computation exceeds the configured memory/size budget."""


class NumericalError(RuntimeError):
    """A numerical invariant failed during the run."""


@dataclass(frozen=True)
class Collapse:
    kind: str  # "log_l" | "power"
    gamma: Optional[float] = None

    def scale(self, L: int) -> float:
        if self.kind == "log_l":
            return math.log(L)
        return float(L) ** float(self.gamma)


@dataclass(frozen=True)
class RunConfig:
    experiment: Experiment
    params: ModelParams
    out_dir: Path
    seed: int = 0
    realizations: int = 1
    t_max: Optional[int] = None
    map_kind: str = "full"  # "full" | "trotter"
    sweep: Tuple[Dict[str, Any], ...] = ()
    collapse: Optional[Collapse] = None
    thouless_method: analytic.ThoulessMethod = analytic.ThoulessMethod.FROM_SFF_CURVE
    N_values: Optional[Tuple[int, ...]] = None
    n_max_sweep: Optional[Tuple[int, ...]] = None
    include_second_order: bool = False
    chain_length: int = 400
    memory_cap: int = 200_000
    cache_dir: Optional[Path] = None
    threads: int = 1

    def sectors(self) -> List[SectorSpec]:
        """The base sector, or the sweep entries applied as overrides."""
        if not self.sweep:
            return [self.params.spec]
        return [replace(self.params.spec, **entry) for entry in self.sweep]

    def to_dict(self) -> Dict[str, Any]:
        spec = self.params.spec
        model = {
            "species": spec.species.value,
            "mixing": spec.mixing.value,
            "L": spec.L,
            "N": spec.N,
            "parity": spec.parity.value if spec.parity else None,
            "n_max": spec.n_max,
            "nb_max": spec.nb_max,
            "g": self.params.g,
            "J": self.params.J,
            "U0": self.params.U0,
            "alpha": self.params.alpha,
            "omega_mean": self.params.omega_mean,
            "omega_std": self.params.omega_std,
            "Omega_mean": self.params.Omega_mean,
            "Omega_std": self.params.Omega_std,
            "ring_distance": self.params.ring_distance,
        }
        collapse = None
        if self.collapse is not None:
            collapse = {"kind": self.collapse.kind}
            if self.collapse.gamma is not None:
                collapse["gamma"] = self.collapse.gamma
        return {
            "experiment": self.experiment.value,
            "model": model,
            "seed": self.seed,
            "realizations": self.realizations,
            "t_max": self.t_max,
            "map": self.map_kind,
            "sweep": [dict(e) for e in self.sweep],
            "collapse": collapse,
            "thouless_method": self.thouless_method.value,
            "N_values": list(self.N_values) if self.N_values else None,
            "n_max_sweep": list(self.n_max_sweep) if self.n_max_sweep else None,
            "include_second_order": self.include_second_order,
            "chain_length": self.chain_length,
            "memory_cap": self.memory_cap,
        }


def _parse_model(model: Dict[str, Any], seed: int, errors: List[str]) -> Optional[ModelParams]:
    try:
        species = Species(model.get("species", "fermion"))
    except ValueError:
        errors.append(f"model.species: unknown value {model.get('species')!r}")
        return None
    try:
        mixing = Mixing(model.get("mixing", "jc"))
    except ValueError:
        errors.append(f"model.mixing: unknown value {model.get('mixing')!r}")
        return None
    parity = model.get("parity")
    if parity is not None:
        try:
            parity = Parity(parity)
        except ValueError:
            errors.append(f"model.parity: unknown value {parity!r}")
            return None
    if "L" not in model:
        errors.append("model.L: required")
        return None
    try:
        spec = SectorSpec(
            species=species,
            mixing=mixing,
            L=int(model["L"]),
            N=model.get("N"),
            parity=parity,
            n_max=model.get("n_max"),
            nb_max=model.get("nb_max"),
        )
        scalar = {
            k: model[k]
            for k in (
                "g", "J", "U0", "alpha",
                "omega_mean", "omega_std", "Omega_mean", "Omega_std",
                "ring_distance",
            )
            if k in model
        }
        return ModelParams(spec=spec, base_seed=seed, **scalar)
    except (ValueError, TypeError) as exc:
        errors.append(f"model: {exc}")
        return None


def parse_config(
    raw: Dict[str, Any],
    out_dir: Path,
    seed_override: Optional[int] = None,
    threads: int = 1,
) -> RunConfig:
    errors: List[str] = []
    exp_name = raw.get("experiment")
    experiment = None
    try:
        experiment = Experiment(exp_name)
    except ValueError:
        errors.append(f"experiment: unknown value {exp_name!r}")
    seed = int(seed_override if seed_override is not None else raw.get("seed", 0))
    params = None
    if not isinstance(raw.get("model"), dict):
        errors.append("model: required object")
    else:
        params = _parse_model(raw["model"], seed, errors)

    collapse = None
    raw_collapse = raw.get("collapse")
    if raw_collapse is not None:
        kind = raw_collapse.get("kind") if isinstance(raw_collapse, dict) else None
        if kind == "log_l":
            collapse = Collapse("log_l")
        elif kind == "power":
            gamma = raw_collapse.get("gamma")
            if gamma is None:
                errors.append("collapse.gamma: required for power collapse")
            else:
                collapse = Collapse("power", float(gamma))
        else:
            errors.append(f"collapse.kind: unknown value {kind!r}")

    method = analytic.ThoulessMethod.FROM_SFF_CURVE
    raw_method = raw.get("thouless_method")
    if raw_method is not None:
        try:
            method = analytic.ThoulessMethod(raw_method)
        except ValueError:
            errors.append(f"thouless_method: unknown value {raw_method!r}")

    realizations = int(raw.get("realizations", 1))
    if realizations < 1:
        errors.append("realizations: must be >= 1")
    map_kind = raw.get("map", "full")
    if map_kind not in ("full", "trotter"):
        errors.append(f"map: unknown value {map_kind!r}")
    sweep = raw.get("sweep", [])
    if not isinstance(sweep, list) or not all(isinstance(e, dict) for e in sweep):
        errors.append("sweep: must be a list of sector-override objects")
        sweep = []
    if experiment is Experiment.EXTRAPOLATE and not raw.get("n_max_sweep"):
        errors.append("n_max_sweep: required for Extrapolate")
    if experiment in (Experiment.SFF_EXACT,) and params is not None:
        if realizations < 1:
            errors.append("realizations: must be >= 1 for SffExact")

    if errors or params is None or experiment is None:
        raise ConfigError("; ".join(errors) if errors else "invalid config")

    cache_dir = raw.get("cache_dir")
    return RunConfig(
        experiment=experiment,
        params=params,
        out_dir=out_dir,
        seed=seed,
        realizations=realizations,
        t_max=raw.get("t_max"),
        map_kind=map_kind,
        sweep=tuple(dict(e) for e in sweep),
        collapse=collapse,
        thouless_method=method,
        N_values=tuple(int(n) for n in raw["N_values"]) if raw.get("N_values") else None,
        n_max_sweep=tuple(int(n) for n in raw["n_max_sweep"]) if raw.get("n_max_sweep") else None,
        include_second_order=bool(raw.get("include_second_order", False)),
        chain_length=int(raw.get("chain_length", 400)),
        memory_cap=int(raw.get("memory_cap", 200_000)),
        cache_dir=Path(cache_dir) if cache_dir else None,
        threads=threads,
    )


def emit_series(
    series: SpectralSeries,
    path: Path,
    collapse: Optional[Collapse] = None,
    L: Optional[int] = None,
) -> Path:
    """CSV with header t,K,K_over_2t[,t_scaled,K_scaled]."""
    if len(series.t_grid) == 0:
        raise ValueError("series is empty")
    header = "t,K,K_over_2t"
    scale = None
    if collapse is not None:
        if L is None:
            raise ValueError("collapse requires L")
        scale = collapse.scale(L)
        header += ",t_scaled,K_scaled"
    lines = [header]
    for t, K, ratio in zip(series.t_grid, series.K, series.K_over_2t):
        row = [str(int(t)), FLOAT_FMT.format(K), FLOAT_FMT.format(ratio)]
        if scale is not None:
            row.append(FLOAT_FMT.format(t / scale))
            row.append(FLOAT_FMT.format(K / scale))
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _write_json(payload: Any, path: Path) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _sector_params(config: RunConfig, spec: SectorSpec) -> ModelParams:
    return replace(config.params, spec=spec)


def _sector_spectrum(config: RunConfig, spec: SectorSpec):
    basis = enumerate_sector(spec, memory_cap=config.memory_cap)
    params = _sector_params(config, spec)
    if config.map_kind == "trotter":
        return basis, map_spectrum(trotter_generating_map(params, basis))
    cache = str(config.cache_dir) if config.cache_dir else None
    return basis, full_map_spectrum(params, basis, cache_dir=cache)


def _run_sff_exact(config: RunConfig, out: Path) -> List[Path]:
    files = []
    for spec in config.sectors():
        basis = enumerate_sector(spec, memory_cap=config.memory_cap)
        t_grid = default_t_grid(len(basis), t_max=config.t_max)
        series = compute_exact_sff(
            _sector_params(config, spec),
            t_grid,
            config.realizations,
            n_jobs=config.threads,
            basis=basis,
        )
        files.append(
            emit_series(
                series, out / f"sff_exact_L{spec.L}.csv", config.collapse, spec.L
            )
        )
    return files


def _run_sff_rpa(config: RunConfig, out: Path) -> List[Path]:
    files = []
    for spec in config.sectors():
        basis, spectrum = _sector_spectrum(config, spec)
        t_grid = default_t_grid(len(basis), t_max=config.t_max)
        series = rpa_sff(
            spectrum, t_grid, include_second_order=config.include_second_order
        )
        files.append(
            emit_series(
                series, out / f"sff_rpa_L{spec.L}.csv", config.collapse, spec.L
            )
        )
    return files


def _run_spectrum(config: RunConfig, out: Path) -> List[Path]:
    files = []
    for spec in config.sectors():
        _, spectrum = _sector_spectrum(config, spec)
        payload = {
            "L": spec.L,
            "map": config.map_kind,
            "eigenvalues": [float(v) for v in spectrum.eigenvalues],
        }
        files.append(_write_json(payload, out / f"spectrum_L{spec.L}.json"))
    return files


def _run_lambda_across_N(config: RunConfig, out: Path) -> List[Path]:
    pairs = lambda1_across_N(
        config.params,
        N_values=config.N_values,
        kind=config.map_kind,
        memory_cap=config.memory_cap,
    )
    payload = {"map": config.map_kind, "points": [[n, lam] for n, lam in pairs]}
    return [_write_json(payload, out / "lambda_across_N.json")]


def _run_thouless(config: RunConfig, out: Path) -> List[Path]:
    method = config.thouless_method
    points = []
    for spec in config.sectors():
        params = _sector_params(config, spec)
        if method is analytic.ThoulessMethod.FROM_DEGENERATE_SUM:
            est = analytic.thouless_from_degenerate_sum(spec.L, params.g, params.J)
        elif method is analytic.ThoulessMethod.FROM_LAMBDA1:
            _, spectrum = _sector_spectrum(config, spec)
            est = analytic.thouless_from_lambda1(spectrum.lambda1)
        else:
            basis, spectrum = _sector_spectrum(config, spec)
            t_grid = default_t_grid(len(basis), t_max=config.t_max)
            series = rpa_sff(spectrum, t_grid)
            est = analytic.thouless_from_sff_curve(series)
        points.append([spec.L, est.t_star])
    payload = {"method": method.value, "points": points}
    return [_write_json(payload, out / "thouless.json")]


def _run_bound_state(config: RunConfig, out: Path) -> List[Path]:
    g, J = config.params.g, config.params.J
    pair = analytic.dyson_bound_states(g, J)
    chain = analytic.impurity_chain_eigenvalues(g, J, config.chain_length)
    payload = {
        "g": g,
        "J": J,
        "E_b_plus": pair.E_b_plus,
        "E_b_minus": pair.E_b_minus,
        "chain_length": config.chain_length,
        "chain_top": float(chain[0]),
        "chain_bottom": float(chain[-1]),
    }
    return [_write_json(payload, out / "bound_state.json")]


def _run_extrapolate(config: RunConfig, out: Path) -> List[Path]:
    points = []
    for n_max in config.n_max_sweep:
        spec = replace(config.params.spec, n_max=int(n_max), nb_max=None)
        _, spectrum = _sector_spectrum(config, spec)
        points.append((int(n_max), spectrum.lambda1))
    result = analytic.extrapolate_lambda1(points)
    payload = {
        "points": [[n, lam] for n, lam in points],
        "intercept": result.intercept,
        "slope": result.slope,
        "points_used": result.points_used,
    }
    return [_write_json(payload, out / "extrapolation.json")]


def _run_symmetry_check(config: RunConfig, out: Path) -> List[Path]:
    report = symmetry_report(config.params)
    payload = {
        "model": report.model,
        "all_passed": report.all_passed,
        "checks": [
            {
                "generator": c.generator,
                "commutator_norm": c.commutator_norm,
                "expect_commuting": c.expect_commuting,
                "passed": c.passed,
            }
            for c in report.checks
        ],
    }
    return [_write_json(payload, out / "symmetry_check.json")]


_RUNNERS = {
    Experiment.SFF_EXACT: _run_sff_exact,
    Experiment.SFF_RPA: _run_sff_rpa,
    Experiment.SPECTRUM: _run_spectrum,
    Experiment.LAMBDA_ACROSS_N: _run_lambda_across_N,
    Experiment.THOULESS: _run_thouless,
    Experiment.BOUND_STATE: _run_bound_state,
    Experiment.EXTRAPOLATE: _run_extrapolate,
    Experiment.SYMMETRY_CHECK: _run_symmetry_check,
}


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def run_experiment(config: RunConfig) -> Dict[str, Any]:
    """Dispatch, write outputs, then write the manifest last."""
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    files = _RUNNERS[config.experiment](config, out)
    manifest = {
        "experiment": config.experiment.value,
        "config": config.to_dict(),
        "files": [
            {"path": f.name, "sha256": _sha256(f)} for f in sorted(files)
        ],
    }
    _write_json(manifest, out / "manifest.json")
    return manifest


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="kickedmix", description="Run a configured experiment and emit files."
    )
    parser.add_argument("--config", required=True, help="path to a JSON config")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=None, help="overrides config seed")
    args = parser.parse_args(argv)

    try:
        raw = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        config = parse_config(
            raw, Path(args.out), seed_override=args.seed, threads=args.threads
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        run_experiment(config)
    except (BudgetError, DimensionCapError) as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NumericalError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
