"""Exact disorder-averaged spectral form factor from Floquet eigenphases."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
from joblib import Parallel, delayed

from .basis import Basis, enumerate_sector
from .model import ModelParams, build_driving_matrix, build_phase_vector, draw_disorder, propagator

MODULUS_TOL = 1e-8


@dataclass(frozen=True)
class SpectralSeries:
    """K(t) over an integer time grid with ensemble metadata."""

    t_grid: np.ndarray
    K: np.ndarray
    dim: int
    realizations: int
    label: str = ""

    def __post_init__(self):
        if len(self.t_grid) != len(self.K):
            raise ValueError("t_grid and K lengths differ")

    @property
    def K_over_2t(self) -> np.ndarray:
        return self.K / (2.0 * np.asarray(self.t_grid, dtype=float))


def default_t_grid(dim: int, t_max: Optional[int] = None, points_per_decade: int = 60) -> np.ndarray:
    """Integers 1..min(4*dim, 1e4), log-thinned above t = 100."""
    if t_max is None:
        t_max = min(4 * dim, 10_000)
    t_max = max(int(t_max), 1)
    dense = np.arange(1, min(t_max, 100) + 1)
    if t_max <= 100:
        return dense
    sparse = np.unique(
        np.round(
            np.logspace(np.log10(101), np.log10(t_max), num=max(points_per_decade, 2) * 4)
        ).astype(int)
    )
    return np.concatenate([dense, sparse[sparse > 100]])


def floquet_eigenphases(V: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Eigenphases of U = V diag(e^{-i theta}), renormalized to unit modulus."""
    if V.shape[0] != len(theta):
        raise ValueError("propagator and phase vector dimensions differ")
    U = V * np.exp(-1j * np.asarray(theta))[np.newaxis, :]
    z = scipy.linalg.eigvals(U)
    dev = np.abs(np.abs(z) - 1.0).max()
    if dev > MODULUS_TOL:
        raise RuntimeError(f"Floquet eigenvalue modulus deviates by {dev:.3e}")
    z = z / np.abs(z)
    return np.mod(np.angle(z), 2.0 * np.pi)


def coe_reference(t, dim: int, order: int = 2):
    """COE form factor, leading (2t) plus second-order (-2t^2/N) term."""
    t = np.asarray(t, dtype=float)
    if order == 1:
        return 2.0 * t
    if order == 2:
        return 2.0 * t - 2.0 * t**2 / dim
    raise ValueError("order must be 1 or 2")


def _one_realization(params: ModelParams, basis: Basis, V: np.ndarray, t_grid: np.ndarray, r: int) -> np.ndarray:
    disorder = draw_disorder(params, r)
    theta = build_phase_vector(params, basis, disorder)
    phases = floquet_eigenphases(V, theta)
    # |sum_n e^{i phi_n t}|^2 for every t, via one complex exponential per t
    out = np.empty(len(t_grid))
    for k, t in enumerate(t_grid):
        out[k] = np.abs(np.exp(1j * phases * int(t)).sum()) ** 2
    return out


def compute_exact_sff(
    params: ModelParams,
    t_grid: Optional[Sequence[int]] = None,
    realizations: int = 100,
    n_jobs: int = 1,
    basis: Optional[Basis] = None,
    dense_budget: int = 20_000,
    label: str = "exact",
) -> SpectralSeries:
    """Disorder-averaged K(t) = <|tr U^t|^2> over the sector.

    One dense eigendecomposition per realization; realizations are
    independent and may run in parallel without changing the result.
    """
    if realizations < 1:
        raise ValueError("need at least one realization")
    if basis is None:
        basis = enumerate_sector(params.spec)
    if basis.dimension > dense_budget:
        raise RuntimeError(
            f"dimension {basis.dimension} exceeds dense eigensolver budget {dense_budget}"
        )
    if t_grid is None:
        t_grid = default_t_grid(basis.dimension)
    t_grid = np.asarray(t_grid, dtype=int)
    if np.any(t_grid < 1):
        raise ValueError("t grid must contain positive integers only")
    V = propagator(build_driving_matrix(params, basis))
    if n_jobs == 1:
        terms = [_one_realization(params, basis, V, t_grid, r) for r in range(realizations)]
    else:
        terms = Parallel(n_jobs=n_jobs)(
            delayed(_one_realization)(params, basis, V, t_grid, r)
            for r in range(realizations)
        )
    K = np.sum(terms, axis=0) / realizations
    return SpectralSeries(
        t_grid=t_grid, K=K, dim=basis.dimension, realizations=realizations, label=label
    )
