"""Doubly-stochastic maps, their spectra, the RPA form factor and the
symmetry checklist of the generating Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from . import operators as ops
from .basis import Basis, Mixing, Parity, SectorSpec, Species, enumerate_sector
from .model import ModelParams, build_driving_matrix, propagator
from .sff import SpectralSeries

ROW_SUM_TOL = 1e-12
TOP_EIGENVALUE_TOL = 1e-10
DEGENERACY_TOL = 1e-9
COMMUTATOR_TOL = 1e-11
# eigenvalues within this of 1 count as unit (block) eigenvalues; every
# physical relaxation mode in this package sits well below 1 - 1e-5
UNIT_EIGENVALUE_GAP = 1e-5


@dataclass(frozen=True)
class StochasticMap:
    matrix: np.ndarray
    kind: str  # "full" | "trotter"
    spec: Optional[SectorSpec] = None

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def row_sum_defect(self) -> float:
        return float(np.abs(self.matrix.sum(axis=1) - 1.0).max())

    def column_sum_defect(self) -> float:
        return float(np.abs(self.matrix.sum(axis=0) - 1.0).max())

    def symmetry_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.T).max())


@dataclass(frozen=True)
class MapSpectrum:
    """Real eigenvalues sorted descending, with degeneracy clusters."""

    eigenvalues: np.ndarray
    cluster_tol: float = DEGENERACY_TOL

    @property
    def clusters(self) -> List[Tuple[float, int]]:
        """(representative value, multiplicity) groups within cluster_tol."""
        out: List[Tuple[float, int]] = []
        ev = self.eigenvalues
        i = 0
        while i < len(ev):
            j = i + 1
            while j < len(ev) and ev[i] - ev[j] <= self.cluster_tol:
                j += 1
            out.append((float(ev[i:j].mean()), j - i))
            i = j
        return out

    @property
    def lambda1(self) -> float:
        """Largest eigenvalue strictly below the unit cluster.

        A doubly stochastic map carries one unit eigenvalue per invariant
        block (e.g. the two excitation-parity blocks of a Rabi-mixed space);
        the relaxation rate is set by the first eigenvalue below all of them.
        """
        below = self.eigenvalues[self.eigenvalues < 1.0 - UNIT_EIGENVALUE_GAP]
        if len(below) == 0:
            raise ValueError("no eigenvalue below the unit cluster")
        return float(below[0])


@dataclass(frozen=True)
class SymmetryCheck:
    generator: str
    commutator_norm: float
    expect_commuting: bool

    @property
    def passed(self) -> bool:
        if self.expect_commuting:
            return self.commutator_norm < COMMUTATOR_TOL
        return self.commutator_norm > 1e-3


@dataclass(frozen=True)
class SymmetryReport:
    model: str
    checks: Tuple[SymmetryCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def stochastic_map_from_unitary(V: np.ndarray, spec: Optional[SectorSpec] = None) -> StochasticMap:
    """Element-wise squared modulus of the kick propagator."""
    return StochasticMap(np.abs(V) ** 2, kind="full", spec=spec)


def trotter_generating_map(params: ModelParams, basis: Basis) -> StochasticMap:
    """Second-order (Trotter-regime) map  I + H.H - diag(H^2).

    Algebraically identical to the model-specific generating Hamiltonians;
    rows sum to one exactly because the diagonal of H^2 equals the row sums
    of the Hadamard square for symmetric H.
    """
    H = build_driving_matrix(params, basis)
    M = H * H
    np.fill_diagonal(M, 1.0 + np.diag(M) - (H * H).sum(axis=1))
    return StochasticMap(M, kind="trotter", spec=basis.spec)


def full_map(params: ModelParams, basis: Basis) -> StochasticMap:
    """Exact map |<a|e^{-iH}|b>|^2 on the sector."""
    V = propagator(build_driving_matrix(params, basis))
    return stochastic_map_from_unitary(V, basis.spec)


def map_spectrum(M: StochasticMap, cluster_tol: float = DEGENERACY_TOL) -> MapSpectrum:
    """All eigenvalues of the symmetric map, sorted descending."""
    if M.symmetry_defect() > 1e-9:
        raise ValueError("map is not symmetric; spectrum would be complex")
    sym = 0.5 * (M.matrix + M.matrix.T)
    ev = scipy.linalg.eigvalsh(sym)[::-1]
    spectrum = MapSpectrum(np.ascontiguousarray(ev), cluster_tol=cluster_tol)
    if M.kind == "full":
        if abs(spectrum.eigenvalues[0] - 1.0) > TOP_EIGENVALUE_TOL:
            raise RuntimeError("largest eigenvalue of the full map deviates from 1")
        if np.abs(spectrum.eigenvalues).max() > 1.0 + TOP_EIGENVALUE_TOL:
            raise RuntimeError("full-map eigenvalue outside [-1, 1]")
    return spectrum


def _spectrum_cache_key(params: ModelParams, basis: Basis, dtype: np.dtype) -> str:
    spec = basis.spec
    tag = "" if np.dtype(dtype) == np.float64 else f"_{np.dtype(dtype).name}"
    return (
        f"fullmap_{spec.species.value}_{spec.mixing.value}_L{spec.L}"
        f"_N{spec.N}_nmax{spec.n_max}_nbmax{spec.nb_max}"
        f"_par{spec.parity.value if spec.parity else None}"
        f"_g{params.g!r}_J{params.J!r}{tag}.npy"
    )


def full_map_spectrum(
    params: ModelParams,
    basis: Basis,
    cluster_tol: float = DEGENERACY_TOL,
    cache_dir: Optional[str] = None,
    block: int = 512,
    dtype: np.dtype = np.float64,
) -> MapSpectrum:
    """Eigenvalues of the full map, assembled block-by-block.

    Avoids ever holding the propagator, the map and the eigenvector matrix
    simultaneously, which is what makes dimension ~15000 feasible in a few
    gigabytes.  Pass ``dtype=np.float32`` to halve the footprint again when
    only ~1e-6 eigenvalue accuracy is needed (e.g. Thouless-time sweeps).
    The map is disorder-free, so its spectrum is a pure function of the
    sector and the couplings; pass ``cache_dir`` to memoise it on disk.
    """
    dtype = np.dtype(dtype)
    top_tol = TOP_EIGENVALUE_TOL if dtype == np.float64 else 1e-4
    cache_path = None
    if cache_dir is not None:
        cache_path = Path(cache_dir) / _spectrum_cache_key(params, basis, dtype)
        if cache_path.exists():
            ev = np.load(cache_path)
            if len(ev) == len(basis):
                return MapSpectrum(np.ascontiguousarray(ev), cluster_tol=cluster_tol)
    H = build_driving_matrix(params, basis)
    if H.dtype != dtype:
        H = H.astype(dtype)
    evals, Q = scipy.linalg.eigh(H, overwrite_a=True, check_finite=False, driver="evr")
    del H
    n = Q.shape[0]
    cos, sin = np.cos(evals), np.sin(evals)
    M = np.empty((n, n), dtype=dtype)
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        C = (Q[lo:hi] * cos) @ Q.T
        S = (Q[lo:hi] * sin) @ Q.T
        np.multiply(C, C, out=C)
        np.multiply(S, S, out=S)
        np.add(C, S, out=M[lo:hi])
    del Q
    ev = scipy.linalg.eigvalsh(M, overwrite_a=True, check_finite=False, driver="evr")[::-1]
    ev = np.ascontiguousarray(ev, dtype=np.float64)
    if abs(ev[0] - 1.0) > top_tol:
        raise RuntimeError("largest eigenvalue of the full map deviates from 1")
    if np.abs(ev).max() > 1.0 + top_tol:
        raise RuntimeError("full-map eigenvalue outside [-1, 1]")
    # the exact spectrum lies in [-1, 1]; remove the (validated-small)
    # rounding excess so that lambda^t cannot diverge at large t
    np.clip(ev, -1.0, 1.0, out=ev)
    if cache_path is not None:
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        np.save(cache_path, ev)
    return MapSpectrum(ev, cluster_tol=cluster_tol)


def rpa_sff(
    spectrum: MapSpectrum,
    t_grid: Sequence[int],
    include_second_order: bool = False,
    label: str = "rpa",
) -> SpectralSeries:
    """K(t) = 2t (1 + sum_i lambda_i^t), optionally minus the 2t^2/N term."""
    t = np.asarray(t_grid, dtype=int)
    lam = spectrum.eigenvalues[1:]
    dim = len(spectrum.eigenvalues)
    K = np.empty(len(t), dtype=float)
    for k, tk in enumerate(t):
        K[k] = 2.0 * tk * (1.0 + np.power(lam, int(tk)).sum())
    if include_second_order:
        K -= 2.0 * t.astype(float) ** 2 / dim
    return SpectralSeries(t_grid=t, K=K, dim=dim, realizations=0, label=label)


def lambda1_across_N(
    params: ModelParams,
    N_values: Optional[Sequence[int]] = None,
    kind: str = "trotter",
    memory_cap: int = 200_000,
) -> List[Tuple[int, float]]:
    """Second-largest map eigenvalue per total-excitation sector (JC only)."""
    spec = params.spec
    if spec.mixing is not Mixing.JC:
        raise ValueError("excitation sectors are defined for JC mixing only")
    if N_values is None:
        if spec.species is not Species.FERMION:
            raise ValueError("provide N_values explicitly for bosons")
        N_values = range(1, 2 * spec.L)
    out = []
    for N in N_values:
        sub = replace(spec, N=int(N))
        basis = enumerate_sector(sub, memory_cap=memory_cap)
        sub_params = replace(params, spec=sub)
        M = (
            trotter_generating_map(sub_params, basis)
            if kind == "trotter"
            else full_map(sub_params, basis)
        )
        out.append((int(N), map_spectrum(M).lambda1))
    return out


def _checks_jc_fermion(params: ModelParams) -> Tuple[str, List[Tuple[str, np.ndarray, bool]], Basis, StochasticMap]:
    # Full lattice+qubit space so the SU(2) ladder can act across N sectors.
    spec = SectorSpec(Species.FERMION, Mixing.JC, params.spec.L, N=None)
    basis = enumerate_sector(spec)
    M = trotter_generating_map(replace(params, spec=spec), basis)
    gens = []
    for axis in ("x", "y", "z"):
        G = 0.5 * (ops.total(basis, ops.tau_pauli, axis) + ops.total(basis, ops.sigma_pauli, axis))
        gens.append((f"sum (tau^{axis} + sigma^{axis})/2", G, True))
    gens.append(("S^+ ladder", ops.spin_raise_total(basis), True))
    gens.append(("S^- ladder", ops.spin_lower_total(basis), True))
    return "jc-fermion", gens, basis, M


def _checks_jc_boson(params: ModelParams, n_max: int = 4) -> Tuple[str, List, Basis, StochasticMap]:
    # Multi-N truncated space: the U(1) charge is diagonal and exact; the
    # SU(1,1)-style ladder genuinely fails to commute.
    spec = SectorSpec(Species.BOSON, Mixing.JC, params.spec.L, N=None, n_max=n_max)
    basis = enumerate_sector(spec)
    M = trotter_generating_map(replace(params, spec=spec), basis)
    K0 = ops.total(basis, ops.su11_k, "0")
    nq = np.diag([float(sum(s.qubits)) for s in basis.states])
    charge = K0 - nq
    # sum_i (K^+_i + sigma^-_i): lowers bosons and qubits together
    ladder = ops.total(basis, ops.su11_k, "+")
    for i in range(params.spec.L):
        ladder = ladder + 0.5 * (
            ops.sigma_pauli(basis, "x", i) - 1j * ops.sigma_pauli(basis, "y", i)
        ).real
    gens = [
        ("sum (K^0 - qubit number)  [U(1) charge]", charge, True),
        ("sum (K^+ + sigma^-)  [no SU(1,1)]", ladder, False),
    ]
    return "jc-boson", gens, basis, M


def _checks_rabi_fermion(params: ModelParams) -> Tuple[str, List, Basis, StochasticMap]:
    spec = SectorSpec(Species.FERMION, Mixing.RABI, params.spec.L, parity=None)
    basis = enumerate_sector(spec)
    M = trotter_generating_map(replace(params, spec=spec), basis)
    R = ops.y_rotation(basis, np.pi / 2)
    Mrot = (R @ M.matrix @ R.conj().T).real
    M = StochasticMap(Mrot, kind="trotter", spec=spec)
    gens = [("sum tau^z (rotated frame)", ops.total(basis, ops.tau_pauli, "z"), True)]
    for j in range(params.spec.L):
        gens.append((f"sigma^z_{j} (rotated frame)", ops.sigma_pauli(basis, "z", j), True))
    gens.append(("global flip prod tau^x sigma^x", ops.global_flip(basis), True))
    return "rabi-fermion", gens, basis, M


def _checks_rabi_boson(params: ModelParams, nb_max: int = 4) -> Tuple[str, List, Basis, StochasticMap]:
    # Boson-number truncation keeps every sigma^x_j inside the space, so the
    # local qubit symmetries survive truncation exactly.
    spec = SectorSpec(Species.BOSON, Mixing.RABI, params.spec.L, nb_max=nb_max)
    basis = enumerate_sector(spec)
    M = trotter_generating_map(replace(params, spec=spec), basis)
    gens = [
        (f"sigma^x_{j}", ops.sigma_pauli(basis, "x", j), True)
        for j in range(params.spec.L)
    ]
    return "rabi-boson", gens, basis, M


def symmetry_report(params: ModelParams) -> SymmetryReport:
    """Commutator checklist of the Trotter generating map for the model.

    Builds the appropriate (full or truncated) space internally; the input
    sector of ``params`` only provides (species, mixing, L, caps).
    """
    spec = params.spec
    if spec.species is Species.FERMION and spec.mixing is Mixing.JC:
        model, gens, basis, M = _checks_jc_fermion(params)
    elif spec.species is Species.BOSON and spec.mixing is Mixing.JC:
        model, gens, basis, M = _checks_jc_boson(params, n_max=spec.n_max or 4)
    elif spec.species is Species.FERMION:
        model, gens, basis, M = _checks_rabi_fermion(params)
    else:
        model, gens, basis, M = _checks_rabi_boson(params, nb_max=spec.nb_max or 4)
    checks = tuple(
        SymmetryCheck(name, ops.commutator_norm(M.matrix, G), expect)
        for name, G, expect in gens
    )
    return SymmetryReport(model=model, checks=checks)
