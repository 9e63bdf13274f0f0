"""Base-Hamiltonian phases, driving Hamiltonians and the one-kick unitary.

The base Hamiltonian is diagonal in the occupation basis; its eigenphases
carry random on-site frequencies and a long-range density-density
interaction.  The kick is generated by a real symmetric driving matrix
(JC or Rabi mixing plus nearest-neighbor hopping on a ring), exponentiated
through its spectral decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .basis import Basis, FockState, Mixing, SectorSpec, Species

UNITARITY_TOL = 1e-11


@dataclass(frozen=True)
class ModelParams:
    """Full experiment definition: sector, couplings and disorder law."""

    spec: SectorSpec
    g: float = 0.1
    J: float = 0.4
    U0: float = 10.0
    alpha: float = 1.4
    omega_mean: float = 1.0
    omega_std: float = 0.3
    Omega_mean: float = 1.0
    Omega_std: float = 0.3
    g_site: Optional[Tuple[float, ...]] = None
    base_seed: int = 0
    # |i-j| in the interaction uses the literal index difference by default;
    # set True to use the ring (chord-count) distance instead.
    ring_distance: bool = False

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise ValueError("alpha must lie in (1, 2)")
        if self.omega_std < 0 or self.Omega_std < 0:
            raise ValueError("disorder standard deviations must be >= 0")
        if self.g_site is not None:
            object.__setattr__(self, "g_site", tuple(float(x) for x in self.g_site))
            if len(self.g_site) != self.spec.L:
                raise ValueError("g_site must have length L")

    def site_couplings(self) -> np.ndarray:
        if self.g_site is not None:
            return np.asarray(self.g_site, dtype=float)
        return np.full(self.spec.L, float(self.g))


@dataclass(frozen=True)
class DisorderRealization:
    omega: np.ndarray
    Omega: np.ndarray
    realization_index: int


def draw_disorder(params: ModelParams, realization_index: int) -> DisorderRealization:
    """Gaussian (omega_i, Omega_i) draw, deterministic in (base_seed, index)."""
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=params.base_seed, spawn_key=(realization_index,))
    )
    L = params.spec.L
    omega = params.omega_mean + params.omega_std * rng.standard_normal(L)
    Omega = params.Omega_mean + params.Omega_std * rng.standard_normal(L)
    return DisorderRealization(omega, Omega, realization_index)


def interaction_matrix(params: ModelParams) -> np.ndarray:
    """Pairwise couplings U_ij = U0 / |i-j|^alpha (upper triangle, i<j)."""
    L = params.spec.L
    U = np.zeros((L, L))
    for i in range(L):
        for j in range(i + 1, L):
            d = j - i
            if params.ring_distance:
                d = min(d, L - d)
            U[i, j] = params.U0 / d**params.alpha
    return U


def build_phase_vector(
    params: ModelParams, basis: Basis, disorder: DisorderRealization
) -> np.ndarray:
    """Eigenphases of the base Hamiltonian, one per basis state."""
    L = params.spec.L
    if len(disorder.omega) != L or len(disorder.Omega) != L:
        raise ValueError("disorder realization does not match L")
    occ = np.array([s.occupations for s in basis.states], dtype=float)
    qub = np.array([s.qubits for s in basis.states], dtype=float)
    theta = occ @ disorder.omega + qub @ disorder.Omega
    U = interaction_matrix(params)
    # sum_{i<j} U_ij n_i n_j, vectorized over states
    theta += np.einsum("ki,ij,kj->k", occ, U, occ)
    return theta


def _fermion_hop(state: FockState, dst: int, src: int):
    """Matrix action of a^dag_dst a_src with Jordan-Wigner signs."""
    n = state.occupations
    if n[src] == 0 or n[dst] == 1:
        return None, 0.0
    sign = (-1) ** sum(n[:src])
    mid = list(n)
    mid[src] = 0
    sign *= (-1) ** sum(mid[:dst])
    mid[dst] = 1
    return FockState(tuple(mid), state.qubits), float(sign)


def _boson_hop(state: FockState, dst: int, src: int):
    n = state.occupations
    if n[src] == 0:
        return None, 0.0
    amp = np.sqrt(n[src]) * np.sqrt(n[dst] + 1)
    mid = list(n)
    mid[src] -= 1
    mid[dst] += 1
    return FockState(tuple(mid), state.qubits), float(amp)


def _mode_change(state: FockState, i: int, create: bool, fermion: bool):
    """a^dag_i (create) or a_i acting on the lattice mode, with JW sign."""
    n = state.occupations
    if fermion:
        if create and n[i] == 1:
            return None, 0.0
        if not create and n[i] == 0:
            return None, 0.0
        sign = (-1) ** sum(n[:i])
        mid = list(n)
        mid[i] = 1 if create else 0
        return FockState(tuple(mid), state.qubits), float(sign)
    amp = np.sqrt(n[i] + 1) if create else np.sqrt(n[i])
    if amp == 0.0:
        return None, 0.0
    mid = list(n)
    mid[i] += 1 if create else -1
    return FockState(tuple(mid), state.qubits), float(amp)


def _qubit_change(state: FockState, i: int, raise_: bool):
    s = state.qubits
    if raise_ == bool(s[i]):
        return None, 0.0
    mid = list(s)
    mid[i] = 1 if raise_ else 0
    return FockState(state.occupations, tuple(mid)), 1.0


def build_driving_matrix(params: ModelParams, basis: Basis) -> np.ndarray:
    """Dense real symmetric matrix of H_JC or H_R in the occupation basis.

    Periodic boundary conditions throughout; fermionic operators carry the
    Jordan-Wigner string, so the L->1 bond picks up the (-1)^{N_f} sign.
    Terms leaving a truncated boson space are dropped (truncation
    semantics of the sector).
    """
    spec = basis.spec
    if spec != params.spec:
        raise ValueError("basis does not match params.spec")
    L = spec.L
    if L < 2:
        raise ValueError("driving matrix requires L >= 2")
    fermion = spec.species is Species.FERMION
    g = params.site_couplings()
    J = float(params.J)
    dim = basis.dimension
    H = np.zeros((dim, dim))

    def add(target: Optional[FockState], amp: float, col: int, scale: float):
        if target is None or scale == 0.0 or amp == 0.0:
            return
        row = basis.lookup(target)
        if row is not None:
            H[row, col] += scale * amp

    hop = _fermion_hop if fermion else _boson_hop
    for col, state in enumerate(basis.states):
        for i in range(L):
            j = (i + 1) % L
            # -J (a^dag_i a_{i+1} + a^dag_{i+1} a_i)
            t, a = hop(state, i, j)
            add(t, a, col, -J)
            t, a = hop(state, j, i)
            add(t, a, col, -J)
            if spec.mixing is Mixing.JC:
                # g (a^dag_i sigma_i + sigma^dag_i a_i)
                t, a = _mode_change(state, i, create=True, fermion=fermion)
                if t is not None:
                    t2, a2 = _qubit_change(t, i, raise_=False)
                    add(t2, a * a2, col, g[i])
                t, a = _mode_change(state, i, create=False, fermion=fermion)
                if t is not None:
                    t2, a2 = _qubit_change(t, i, raise_=True)
                    add(t2, a * a2, col, g[i])
            elif spec.fixed_qubit_pattern is not None:
                # Frozen transverse qubit sector: (sigma^dag + sigma) is the
                # c-number 2 m_i - 1, so the coupling is a pure displacement
                # g (2 m_i - 1)(a^dag_i + a_i) acting on the modes alone.
                s = 2 * spec.fixed_qubit_pattern[i] - 1
                for create in (True, False):
                    t, a = _mode_change(state, i, create=create, fermion=fermion)
                    add(t, a, col, g[i] * s)
            else:
                # g (a^dag_i + a_i)(sigma^dag_i + sigma_i)
                for create in (True, False):
                    t, a = _mode_change(state, i, create=create, fermion=fermion)
                    if t is None:
                        continue
                    for raise_ in (True, False):
                        t2, a2 = _qubit_change(t, i, raise_=raise_)
                        add(t2, a * a2, col, g[i])
    return H


def propagator(H: np.ndarray) -> np.ndarray:
    """V = exp(-iH) via the spectral decomposition of the symmetric kick."""
    if not np.all(np.isfinite(H)):
        raise ValueError("driving matrix contains non-finite entries")
    evals, Q = scipy.linalg.eigh(H)
    V = (Q * np.exp(-1j * evals)) @ Q.T
    err = np.abs(V.conj().T @ V - np.eye(len(H))).max()
    if err > UNITARITY_TOL:
        raise RuntimeError(f"propagator unitarity violated: {err:.3e}")
    return V
