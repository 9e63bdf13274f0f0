"""Dense operator realizations on an enumerated basis.

The lattice modes map to spins through the Jordan-Wigner convention used
for the generating Hamiltonians: site occupation n_i is the z-projection
of the tau spin at site i, qubit bits are the sigma spins.  Boson sites
carry the SU(1,1) family K^{0,1,2,+,-}.  Operators whose action leaves a
truncated space project onto it (matching how the maps themselves are
truncated) unless ``strict=True``.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from .basis import Basis, FockState


def _build(basis: Basis, action, dtype=float, strict: bool = False) -> np.ndarray:
    """Assemble a dense matrix from a per-state action.

    ``action(state)`` yields (target_state, amplitude) pairs.
    """
    dim = basis.dimension
    M = np.zeros((dim, dim), dtype=dtype)
    for col, state in enumerate(basis.states):
        for target, amp in action(state):
            if amp == 0:
                continue
            row = basis.lookup(target)
            if row is None:
                if strict:
                    raise KeyError(f"operator leaves sector at state {target}")
                continue
            M[row, col] += amp
    return M


def _flip_site(state: FockState, i: int) -> FockState:
    occ = list(state.occupations)
    occ[i] = 1 - occ[i]
    return FockState(tuple(occ), state.qubits)


def _flip_qubit(state: FockState, i: int) -> FockState:
    q = list(state.qubits)
    q[i] = 1 - q[i]
    return FockState(state.occupations, tuple(q))


def tau_pauli(basis: Basis, axis: str, i: int, strict: bool = False) -> np.ndarray:
    """Pauli matrix of the hard-core lattice spin at site i (x, y or z)."""

    def action(state: FockState):
        n = state.occupations[i]
        if axis == "z":
            yield state, 2 * n - 1
        elif axis == "x":
            yield _flip_site(state, i), 1
        elif axis == "y":
            yield _flip_site(state, i), (1j if n == 0 else -1j)
        else:
            raise ValueError(f"unknown axis {axis!r}")

    return _build(basis, action, dtype=(complex if axis == "y" else float), strict=strict)


def sigma_pauli(basis: Basis, axis: str, i: int, strict: bool = False) -> np.ndarray:
    """Pauli matrix of the qubit at site i."""

    def action(state: FockState):
        s = state.qubits[i]
        if axis == "z":
            yield state, 2 * s - 1
        elif axis == "x":
            yield _flip_qubit(state, i), 1
        elif axis == "y":
            yield _flip_qubit(state, i), (1j if s == 0 else -1j)
        else:
            raise ValueError(f"unknown axis {axis!r}")

    return _build(basis, action, dtype=(complex if axis == "y" else float), strict=strict)


def su11_k(basis: Basis, which: str, i: int, strict: bool = False) -> np.ndarray:
    """Boson-site SU(1,1) generator: K^0, K^+, K^-, K^1 or K^2.

    K^0 = -(n + 1/2); K^+ = a sqrt(n) lowers n with weight n;
    K^- = sqrt(n) a^dag raises n with weight n+1.
    """

    def shift(state: FockState, d: int) -> FockState:
        occ = list(state.occupations)
        occ[i] += d
        return FockState(tuple(occ), state.qubits)

    def action(state: FockState):
        n = state.occupations[i]
        if which == "0":
            yield state, -(n + 0.5)
        elif which == "+":
            if n > 0:
                yield shift(state, -1), n
        elif which == "-":
            yield shift(state, +1), n + 1
        elif which == "1":
            if n > 0:
                yield shift(state, -1), 0.5 * n
            yield shift(state, +1), 0.5 * (n + 1)
        elif which == "2":
            if n > 0:
                yield shift(state, -1), -0.5j * n
            yield shift(state, +1), 0.5j * (n + 1)
        else:
            raise ValueError(f"unknown K component {which!r}")

    return _build(basis, action, dtype=(complex if which == "2" else float), strict=strict)


def total(basis: Basis, builder, arg: str, strict: bool = False) -> np.ndarray:
    """Sum of a single-site operator over all sites."""
    L = basis.spec.L
    out = builder(basis, arg, 0, strict=strict)
    for i in range(1, L):
        out = out + builder(basis, arg, i, strict=strict)
    return out


def number_total(basis: Basis) -> np.ndarray:
    """Diagonal total-excitation operator N = sum(n_i + s_i)."""
    return np.diag([float(s.total_excitation) for s in basis.states])


def number_fermion(basis: Basis) -> np.ndarray:
    """Diagonal lattice-mode number operator N_f = sum n_i."""
    return np.diag([float(sum(s.occupations)) for s in basis.states])


def spin_raise_total(basis: Basis, strict: bool = False) -> np.ndarray:
    """S^+ = sum_j (tau^+_j + sigma^+_j) on a hard-core lattice."""

    def action(state: FockState):
        for i in range(basis.spec.L):
            if state.occupations[i] == 0:
                yield _flip_site(state, i), 1
            if state.qubits[i] == 0:
                yield _flip_qubit(state, i), 1

    return _build(basis, action, strict=strict)


def spin_lower_total(basis: Basis, strict: bool = False) -> np.ndarray:
    """S^- = sum_j (tau^-_j + sigma^-_j) on a hard-core lattice."""

    def action(state: FockState):
        for i in range(basis.spec.L):
            if state.occupations[i] == 1:
                yield _flip_site(state, i), 1
            if state.qubits[i] == 1:
                yield _flip_qubit(state, i), 1

    return _build(basis, action, strict=strict)


def global_flip(basis: Basis, strict: bool = False) -> np.ndarray:
    """Product of tau^x sigma^x over all sites (hard-core lattice only)."""

    def action(state: FockState):
        occ = tuple(1 - n for n in state.occupations)
        q = tuple(1 - s for s in state.qubits)
        yield FockState(occ, q), 1

    return _build(basis, action, strict=strict)


def y_rotation(basis: Basis, angle: float) -> np.ndarray:
    """exp(i * angle * sum_j (tau^y_j + sigma^y_j) / 2) as a dense matrix."""
    Y = total(basis, tau_pauli, "y") + total(basis, sigma_pauli, "y")
    evals, Q = np.linalg.eigh(Y)
    return (Q * np.exp(0.5j * angle * evals)) @ Q.conj().T


def commutator_norm(A: np.ndarray, B: np.ndarray) -> float:
    """Max-norm of [A, B]."""
    return float(np.abs(A @ B - B @ A).max())
