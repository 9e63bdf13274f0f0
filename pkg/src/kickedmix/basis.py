"""Fock-space sector enumeration for kicked fermion/boson-qubit chains.

A basis state pairs a lattice occupation vector (n_1..n_L) with a qubit
excitation pattern (s_1..s_L).  Sectors are labeled by the species, the
mixing type and the applicable conserved/truncation quantum numbers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator, NamedTuple, Optional, Sequence, Tuple

DEFAULT_MEMORY_CAP = 200_000


class Species(str, enum.Enum):
    FERMION = "fermion"
    BOSON = "boson"


class Mixing(str, enum.Enum):
    JC = "jc"
    RABI = "rabi"


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


class SectorError(ValueError):
    """Inconsistent sector specification."""


class DimensionCapError(RuntimeError):
    """Sector dimension exceeds the configured memory cap."""


class FockState(NamedTuple):
    occupations: Tuple[int, ...]
    qubits: Tuple[int, ...]

    @property
    def total_excitation(self) -> int:
        return sum(self.occupations) + sum(self.qubits)

    def as_vector(self) -> Tuple[int, ...]:
        return self.occupations + self.qubits


@dataclass(frozen=True)
class SectorSpec:
    """Quantum numbers selecting one symmetry sector (or truncated space).

    For JC mixing, ``N`` fixes the total excitation; ``N=None`` selects the
    direct sum over all sectors (fermions) or requires ``n_max`` (bosons).
    Rabi-fermion sectors are labeled by ``parity`` (``None`` = full space).
    Rabi-boson spaces are truncated either by total excitation ``n_max`` or
    by total boson number ``nb_max``.  With ``nb_max`` the driving commutes
    with every transverse qubit operator, so ``fixed_qubit_pattern`` may pin
    one transverse (sigma^x) sector ``m_1..m_L``: the stored qubit bits then
    label that sector and the coupling acts on the modes alone.
    """

    species: Species
    mixing: Mixing
    L: int
    N: Optional[int] = None
    parity: Optional[Parity] = None
    n_max: Optional[int] = None
    nb_max: Optional[int] = None
    fixed_qubit_pattern: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.L < 1:
            raise SectorError("L must be positive")
        if self.mixing is Mixing.RABI and self.N is not None:
            raise SectorError("N is not conserved under Rabi mixing")
        if self.parity is not None and not (
            self.species is Species.FERMION and self.mixing is Mixing.RABI
        ):
            raise SectorError("parity labels Rabi-fermion sectors only")
        if self.species is Species.FERMION:
            if self.nb_max is not None or self.n_max is not None:
                raise SectorError("truncation caps apply to bosons only")
            if self.fixed_qubit_pattern is not None:
                raise SectorError("fixed qubit pattern applies to Rabi-boson only")
            if self.mixing is Mixing.JC and self.N is not None and not (
                0 <= self.N < 2 * self.L
            ):
                raise SectorError("JC-fermion requires 0 <= N < 2L")
        else:
            if self.N is not None and self.N < 0:
                raise SectorError("N must be non-negative")
            if self.mixing is Mixing.JC:
                if self.N is None and self.n_max is None:
                    raise SectorError("JC-boson requires N or an n_max truncation")
                if self.fixed_qubit_pattern is not None:
                    raise SectorError("fixed qubit pattern applies to Rabi-boson only")
            else:
                if (self.n_max is None) == (self.nb_max is None):
                    raise SectorError(
                        "Rabi-boson requires exactly one of n_max, nb_max"
                    )
            if self.fixed_qubit_pattern is not None:
                pat = tuple(self.fixed_qubit_pattern)
                if len(pat) != self.L or any(b not in (0, 1) for b in pat):
                    raise SectorError("fixed qubit pattern must be L bits")
                if self.nb_max is None:
                    raise SectorError(
                        "fixed qubit pattern requires the nb_max truncation"
                    )


class Basis:
    """Ordered, bidirectionally indexed enumeration of one sector.

    States are sorted lexicographically on (n_1..n_L, s_1..s_L).  Immutable
    after construction, safe to share across workers.
    """

    def __init__(self, spec: SectorSpec, states: Sequence[FockState]):
        self.spec = spec
        self.states: Tuple[FockState, ...] = tuple(states)
        self._index = {s: k for k, s in enumerate(self.states)}

    @property
    def dimension(self) -> int:
        return len(self.states)

    def state_at(self, k: int) -> FockState:
        if not 0 <= k < len(self.states):
            raise IndexError(f"state index {k} outside sector of dim {len(self.states)}")
        return self.states[k]

    def lookup(self, state: FockState) -> Optional[int]:
        """Index of `state`, or None if it falls outside the sector."""
        return self._index.get(state)

    def index_of(self, state: FockState) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise KeyError(f"state {state} does not belong to sector {self.spec}") from None

    def __contains__(self, state: FockState) -> bool:
        return state in self._index

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[FockState]:
        return iter(self.states)


def _compositions(total: int, parts: int, cap: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """All ways to write `total` as `parts` ordered non-negative integers."""
    if parts == 1:
        if cap is None or total <= cap:
            yield (total,)
        return
    hi = total if cap is None else min(total, cap)
    for first in range(hi + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def _qubit_patterns(L: int, total: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    for bits in product((0, 1), repeat=L):
        if total is None or sum(bits) == total:
            yield bits


def _enumerate_states(spec: SectorSpec) -> Iterator[FockState]:
    L = spec.L
    fermion = spec.species is Species.FERMION
    cap = 1 if fermion else None

    if spec.mixing is Mixing.JC and spec.N is not None:
        for m in range(min(spec.N, L) + 1):
            nb = spec.N - m
            if fermion and nb > L:
                continue
            for occ in _compositions(nb, L, cap):
                for bits in _qubit_patterns(L, m):
                    yield FockState(occ, bits)
        return

    if fermion:
        # Full or parity-restricted fermion space.
        want = None if spec.parity is None else (0 if spec.parity is Parity.EVEN else 1)
        for occ in product((0, 1), repeat=L):
            for bits in product((0, 1), repeat=L):
                if want is None or (sum(occ) + sum(bits)) % 2 == want:
                    yield FockState(occ, bits)
        return

    if spec.nb_max is not None:
        patterns = (
            [tuple(spec.fixed_qubit_pattern)]
            if spec.fixed_qubit_pattern is not None
            else list(_qubit_patterns(L))
        )
        for nb in range(spec.nb_max + 1):
            for occ in _compositions(nb, L):
                for bits in patterns:
                    yield FockState(occ, bits)
        return

    # Boson space truncated by total excitation.
    assert spec.n_max is not None
    for n_total in range(spec.n_max + 1):
        for m in range(min(n_total, L) + 1):
            for occ in _compositions(n_total - m, L):
                for bits in _qubit_patterns(L, m):
                    yield FockState(occ, bits)


def jc_boson_dimension(L: int, N: int) -> int:
    """Sector size for JC-mixed bosons and qubits at total excitation N."""
    return sum(
        math.comb(L, m) * math.comb(N - m + L - 1, L - 1)
        for m in range(min(N, L) + 1)
    )


def sector_dimension(spec: SectorSpec) -> Optional[int]:
    """Closed-form sector size, or None where only enumeration counts."""
    L = spec.L
    if spec.species is Species.FERMION:
        if spec.mixing is Mixing.JC:
            if spec.N is None:
                return 4**L
            return math.comb(2 * L, spec.N)
        if spec.parity is None:
            return 4**L
        return 2 ** (2 * L - 1)
    if spec.mixing is Mixing.JC and spec.N is not None:
        return jc_boson_dimension(L, spec.N)
    if spec.mixing is Mixing.JC:
        return sum(jc_boson_dimension(L, n) for n in range(spec.n_max + 1))
    if spec.n_max is not None:
        return sum(jc_boson_dimension(L, n) for n in range(spec.n_max + 1))
    n_patterns = 1 if spec.fixed_qubit_pattern is not None else 2**L
    return n_patterns * math.comb(spec.nb_max + L, L)


def enumerate_sector(spec: SectorSpec, memory_cap: int = DEFAULT_MEMORY_CAP) -> Basis:
    """Build the ordered basis of a sector, guarding the dense-memory cap."""
    dim = sector_dimension(spec)
    if dim is not None and dim > memory_cap:
        raise DimensionCapError(
            f"sector dimension {dim} exceeds memory cap {memory_cap}"
        )
    states = sorted(_enumerate_states(spec), key=FockState.as_vector)
    if len(states) > memory_cap:
        raise DimensionCapError(
            f"sector dimension {len(states)} exceeds memory cap {memory_cap}"
        )
    if dim is not None and len(states) != dim:
        raise AssertionError(
            f"enumerated {len(states)} states, analytic count {dim}"
        )
    return Basis(spec, states)
