"""Sector enumeration: closed-form counts, brute-force cross-checks,
index/state bijectivity."""

import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kickedmix.basis import (
    Basis,
    DimensionCapError,
    FockState,
    Mixing,
    Parity,
    SectorError,
    SectorSpec,
    Species,
    enumerate_sector,
    jc_boson_dimension,
    sector_dimension,
)


def brute_force_states(spec, boson_range):
    """Filter the full product space by the sector's defining constraints."""
    out = []
    occ_values = (0, 1) if spec.species is Species.FERMION else boson_range
    for occ in product(occ_values, repeat=spec.L):
        for bits in product((0, 1), repeat=spec.L):
            state = FockState(occ, bits)
            n_total = sum(occ) + sum(bits)
            if spec.N is not None and n_total != spec.N:
                continue
            if spec.parity is not None:
                want = 0 if spec.parity is Parity.EVEN else 1
                if n_total % 2 != want:
                    continue
            if spec.n_max is not None and n_total > spec.n_max:
                continue
            if spec.nb_max is not None and sum(occ) > spec.nb_max:
                continue
            out.append(state)
    return sorted(out, key=FockState.as_vector)


@pytest.mark.parametrize(
    "spec, boson_range",
    [
        (SectorSpec(Species.FERMION, Mixing.JC, L=3, N=2), (0, 1)),
        (SectorSpec(Species.FERMION, Mixing.JC, L=4, N=4), (0, 1)),
        (SectorSpec(Species.FERMION, Mixing.RABI, L=3, parity=Parity.EVEN), (0, 1)),
        (SectorSpec(Species.FERMION, Mixing.RABI, L=3, parity=Parity.ODD), (0, 1)),
        (SectorSpec(Species.FERMION, Mixing.RABI, L=3), (0, 1)),
        (SectorSpec(Species.BOSON, Mixing.JC, L=2, N=3), range(4)),
        (SectorSpec(Species.BOSON, Mixing.JC, L=3, n_max=2), range(3)),
        (SectorSpec(Species.BOSON, Mixing.RABI, L=2, nb_max=3), range(4)),
        (SectorSpec(Species.BOSON, Mixing.RABI, L=2, n_max=3), range(4)),
    ],
)
def test_enumeration_matches_brute_force_filter(spec, boson_range):
    basis = enumerate_sector(spec)
    assert list(basis.states) == brute_force_states(spec, boson_range)


def test_jc_fermion_half_filling_dimension():
    spec = SectorSpec(Species.FERMION, Mixing.JC, L=10, N=5)
    assert sector_dimension(spec) == math.comb(20, 5) == 15504


def test_rabi_fermion_parity_sector_dimension():
    spec = SectorSpec(Species.FERMION, Mixing.RABI, L=7, parity=Parity.EVEN)
    assert sector_dimension(spec) == 2**13 == 8192


def test_jc_boson_small_sector_by_hand():
    # L=2, N=1: one boson on either site, or one qubit flipped.
    basis = enumerate_sector(SectorSpec(Species.BOSON, Mixing.JC, L=2, N=1))
    assert set(basis.states) == {
        FockState((0, 0), (0, 1)),
        FockState((0, 0), (1, 0)),
        FockState((0, 1), (0, 0)),
        FockState((1, 0), (0, 0)),
    }


def test_jc_boson_dimension_closed_form():
    for L, N in [(2, 3), (3, 2), (4, 4)]:
        basis = enumerate_sector(SectorSpec(Species.BOSON, Mixing.JC, L=L, N=N))
        assert len(basis) == jc_boson_dimension(L, N)


def test_rabi_boson_nb_max_dimension():
    spec = SectorSpec(Species.BOSON, Mixing.RABI, L=3, nb_max=2)
    # compositions of 0,1,2 bosons on 3 sites times 8 qubit patterns
    assert sector_dimension(spec) == (1 + 3 + 6) * 8
    assert len(enumerate_sector(spec)) == sector_dimension(spec)


def test_fixed_qubit_pattern_restricts_patterns():
    spec = SectorSpec(
        Species.BOSON, Mixing.RABI, L=2, nb_max=2, fixed_qubit_pattern=(1, 0)
    )
    basis = enumerate_sector(spec)
    assert all(s.qubits == (1, 0) for s in basis)
    assert len(basis) == math.comb(2 + 2, 2)


jc_fermion_specs = st.integers(2, 5).flatmap(
    lambda L: st.integers(0, 2 * L - 1).map(
        lambda N: SectorSpec(Species.FERMION, Mixing.JC, L=L, N=N)
    )
)


@settings(max_examples=25, deadline=None)
@given(jc_fermion_specs)
def test_index_state_bijection(spec):
    basis = enumerate_sector(spec)
    assert len(basis) == sector_dimension(spec)
    for k in range(len(basis)):
        assert basis.index_of(basis.state_at(k)) == k
    seen = set(basis.states)
    assert len(seen) == len(basis)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.sampled_from([Parity.EVEN, Parity.ODD]))
def test_parity_sector_states_have_uniform_parity(L, parity):
    basis = enumerate_sector(
        SectorSpec(Species.FERMION, Mixing.RABI, L=L, parity=parity)
    )
    want = 0 if parity is Parity.EVEN else 1
    assert all(s.total_excitation % 2 == want for s in basis)
    assert len(basis) == 2 ** (2 * L - 1)


def test_states_sorted_lexicographically():
    basis = enumerate_sector(SectorSpec(Species.FERMION, Mixing.JC, L=4, N=3))
    vectors = [s.as_vector() for s in basis]
    assert vectors == sorted(vectors)


def test_lookup_returns_none_outside_sector():
    basis = enumerate_sector(SectorSpec(Species.FERMION, Mixing.JC, L=3, N=1))
    outside = FockState((1, 1, 0), (0, 0, 0))
    assert basis.lookup(outside) is None
    assert outside not in basis
    with pytest.raises(KeyError):
        basis.index_of(outside)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(species=Species.FERMION, mixing=Mixing.RABI, L=3, N=2),
        dict(species=Species.FERMION, mixing=Mixing.JC, L=3, N=6),
        dict(species=Species.FERMION, mixing=Mixing.JC, L=3, n_max=2),
        dict(species=Species.FERMION, mixing=Mixing.JC, L=3, parity=Parity.EVEN),
        dict(species=Species.BOSON, mixing=Mixing.JC, L=3),
        dict(species=Species.BOSON, mixing=Mixing.RABI, L=3),
        dict(species=Species.BOSON, mixing=Mixing.RABI, L=3, n_max=2, nb_max=2),
        dict(species=Species.BOSON, mixing=Mixing.RABI, L=3, nb_max=2,
             fixed_qubit_pattern=(1, 0)),
        dict(species=Species.FERMION, mixing=Mixing.JC, L=0, N=0),
    ],
)
def test_inconsistent_specs_rejected(kwargs):
    with pytest.raises(SectorError):
        SectorSpec(**kwargs)


def test_memory_cap_enforced():
    spec = SectorSpec(Species.FERMION, Mixing.JC, L=10, N=5)
    with pytest.raises(DimensionCapError):
        enumerate_sector(spec, memory_cap=1000)


def test_basis_is_reusable_mapping():
    spec = SectorSpec(Species.FERMION, Mixing.JC, L=3, N=2)
    basis = Basis(spec, enumerate_sector(spec).states)
    assert [basis.lookup(s) for s in basis] == list(range(len(basis)))
