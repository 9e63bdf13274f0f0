"""Closed-form spectra, Thouless-time estimators, scaling fits and the
impurity bound state."""

import math

import numpy as np
import pytest

from kickedmix.analytic import (
    ThoulessMethod,
    crossover_scales,
    degenerate_sum_condition,
    dyson_bound_states,
    extrapolate_lambda1,
    fit_scaling,
    impurity_chain_eigenvalues,
    jc_n1_eigenvalues,
    rabi_fermion_lambda1,
    thouless_estimate,
    thouless_from_degenerate_sum,
    thouless_from_lambda1,
    thouless_from_sff_curve,
)
from kickedmix.basis import Mixing, SectorSpec, Species, enumerate_sector
from kickedmix.model import ModelParams
from kickedmix.sff import SpectralSeries
from kickedmix.stochastic import map_spectrum, trotter_generating_map


def test_single_excitation_eigenvalues_match_trotter_map():
    for g, J in [(0.1, 0.4), (0.4, 0.1)]:
        for L in (4, 5, 9):
            spec = SectorSpec(Species.FERMION, Mixing.JC, L=L, N=1)
            basis = enumerate_sector(spec)
            M = trotter_generating_map(ModelParams(spec=spec, g=g, J=J), basis)
            numeric = np.sort(np.linalg.eigvalsh(M.matrix))[::-1]
            analytic = np.sort(jc_n1_eigenvalues(L, g, J))[::-1]
            np.testing.assert_allclose(numeric, analytic, atol=1e-12)


def test_single_excitation_eigenvalue_count_and_top():
    ev = jc_n1_eigenvalues(6, 0.1, 0.4)
    assert len(ev) == 12
    assert ev.max() == pytest.approx(1.0)


def test_crossover_length_inverts_the_dispersion():
    scales = crossover_scales(0.1, 0.4)
    # l_c is where the lattice mode's gap matches the mixing gap:
    # sqrt(2) J sin(pi / l_c) = g
    assert math.sqrt(2) * 0.4 * math.sin(math.pi / scales.l_c) == pytest.approx(0.1)
    assert crossover_scales(0.9, 0.4).l_c == 0.0


def test_thouless_from_lambda1_inverts_exponential():
    lam = math.exp(-1.0 / 123.4)
    assert thouless_from_lambda1(lam).t_star == pytest.approx(123.4)


def test_degenerate_sum_root_solves_the_condition():
    for L in (6, 8, 10):
        est = thouless_from_degenerate_sum(L, 0.1, 0.4)
        assert degenerate_sum_condition(est.t_star, L, 0.1, 0.4) == pytest.approx(
            1.0, abs=1e-4
        )
        assert est.method is ThoulessMethod.FROM_DEGENERATE_SUM


def test_thouless_from_sff_curve_finds_first_stable_window():
    t = np.arange(1, 61)
    ratio = np.where(t < 30, 1.2, 1.01)  # settles to within 5% at t = 30
    series = SpectralSeries(t_grid=t, K=2 * t * ratio, dim=100,
                            realizations=0, label="synthetic")
    est = thouless_from_sff_curve(series, eps=0.05, window=5)
    assert est.t_star == 30
    with pytest.raises(RuntimeError):
        thouless_from_sff_curve(series, eps=0.001, window=5)


def test_thouless_estimate_dispatch():
    lam = math.exp(-1.0 / 50.0)
    est = thouless_estimate(ThoulessMethod.FROM_LAMBDA1, lambda1=lam)
    assert est.t_star == pytest.approx(50.0)


def test_fit_scaling_recovers_log_shift():
    a, b, c = 120.0, 0.1, -60.0
    points = [(L, a * math.log(L + b) + c) for L in (6, 8, 10, 12)]
    fit = fit_scaling(points, "log_shift")
    assert fit.params[0] == pytest.approx(a, rel=1e-6)
    assert fit.params[1] == pytest.approx(b, abs=1e-6)
    assert fit.params[2] == pytest.approx(c, rel=1e-6)
    assert fit.r_squared == pytest.approx(1.0)


def test_fit_scaling_recovers_power_law():
    points = [(L, 3.0 * L**1.85) for L in (4, 6, 8, 10)]
    fit = fit_scaling(points, "power")
    assert fit.params[0] == pytest.approx(3.0, rel=1e-10)
    assert fit.params[1] == pytest.approx(1.85, rel=1e-10)
    with pytest.raises(ValueError):
        fit_scaling(points, "quadratic")
    with pytest.raises(ValueError):
        fit_scaling(points[:2], "power")


def test_bound_state_matches_impurity_chain():
    pair = dyson_bound_states(0.4, 0.1)
    chain = impurity_chain_eigenvalues(0.4, 0.1, 400)
    assert chain[0] == pytest.approx(pair.E_b_plus, abs=1e-6)
    assert pair.E_b_minus < pair.E_b_plus


def test_bound_state_reduces_to_band_edges_at_zero_coupling():
    pair = dyson_bound_states(0.0, 0.3)
    # g = 0: no impurity, the "bound states" sit at the band edges 1 and
    # 1 - 4 J^2 of the shifted tight-binding band.
    assert pair.E_b_plus == pytest.approx(1.0)
    assert pair.E_b_minus == pytest.approx(1.0 - 4 * 0.3**2)


def test_rabi_branches_cross_at_critical_ratio():
    J = 0.3
    g = J * math.sqrt(2.0 / 3.0)
    flipped = 1.0 - 2.0 * g * g
    bound = dyson_bound_states(g, J).E_b_plus
    assert abs(flipped - bound) < 1e-12
    lam_below, deg_below = rabi_fermion_lambda1(0.5 * J, J, L=6)
    lam_above, deg_above = rabi_fermion_lambda1(4.0 * J, J, L=6)
    assert deg_below == 7 and deg_above == 6
    assert lam_below == pytest.approx(1.0 - 2.0 * (0.5 * J) ** 2)


def test_extrapolation_recovers_exact_linear_data():
    slope, intercept = -0.2, 0.93
    points = [(n, intercept + slope / n) for n in (4, 5, 6, 7, 8)]
    result = extrapolate_lambda1(points, last=3)
    assert result.intercept == pytest.approx(intercept, abs=1e-12)
    assert result.slope == pytest.approx(slope, abs=1e-12)
    assert result.points_used == 3
    with pytest.raises(ValueError):
        extrapolate_lambda1([(4, 0.9), (4, 0.91)])
