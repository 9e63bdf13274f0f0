"""Spectral form factors of periodically kicked lattice/qubit mixtures.

Four model variants — fermions or bosons hopping on a ring, coupled to one
qubit per site through number-conserving (JC) or parity-conserving (Rabi)
mixing — with exact Floquet form factors, doubly-stochastic map spectra,
random-phase form factors and the analytic spectral results that go with
them.
"""

from .basis import (
    Basis,
    DimensionCapError,
    FockState,
    Mixing,
    Parity,
    SectorError,
    SectorSpec,
    Species,
    enumerate_sector,
    sector_dimension,
)
from .model import (
    DisorderRealization,
    ModelParams,
    build_driving_matrix,
    build_phase_vector,
    draw_disorder,
    propagator,
)
from .sff import (
    SpectralSeries,
    coe_reference,
    compute_exact_sff,
    default_t_grid,
    floquet_eigenphases,
)
from .stochastic import (
    MapSpectrum,
    StochasticMap,
    SymmetryCheck,
    SymmetryReport,
    full_map,
    full_map_spectrum,
    lambda1_across_N,
    map_spectrum,
    rpa_sff,
    stochastic_map_from_unitary,
    symmetry_report,
    trotter_generating_map,
)
from .analytic import (
    BoundStatePair,
    CrossoverScales,
    ExtrapolationResult,
    ScalingFit,
    ThoulessEstimate,
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

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "BoundStatePair",
    "CrossoverScales",
    "DimensionCapError",
    "DisorderRealization",
    "ExtrapolationResult",
    "FockState",
    "MapSpectrum",
    "Mixing",
    "ModelParams",
    "Parity",
    "ScalingFit",
    "SectorError",
    "SectorSpec",
    "Species",
    "SpectralSeries",
    "StochasticMap",
    "SymmetryCheck",
    "SymmetryReport",
    "ThoulessEstimate",
    "ThoulessMethod",
    "build_driving_matrix",
    "build_phase_vector",
    "coe_reference",
    "compute_exact_sff",
    "crossover_scales",
    "default_t_grid",
    "degenerate_sum_condition",
    "draw_disorder",
    "dyson_bound_states",
    "enumerate_sector",
    "extrapolate_lambda1",
    "fit_scaling",
    "floquet_eigenphases",
    "full_map",
    "full_map_spectrum",
    "impurity_chain_eigenvalues",
    "jc_n1_eigenvalues",
    "lambda1_across_N",
    "map_spectrum",
    "propagator",
    "rabi_fermion_lambda1",
    "rpa_sff",
    "sector_dimension",
    "stochastic_map_from_unitary",
    "symmetry_report",
    "thouless_estimate",
    "thouless_from_degenerate_sum",
    "thouless_from_lambda1",
    "thouless_from_sff_curve",
    "trotter_generating_map",
]
