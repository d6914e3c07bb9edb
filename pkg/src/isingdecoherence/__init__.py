"""Exact disentanglement dynamics of two spins dephasing in a transverse-field Ising chain."""

__version__ = "0.1.0"

from .decoherence import (
    ApproxParams,
    FactorSeries,
    NumericalError,
    SingularApproximationError,
    cutoff_energy,
    factor_modulus,
    factor_series,
    mode_factor,
    partial_product,
    partial_sum_S,
    quartic_rates,
)
from .measures import (
    MeasureSeries,
    PureAmplitudes,
    WernerParams,
    concurrence_pure,
    concurrence_werner,
    disentanglement_time_analytic,
    disentanglement_time_numeric,
    negativity_eigen_oracle,
    negativity_pure_qutrit,
    negativity_werner_general,
    sudden_death_threshold,
)
from .spectrum import BranchSet, ChainConfig, ModeSpectrum, branch_lambdas, build_spectrum, small_k_frequency

__all__ = [
    "ApproxParams", "BranchSet", "ChainConfig", "FactorSeries", "MeasureSeries", "ModeSpectrum",
    "NumericalError", "PureAmplitudes", "SingularApproximationError", "WernerParams",
    "branch_lambdas", "build_spectrum", "concurrence_pure", "concurrence_werner", "cutoff_energy",
    "disentanglement_time_analytic", "disentanglement_time_numeric", "factor_modulus",
    "factor_series", "mode_factor", "negativity_eigen_oracle", "negativity_pure_qutrit",
    "negativity_werner_general", "partial_product", "partial_sum_S", "quartic_rates",
    "small_k_frequency", "sudden_death_threshold",
]
