"""Branched flow of waves and particles in fluctuating random potentials.

Quantum units throughout: the potential's correlation length is the unit of
length, and times are measured so a unit-momentum particle crosses one
correlation length per unit time. The classical dynamics then depends on
(v0, tau) only through vtilde = v0 * tau^2.
"""

from .analysis import (
    ChiResult,
    TimeScales,
    chi_indicator,
    extract_tb,
    extract_te,
    fit_power_law,
)
from .classical import ParticleEnsemble, init_ensemble, integrate_ensemble, verlet_step
from .config import DEFAULTS, PAPER_SCALE, RunConfig, resolve_config
from .errors import (
    BranchedFlowError,
    ConfigError,
    DomainError,
    GridResolutionError,
    NumericalInstabilityError,
)
from .io import (
    GridFile,
    read_grid,
    read_observable_csv,
    read_table_csv,
    write_observable_csv,
    write_potential_grid,
    write_raster,
    write_sweep_csv,
    write_timescales_csv,
)
from .potential import (
    CorrelationSpec,
    EmpiricalCorrelation,
    PotentialRealization,
    SimulationGrid,
    empirical_correlation,
    make_grid,
    sample_realization,
)
from .presets import B_SERIES, Q_SERIES, ParameterPoint, get_preset, list_presets
from .quantum import (
    WaveState,
    init_gaussian,
    init_plane_wave,
    propagate_and_observe,
    propagate_raster,
    scintillation,
    split_step,
)
from .runner import PointResult, SweepResult, run_point, run_sweep
from .series import ObservableSeries
from .whitenoise import (
    AnalyticParams,
    TransientEstimate,
    WN_VALIDITY_VTILDE,
    branching_time,
    branching_time_rescaled,
    energy_time,
    energy_time_rescaled,
    ek_random_force,
    ek_white_noise,
    rf_kinetic_energy,
    sigma2_white_noise,
    transient_time_estimate,
    wn_kinetic_energy,
    wn_sigma2,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticParams",
    "B_SERIES",
    "BranchedFlowError",
    "ChiResult",
    "ConfigError",
    "CorrelationSpec",
    "DEFAULTS",
    "DomainError",
    "EmpiricalCorrelation",
    "GridFile",
    "GridResolutionError",
    "NumericalInstabilityError",
    "ObservableSeries",
    "PAPER_SCALE",
    "ParameterPoint",
    "ParticleEnsemble",
    "PointResult",
    "PotentialRealization",
    "Q_SERIES",
    "RunConfig",
    "SimulationGrid",
    "SweepResult",
    "TimeScales",
    "TransientEstimate",
    "WN_VALIDITY_VTILDE",
    "WaveState",
    "branching_time",
    "branching_time_rescaled",
    "chi_indicator",
    "ek_random_force",
    "ek_white_noise",
    "empirical_correlation",
    "energy_time",
    "energy_time_rescaled",
    "extract_tb",
    "extract_te",
    "fit_power_law",
    "get_preset",
    "init_ensemble",
    "init_gaussian",
    "init_plane_wave",
    "integrate_ensemble",
    "list_presets",
    "make_grid",
    "propagate_and_observe",
    "propagate_raster",
    "read_grid",
    "read_observable_csv",
    "read_table_csv",
    "resolve_config",
    "rf_kinetic_energy",
    "run_point",
    "run_sweep",
    "sample_realization",
    "scintillation",
    "sigma2_white_noise",
    "split_step",
    "transient_time_estimate",
    "verlet_step",
    "wn_kinetic_energy",
    "wn_sigma2",
    "write_observable_csv",
    "write_potential_grid",
    "write_raster",
    "write_sweep_csv",
    "write_timescales_csv",
]
