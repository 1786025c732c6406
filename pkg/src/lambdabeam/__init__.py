"""Linear response of a pumped double-Lambda vapor and paraxial beam propagation.

The package computes the thermal-vapor susceptibility seen by a weak
probe, locates the operating point where the medium's quadratic
transverse-wavenumber response cancels paraxial diffraction, and
propagates Gaussian probe beams to demonstrate diffraction-free,
absorption-compensated pi-phase control.
"""

from .errors import ConfigError, LambdaBeamError, NumericsError, PhysicsError
from .field import (
    BeamDiagnostics,
    SpectralField,
    TransverseField,
    diagnose,
    field_csv,
    from_spectrum,
    gaussian,
    kperp2_grid,
    phase_map_csv,
    rotate90,
    spectral_energy_fraction,
    to_spectrum,
)
from .params import (
    BOLTZMANN,
    CHI3_DEFAULT,
    DELTA_K_DEFAULT,
    DELTA_TWO_PHOTON_DEFAULT,
    GAMMA_C_DEFAULT,
    GAMMA_D1,
    RB87_MASS,
    V_TH_DEFAULT,
    AtomSystem,
    BeamConfig,
    DriveConfig,
    GridConfig,
    RunControls,
    SimConfig,
    ValidityReport,
    VaporEnv,
    default_config,
    default_rb87_d1,
    load_config,
    parse_config,
    thermal_speed,
    validate,
    write_config,
)
from .propagation import (
    MediumSpec,
    Trajectory,
    analytic_reference,
    propagate_kerr,
    propagate_linear,
)
from .steadystate import SteadyState, steady_closed, steady_numeric
from .susceptibility import (
    CancellationReport,
    ChiModel,
    Expansion,
    Kernel31,
    attenuation_law,
    build_chi_model,
    cancellation_density,
    check_report,
    chi,
    detuning_for_rates,
    expansion,
    kernel31,
    optimal_detuning,
    phase_law,
)
from .experiments import (
    RunManifest,
    ScanSpec,
    figure3,
    figure4,
    figure5,
    figure6,
    figure7,
    resolve_config,
    run_config,
    run_scan,
    scan_2d,
    scan_control,
    scan_pump,
)
from .version import __version__

__all__ = [
    "BOLTZMANN",
    "CHI3_DEFAULT",
    "DELTA_K_DEFAULT",
    "DELTA_TWO_PHOTON_DEFAULT",
    "GAMMA_C_DEFAULT",
    "GAMMA_D1",
    "RB87_MASS",
    "V_TH_DEFAULT",
    "AtomSystem",
    "BeamConfig",
    "BeamDiagnostics",
    "CancellationReport",
    "ChiModel",
    "ConfigError",
    "DriveConfig",
    "Expansion",
    "GridConfig",
    "Kernel31",
    "LambdaBeamError",
    "MediumSpec",
    "NumericsError",
    "PhysicsError",
    "RunControls",
    "RunManifest",
    "ScanSpec",
    "SimConfig",
    "SpectralField",
    "SteadyState",
    "Trajectory",
    "TransverseField",
    "ValidityReport",
    "VaporEnv",
    "__version__",
    "analytic_reference",
    "attenuation_law",
    "build_chi_model",
    "cancellation_density",
    "check_report",
    "chi",
    "default_config",
    "default_rb87_d1",
    "detuning_for_rates",
    "diagnose",
    "expansion",
    "field_csv",
    "figure3",
    "figure4",
    "figure5",
    "figure6",
    "figure7",
    "from_spectrum",
    "gaussian",
    "kernel31",
    "kperp2_grid",
    "load_config",
    "optimal_detuning",
    "parse_config",
    "phase_law",
    "phase_map_csv",
    "propagate_kerr",
    "propagate_linear",
    "resolve_config",
    "rotate90",
    "run_config",
    "run_scan",
    "scan_2d",
    "scan_control",
    "scan_pump",
    "spectral_energy_fraction",
    "steady_closed",
    "steady_numeric",
    "thermal_speed",
    "to_spectrum",
    "validate",
    "write_config",
]
