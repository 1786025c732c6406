"""Paraxial propagation of the transverse probe field.

The linear media (free space and the thermal vapor) are diagonal in the
transverse wavenumber, so each spectral mode evolves by the exact factor

    exp{ [-i k2/(2 k_p) + i (k_p/2) chi(k2)] dz }

and the only purpose of the z sampling is diagnostics and phase
unwrapping; there is no step-size error.  The Kerr comparison medium is
integrated with a symmetric split-step (half diffraction, full
nonlinear phase, half diffraction), guarded by an automatic
step-halving convergence check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericsError, PhysicsError
from .field import (
    BeamDiagnostics,
    TransverseField,
    _raw_power,
    diagnose,
    kperp2_grid,
    spectral_energy_fraction,
)
from .params import BeamConfig
from .susceptibility import ChiModel, attenuation_law, cancellation_density, chi, expansion, phase_law

FREE_SPACE = "free_space"
THERMAL_VAPOR = "thermal_vapor"
KERR = "kerr"

_MIN_SAMPLES = 64
_EXPANSION_ENERGY_WARN = 1e-6  # input energy fraction above k1 worth flagging
_NYQUIST_ENERGY_ERROR = 1e-3  # energy fraction beyond the grid Nyquist disc
_KERR_CHECK_REL = 1e-3  # step-halving acceptance for the split-step integrator
_RESIDUAL_PRECONDITION = 1e-2  # |cancellation residual| limit for analytic_reference


@dataclass(frozen=True)
class MediumSpec:
    """Propagation medium: free space, the thermal vapor, or a Kerr slab."""

    kind: str
    model: ChiModel | None = None  # thermal vapor only
    chi3: float | None = None  # Kerr only (s^2)

    def __post_init__(self) -> None:
        if self.kind not in (FREE_SPACE, THERMAL_VAPOR, KERR):
            raise ConfigError(f"unknown medium kind {self.kind!r}")
        if self.kind == THERMAL_VAPOR and self.model is None:
            raise ConfigError("thermal_vapor medium requires a ChiModel")
        if self.kind == KERR and not (self.chi3 is not None and math.isfinite(self.chi3)):
            raise ConfigError("kerr medium requires a finite chi3")

    @classmethod
    def free_space(cls) -> "MediumSpec":
        return cls(kind=FREE_SPACE)

    @classmethod
    def thermal_vapor(cls, model: ChiModel) -> "MediumSpec":
        return cls(kind=THERMAL_VAPOR, model=model)

    @classmethod
    def kerr(cls, chi3: float) -> "MediumSpec":
        return cls(kind=KERR, chi3=chi3)


@dataclass(frozen=True)
class Trajectory:
    """Diagnostics sampled along z, plus the final field."""

    samples: tuple[tuple[float, BeamDiagnostics], ...]
    final: TransverseField

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(d, name) for _, d in self.samples])

    @property
    def z(self) -> np.ndarray:
        return np.array([z for z, _ in self.samples])

    @property
    def end(self) -> BeamDiagnostics:
        return self.samples[-1][1]


def _corner_mask(n: int, dx: float) -> np.ndarray:
    """Spectral modes beyond the Nyquist disc |k| > pi/dx (the aliasing corners)."""
    nyquist = math.pi / dx
    return kperp2_grid(n, dx) > nyquist**2


def _check_corners(spectrum: np.ndarray, mask: np.ndarray, z: float) -> None:
    energy = np.abs(spectrum) ** 2
    total = float(energy.sum())
    if total == 0.0:
        return
    fraction = float(energy[mask].sum()) / total
    if fraction > _NYQUIST_ENERGY_ERROR:
        raise NumericsError(
            f"{fraction:.2e} of the beam energy sits beyond the grid Nyquist disc "
            f"at z = {z:.4g} m; enlarge the grid or reduce the propagation length"
        )


def propagate_linear(
    f: TransverseField,
    medium: MediumSpec,
    z_end: float,
    n_samples: int,
    beam: BeamConfig,
) -> Trajectory:
    """Exact spectral propagation through a k-perp-diagonal linear medium.

    Free space uses chi = 0.  Diagnostics (including the unwrapped axis
    phase) are recorded at ``n_samples`` evenly spaced planes; the
    endpoint field is independent of the sampling because each mode is
    advanced by the exact exponential factor.
    """
    if medium.kind not in (FREE_SPACE, THERMAL_VAPOR):
        raise ConfigError(f"propagate_linear cannot handle medium kind {medium.kind!r}")
    if n_samples < _MIN_SAMPLES:
        raise ConfigError(f"n_samples must be >= {_MIN_SAMPLES} for reliable unwrapping")
    if not (math.isfinite(z_end) and z_end > 0):
        raise ConfigError(f"z_end must be finite and > 0, got {z_end!r}")
    z_grid = np.linspace(0.0, z_end, n_samples + 1)[1:]
    return _propagate_linear_grid(f, medium, z_grid, beam)


def _propagate_linear_grid(
    f: TransverseField,
    medium: MediumSpec,
    z_grid: np.ndarray,
    beam: BeamConfig,
) -> Trajectory:
    n, dx, k_p = f.n, f.dx, f.k_p
    k2 = kperp2_grid(n, dx)

    if medium.kind == THERMAL_VAPOR:
        model = medium.model
        chi_grid = chi(k2, model, model.drive)
        k1 = expansion(model, model.drive).k1
        fraction = spectral_energy_fraction(f, k1)
        if fraction >= _EXPANSION_ENERGY_WARN:
            warnings.warn(
                f"{fraction:.2e} of the input energy lies above k1 = {k1:.4g} 1/m, "
                "outside the quadratic-expansion regime of the vapor response",
                stacklevel=3,
            )
    else:
        chi_grid = np.zeros_like(k2, dtype=complex)

    step_op = -1j * k2 / (2.0 * k_p) + 0.5j * k_p * chi_grid
    corner = _corner_mask(n, dx)

    power_ref = _raw_power(f)
    samples = [(0.0, diagnose(f, beam, prev_phase=0.0, power_ref=power_ref))]
    prev_phase = samples[0][1].axis_phase

    spectrum = np.fft.fft2(f.data, norm="ortho")
    z_prev = 0.0
    snapshot = f
    for z_i in z_grid:
        spectrum = spectrum * np.exp(step_op * (z_i - z_prev))
        _check_corners(spectrum, corner, z_i)
        snapshot = TransverseField(
            data=np.fft.ifft2(spectrum, norm="ortho"), dx=dx, z=float(z_i), k_p=k_p
        )
        diag = diagnose(snapshot, beam, prev_phase=prev_phase, power_ref=power_ref)
        prev_phase = diag.axis_phase
        samples.append((float(z_i), diag))
        z_prev = z_i

    return Trajectory(samples=tuple(samples), final=snapshot)


# =====================================================================
# Kerr comparison medium
# =====================================================================


def propagate_kerr(
    f: TransverseField,
    chi3: float,
    z_end: float,
    steps: int,
    beam: BeamConfig,
    convergence_check: bool = True,
) -> Trajectory:
    """Symmetric split-step propagation through a Kerr medium.

    Per step: half diffraction in the spectrum, the full nonlinear phase
    exp[i (k_p/2) chi3 |Omega|^2 dz] in space, half diffraction.  With
    ``convergence_check`` on (the default), the run is repeated at twice
    the step count and the endpoint power, width, and axis phase must
    agree to 0.1%, otherwise a NumericsError asks for more steps.
    """
    if steps < 2:
        raise ConfigError(f"split-step propagation needs at least 2 steps, got {steps}")
    if not (math.isfinite(z_end) and z_end > 0):
        raise ConfigError(f"z_end must be finite and > 0, got {z_end!r}")
    base = _kerr_run(f, chi3, z_end, steps, beam)
    if convergence_check:
        fine = _kerr_run(f, chi3, z_end, 2 * steps, beam)
        drift = _endpoint_drift(base.end, fine.end)
        if drift > _KERR_CHECK_REL:
            raise NumericsError(
                f"split-step not converged: halving the step moves the endpoint "
                f"diagnostics by {drift:.2e} (limit {_KERR_CHECK_REL:g}); increase steps"
            )
    return base


def _endpoint_drift(a: BeamDiagnostics, b: BeamDiagnostics) -> float:
    power = abs(a.power - b.power) / max(abs(b.power), 1e-30)
    width = abs(a.width - b.width) / max(abs(b.width), 1e-30)
    phase = abs(a.axis_phase - b.axis_phase) / max(abs(b.axis_phase), 1.0)
    return max(power, width, phase)


def _kerr_run(
    f: TransverseField, chi3: float, z_end: float, steps: int, beam: BeamConfig
) -> Trajectory:
    n, dx, k_p = f.n, f.dx, f.k_p
    dz = z_end / steps
    k2 = kperp2_grid(n, dx)
    half_diffraction = np.exp(-1j * k2 * dz / (4.0 * k_p))
    corner = _corner_mask(n, dx)

    power_ref = _raw_power(f)
    samples = [(0.0, diagnose(f, beam, prev_phase=0.0, power_ref=power_ref))]
    prev_phase = samples[0][1].axis_phase

    data = f.data.copy()
    snapshot = f
    for i in range(1, steps + 1):
        spectrum = np.fft.fft2(data, norm="ortho") * half_diffraction
        data = np.fft.ifft2(spectrum, norm="ortho")
        data *= np.exp(0.5j * k_p * chi3 * np.abs(data) ** 2 * dz)
        spectrum = np.fft.fft2(data, norm="ortho") * half_diffraction
        _check_corners(spectrum, corner, i * dz)
        data = np.fft.ifft2(spectrum, norm="ortho")

        snapshot = TransverseField(data=data.copy(), dx=dx, z=i * dz, k_p=k_p)
        diag = diagnose(snapshot, beam, prev_phase=prev_phase, power_ref=power_ref)
        prev_phase = diag.axis_phase
        samples.append((i * dz, diag))

    return Trajectory(samples=tuple(samples), final=snapshot)


# =====================================================================
# Analytic cross-check at exact cancellation
# =====================================================================


def analytic_reference(
    beam: BeamConfig, medium: MediumSpec, z: float
) -> tuple[float, float]:
    """Closed-form (power, phase) of the uniform-evolution solution.

    Valid only near exact diffraction cancellation, where the medium
    advances every mode by the same factor: requires the cancellation
    residual to be below 1e-2.
    """
    if medium.kind != THERMAL_VAPOR:
        raise ConfigError("analytic_reference is defined for the thermal vapor only")
    model = medium.model
    exp = expansion(model, model.drive)
    report = cancellation_density(model.atom, model.vapor, model.drive, exp)
    if abs(report.residual) >= _RESIDUAL_PRECONDITION:
        raise PhysicsError(
            f"analytic reference needs |cancellation residual| < {_RESIDUAL_PRECONDITION:g}, "
            f"got {report.residual:.3e}; retune the detuning, pump, or density"
        )
    power = math.exp(attenuation_law(model, exp, z))
    phase = phase_law(model, exp, z)
    return power, phase
