"""Transverse complex field grids, spectral transforms, and beam diagnostics.

The field lives on a square N x N grid with the beam axis at the exact
center pixel (index N//2 on both axes, coordinate 0).  Transforms are
unitary ("ortho" normalization), so spatial and spectral power agree to
rounding.  Diagnostics report power relative to the input beam, the
fitted Gaussian amplitude 1/sqrt(e) radius, the continuously unwrapped
on-axis phase, and the transverse phase-uniformity figure
(phi[0,0] - phi[w_p,w_p]) / (phi[0,0] + phi[w_p,w_p]).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import ConfigError, NumericsError
from .params import BeamConfig

_UNWRAP_LIMIT = 0.5 * math.pi  # diagnose() precondition on the phase step
_ZERO_PHASE = 1e-9  # both phases below this: uniformity defined as 0


@dataclass(frozen=True)
class TransverseField:
    """Complex probe envelope Omega_p on an N x N transverse grid."""

    data: np.ndarray  # complex amplitude (rad/s); axis 0 is y, axis 1 is x
    dx: float  # grid spacing (m)
    z: float  # propagation distance of this snapshot (m)
    k_p: float  # probe wavenumber 2*pi/lambda_p (rad/m)

    def __post_init__(self) -> None:
        n = self.data.shape[0]
        if self.data.ndim != 2 or self.data.shape[1] != n:
            raise ConfigError(f"field grid must be square, got shape {self.data.shape}")
        if n < 2 or (n & (n - 1)) != 0:
            raise ConfigError(f"field grid size must be a power of two, got {n}")
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise ConfigError(f"field dx must be finite and > 0, got {self.dx!r}")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def coords(self) -> np.ndarray:
        """1-D coordinate axis (m), zero at the center pixel."""
        n = self.n
        return (np.arange(n) - n // 2) * self.dx


@dataclass(frozen=True)
class SpectralField:
    """Unitary 2-D Fourier transform of a TransverseField (unshifted layout)."""

    data: np.ndarray
    dk: float  # spectral spacing 2*pi/(N dx) (rad/m)
    z: float
    k_p: float
    dx: float  # original spatial spacing, kept for the inverse


@dataclass(frozen=True)
class BeamDiagnostics:
    """Scalar beam metrics extracted from one field snapshot."""

    power: float  # integrated |Omega|^2, relative to the input beam
    width: float  # fitted Gaussian amplitude 1/sqrt(e) radius (m)
    axis_phase: float  # unwrapped phase at the grid center (rad)
    uniformity: float  # (phi_center - phi_diag) / (phi_center + phi_diag)
    width_moment: float  # second-moment width sqrt(2 <x^2>) (m), diagnostics only


def gaussian(beam: BeamConfig, n: int = 512, window: float | None = None) -> TransverseField:
    """Sample the input Gaussian ``omega_p0 exp(-r^2/(2 w_p^2))`` on the grid.

    ``window`` is the full transverse extent (m); it defaults to 16 w_p
    and must be at least 8 w_p so the tails stay below rounding at the
    edges after the intended <= 2 z_R of spreading.
    """
    if window is None:
        window = 16.0 * beam.w_p
    if n < 64:
        raise ConfigError(f"grid must have at least 64 points, got {n}")
    if (n & (n - 1)) != 0:
        raise ConfigError(f"grid size must be a power of two, got {n}")
    if window < 8.0 * beam.w_p:
        raise ConfigError(
            f"window {window:g} m is below 8 w_p = {8 * beam.w_p:g} m; widen it to avoid wraparound"
        )
    dx = window / n
    x = (np.arange(n) - n // 2) * dx
    xx, yy = np.meshgrid(x, x)
    data = beam.omega_p0 * np.exp(-(xx**2 + yy**2) / (2.0 * beam.w_p**2)) + 0j
    return TransverseField(data=data, dx=dx, z=0.0, k_p=beam.k_p)


# =====================================================================
# Spectral transforms
# =====================================================================


def to_spectrum(f: TransverseField) -> SpectralField:
    n = f.n
    return SpectralField(
        data=np.fft.fft2(f.data, norm="ortho"),
        dk=2.0 * math.pi / (n * f.dx),
        z=f.z,
        k_p=f.k_p,
        dx=f.dx,
    )


def from_spectrum(s: SpectralField) -> TransverseField:
    return TransverseField(
        data=np.fft.ifft2(s.data, norm="ortho"),
        dx=s.dx,
        z=s.z,
        k_p=s.k_p,
    )


def kperp2_grid(n: int, dx: float) -> np.ndarray:
    """Squared transverse wavenumber on the unshifted FFT layout (rad^2/m^2)."""
    k = 2.0 * math.pi * np.fft.fftfreq(n, d=dx)
    kx, ky = np.meshgrid(k, k)
    return kx**2 + ky**2


# =====================================================================
# Diagnostics
# =====================================================================


def _bilinear(data: np.ndarray, row: float, col: float) -> complex:
    r0, c0 = int(math.floor(row)), int(math.floor(col))
    fr, fc = row - r0, col - c0
    block = data[r0 : r0 + 2, c0 : c0 + 2]
    return complex(
        block[0, 0] * (1 - fr) * (1 - fc)
        + block[1, 0] * fr * (1 - fc)
        + block[0, 1] * (1 - fr) * fc
        + block[1, 1] * fr * fc
    )


def _raw_power(f: TransverseField) -> float:
    intensity = np.abs(f.data) ** 2
    return float(np.trapezoid(np.trapezoid(intensity, dx=f.dx, axis=1), dx=f.dx))


def _gaussian_amplitude(x, amp, width):
    return amp * np.exp(-(x**2) / (2.0 * width**2))


def diagnose(
    f: TransverseField,
    beam: BeamConfig,
    prev_phase: float = 0.0,
    power_ref: float | None = None,
) -> BeamDiagnostics:
    """Extract beam metrics from one snapshot.

    ``prev_phase`` is the unwrapped on-axis phase of the previous
    snapshot; the caller must sample densely enough that the true phase
    advances by less than pi/2 between snapshots, otherwise a
    NumericsError is raised rather than returning a silently aliased
    phase.  ``power_ref`` overrides the analytic input-beam power
    pi w_p^2 omega_p0^2 as the normalization reference.
    """
    n = f.n
    center = n // 2
    x = f.coords()

    if power_ref is None:
        power_ref = math.pi * beam.w_p**2 * beam.omega_p0**2
    power = _raw_power(f) / power_ref

    intensity = np.abs(f.data) ** 2
    total = float(intensity.sum())
    if total <= 0:
        raise NumericsError("field has no power; diagnostics undefined")
    second_moment = float((intensity * x[None, :] ** 2).sum()) / total
    width_moment = math.sqrt(2.0 * second_moment)

    row = np.abs(f.data[center, :])
    try:
        with warnings.catch_warnings():
            # an exact Gaussian fits with zero residual and a singular
            # covariance estimate; only the parameters matter here
            warnings.simplefilter("ignore", optimize.OptimizeWarning)
            popt, _ = optimize.curve_fit(
                _gaussian_amplitude, x, row, p0=(float(row.max()), beam.w_p)
            )
    except RuntimeError as exc:
        raise NumericsError(f"Gaussian width fit did not converge: {exc}") from exc
    width = abs(float(popt[1]))

    raw_phase = math.atan2(f.data[center, center].imag, f.data[center, center].real)
    axis_phase = raw_phase + 2.0 * math.pi * round((prev_phase - raw_phase) / (2.0 * math.pi))
    if abs(axis_phase - prev_phase) >= _UNWRAP_LIMIT:
        raise NumericsError(
            f"on-axis phase stepped by {axis_phase - prev_phase:+.3f} rad >= pi/2 "
            "between snapshots; increase the sampling density"
        )

    offset = beam.w_p / f.dx
    diag_value = _bilinear(f.data, center + offset, center + offset)
    raw_diag = math.atan2(diag_value.imag, diag_value.real)
    diag_phase = raw_diag + 2.0 * math.pi * round((axis_phase - raw_diag) / (2.0 * math.pi))
    if abs(axis_phase) < _ZERO_PHASE and abs(diag_phase) < _ZERO_PHASE:
        uniformity = 0.0
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            uniformity = float(
                np.float64(axis_phase - diag_phase) / np.float64(axis_phase + diag_phase)
            )

    return BeamDiagnostics(
        power=power,
        width=width,
        axis_phase=axis_phase,
        uniformity=uniformity,
        width_moment=width_moment,
    )


def spectral_energy_fraction(f: TransverseField, k_cut: float) -> float:
    """Fraction of spectral energy at transverse wavenumbers above ``k_cut``."""
    s = to_spectrum(f)
    energy = np.abs(s.data) ** 2
    total = float(energy.sum())
    if total == 0.0:
        return 0.0
    mask = kperp2_grid(f.n, f.dx) > k_cut**2
    return float(energy[mask].sum()) / total


def rotate90(f: TransverseField) -> TransverseField:
    """Rotate the grid by 90 degrees about the center pixel.

    Uses a modular index permutation that keeps the center pixel fixed
    (plain array rotation would shift it by one on even grids and break
    exact isotropy checks).
    """
    n = f.n
    center = n // 2
    cols = (2 * center - np.arange(n)) % n
    rotated = np.ascontiguousarray(f.data.T[:, cols])
    return TransverseField(data=rotated, dx=f.dx, z=f.z, k_p=f.k_p)


# =====================================================================
# CSV export
# =====================================================================


def field_csv(f: TransverseField, path) -> None:
    """Write the full complex field as x,y,re,im rows (17 significant digits)."""
    _write_grid_csv(f, path, "x,y,re,im", lambda v: f"{v.real:.17g},{v.imag:.17g}")


def phase_map_csv(f: TransverseField, path) -> None:
    """Write the wrapped phase map as x,y,phase rows."""
    _write_grid_csv(f, path, "x,y,phase", lambda v: f"{math.atan2(v.imag, v.real):.17g}")


def _write_grid_csv(f: TransverseField, path, header: str, fmt) -> None:
    x = f.coords()
    with open(path, "w", newline="") as handle:
        handle.write(header + "\n")
        for iy in range(f.n):
            y = x[iy]
            row = f.data[iy]
            for ix in range(f.n):
                handle.write(f"{x[ix]:.17g},{y:.17g},{fmt(row[ix])}\n")
