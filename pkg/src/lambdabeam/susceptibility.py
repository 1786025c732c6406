"""Momentum-space linear susceptibility of the moving-atom vapor.

Thermal motion averages the ground-state coherence over the beam
profile, which turns the susceptibility into a function of the squared
transverse wavenumber,

    chi(k2) = i alpha (rho11 - rho33
              + [Gamma_c (rho11 - rho33) + i Omega_c rho23]
                / (i Delta - Gamma_1 - D k2)),

with the velocity-averaged kernel K31 entering alpha and the power
broadening Gamma_c = K31 Omega_c^2.  For small k2 this expands as
chi ~ c0 + c1 k2 / k1^2; choosing the two-photon detuning that makes
Im[c1] vanish removes wavenumber-dependent absorption (coherence
diffusion), and matching Re[c1] to the free diffraction term cancels
paraxial spreading outright.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import NumericsError, PhysicsError
from .params import AtomSystem, DriveConfig, VaporEnv
from .steadystate import SteadyState, steady_closed, steady_numeric

_QUAD_REL_TOL = 1e-10
_QUAD_ACCEPT = 1e-8  # reject if the reported quadrature error exceeds this (relative)
_FIXED_POINT_TOL = 1e-9  # in units of Gamma31
_FIXED_POINT_MAX_ITER = 100
_IM_C1_REL_TOL = 1e-6


# =====================================================================
# Velocity-averaged kernel
# =====================================================================


@dataclass(frozen=True)
class Kernel31:
    """Single-photon velocity integral g31 and the derived kernel K31 (s)."""

    g31: complex
    k31: complex  # i g31 / (1 - i gamma_c g31)
    k31_real: float  # real-part approximation used by default


def kernel31(atom: AtomSystem, vapor: VaporEnv, drive: DriveConfig) -> Kernel31:
    """Average the probe response over the Maxwell-Boltzmann velocity profile.

    g31 = integral dv F(v) / (delta_p - k_p v + i (p/2 + Gamma3/2 + gamma_c))
    with F the 1-D Maxwell-Boltzmann density.  Evaluated by adaptive
    Gauss-Kronrod quadrature on [-8 v_th, 8 v_th]; a dedicated branch
    handles the stationary (v_th = 0) limit.
    """
    gamma_eff = 0.5 * drive.pump_p + 0.5 * atom.Gamma3 + vapor.gamma_c
    v_th = vapor.v_th
    if v_th == 0.0:
        g31 = 1.0 / (drive.delta_p + 1j * gamma_eff)
    else:
        k_p = atom.k_p
        norm = 1.0 / (math.sqrt(math.pi) * v_th)

        def integrand(v: float) -> complex:
            return norm * math.exp(-((v / v_th) ** 2)) / (drive.delta_p - k_p * v + 1j * gamma_eff)

        g31, err = integrate.quad(
            integrand,
            -8.0 * v_th,
            8.0 * v_th,
            complex_func=True,
            epsabs=0.0,
            epsrel=_QUAD_REL_TOL,
            limit=200,
        )
        rel_err = abs(err) / abs(g31) if g31 != 0 else math.inf
        if not math.isfinite(rel_err) or rel_err > _QUAD_ACCEPT:
            raise NumericsError(
                f"velocity integral did not converge: estimated relative error {rel_err:.3e}"
            )
    k31 = 1j * g31 / (1.0 - 1j * vapor.gamma_c * g31)
    return Kernel31(g31=g31, k31=k31, k31_real=k31.real)


# =====================================================================
# Susceptibility model
# =====================================================================


@dataclass(frozen=True)
class ChiModel:
    """Everything chi(k2) needs, frozen for a given parameter point."""

    atom: AtomSystem
    vapor: VaporEnv
    drive: DriveConfig
    steady: SteadyState
    kernel: Kernel31
    alpha: complex  # dimensionless prefactor, real under the default real kernel
    gamma_cap_c: complex  # power broadening K31 Omega_c^2 (rad/s)
    gamma_cap_1: complex  # Gamma_c + p/2 + gamma21 (rad/s)
    diffusion_d: complex  # v_th^2 / (gamma_c + p/2 + gamma21 - i Delta)

    @property
    def gamma_c1(self) -> float:
        """gamma_c + p/2 + gamma21 (rad/s), the coherence-diffusion rate scale."""
        return self.vapor.gamma_c + 0.5 * self.drive.pump_p + self.atom.gamma21

    @property
    def raman_weight(self) -> complex:
        """Gamma_c (rho11 - rho33) + i Omega_c rho23, the dragged-coherence weight."""
        return (
            self.gamma_cap_c * self.steady.population_inversion
            + 1j * self.drive.omega_c * self.steady.rho23
        )


def build_chi_model(
    atom: AtomSystem,
    vapor: VaporEnv,
    drive: DriveConfig,
    steady: SteadyState | None = None,
    complex_kernel: bool = False,
) -> ChiModel:
    """Assemble a :class:`ChiModel` at one parameter point.

    The steady state defaults to the closed form; configurations the
    closed form rejects (off-resonant control, or the dark omega_c = 0
    pumped case) fall back to the numeric Liouvillian solve.  Setting
    ``complex_kernel`` retains the full complex K31 instead of the
    near-resonance real-part approximation.
    """
    if steady is None:
        try:
            steady = steady_closed(atom, drive)
        except PhysicsError:
            steady = steady_numeric(atom, drive)
    kern = kernel31(atom, vapor, drive)
    k31 = kern.k31 if complex_kernel else kern.k31_real
    alpha = 3.0 * atom.lambda_p**3 * atom.Gamma31 * k31 * vapor.n0 / (8.0 * math.pi**2)
    gamma_cap_c = k31 * drive.omega_c**2
    gamma_cap_1 = gamma_cap_c + 0.5 * drive.pump_p + atom.gamma21
    gamma_c1 = vapor.gamma_c + 0.5 * drive.pump_p + atom.gamma21
    diffusion_d = vapor.v_th**2 / (gamma_c1 - 1j * drive.delta)
    return ChiModel(
        atom=atom,
        vapor=vapor,
        drive=drive,
        steady=steady,
        kernel=kern,
        alpha=alpha,
        gamma_cap_c=gamma_cap_c,
        gamma_cap_1=gamma_cap_1,
        diffusion_d=diffusion_d,
    )


def chi(kperp2, model: ChiModel, drive: DriveConfig):
    """Linear susceptibility at squared transverse wavenumber(s) ``kperp2``.

    ``drive`` must be the drive the model was built from; it is accepted
    separately so the detuning dependence is explicit at call sites.
    Accepts scalars or arrays (m^-2) and returns matching complex values.
    """
    inversion = model.steady.population_inversion
    weight = model.gamma_cap_c * inversion + 1j * drive.omega_c * model.steady.rho23
    denom = 1j * drive.delta - model.gamma_cap_1 - model.diffusion_d * np.asarray(kperp2)
    value = 1j * model.alpha * (inversion + weight / denom)
    if np.ndim(kperp2) == 0:
        return complex(value)
    return value


@dataclass(frozen=True)
class Expansion:
    """Small-k2 expansion chi ~ c0 + c1 k2/k1^2 + O(k2^2)."""

    c0: complex  # uniform susceptibility: phase (Re) and gain/absorption (-Im)
    c1: complex  # quadratic coefficient in units of (k/k1)^2
    k1: float  # transverse momentum scale sqrt(Gamma_1 gamma_c1)/v_th (m^-1)
    gamma_c1: float  # gamma_c + p/2 + gamma21 (rad/s)
    k0: float | None  # no-pump momentum scale sqrt(Gamma_0 gamma_c)/v_th, p = 0 only


def expansion(model: ChiModel, drive: DriveConfig) -> Expansion:
    """Expand chi to quadratic order in the transverse wavenumber."""
    gamma_c1 = model.gamma_c1
    gamma_1 = model.gamma_cap_1
    c0 = chi(0.0, model, drive)
    denom = (gamma_c1 - 1j * drive.delta) * (1j * drive.delta - gamma_1) ** 2
    c1 = 1j * model.alpha * model.raman_weight * gamma_1 * gamma_c1 / denom
    k1 = math.sqrt((gamma_1 * gamma_c1).real) / model.vapor.v_th
    k0 = None
    if drive.pump_p == 0.0:
        gamma_0 = (model.gamma_cap_c + model.atom.gamma21).real
        k0 = math.sqrt(gamma_0 * model.vapor.gamma_c) / model.vapor.v_th
    return Expansion(c0=c0, c1=complex(c1), k1=k1, gamma_c1=gamma_c1, k0=k0)


# =====================================================================
# Operating-point solvers
# =====================================================================


def detuning_for_rates(gamma_cap_1: float, gamma_c1: float) -> float:
    """Two-photon detuning zeroing Im[c1] for fixed Gamma_1 and gamma_c1.

    Closed form: Delta = -Gamma_1 sqrt(gamma_c1 / (gamma_c1 + 2 Gamma_1)).
    At this detuning Re[(gamma_c1 - i Delta)(i Delta - Gamma_1)^2] = 0,
    which is exactly the Im[c1] = 0 condition for a real kernel.
    """
    return -gamma_cap_1 * math.sqrt(gamma_c1 / (gamma_c1 + 2.0 * gamma_cap_1))


def optimal_detuning(model: ChiModel) -> float:
    """Two-photon detuning that removes k2-dependent absorption.

    Gamma_1 itself depends weakly on Delta through the kernel K31
    (evaluated at delta_p = Delta + delta_c), so the closed form is
    iterated to a fixed point.  Converges in a few steps because
    |Delta| is far below the Doppler width.
    """
    atom, vapor, drive = model.atom, model.vapor, model.drive
    steady = model.steady  # independent of the two-photon detuning
    delta = detuning_for_rates(model.gamma_cap_1.real, model.gamma_c1)
    for _ in range(_FIXED_POINT_MAX_ITER):
        trial = drive.with_delta(delta)
        current = build_chi_model(atom, vapor, trial, steady=steady)
        updated = detuning_for_rates(current.gamma_cap_1.real, current.gamma_c1)
        if abs(updated - delta) < _FIXED_POINT_TOL * atom.Gamma31:
            exp = expansion(current, trial)
            rel = abs(exp.c1.imag) / abs(exp.c1) if exp.c1 != 0 else 0.0
            if rel > _IM_C1_REL_TOL:
                raise NumericsError(
                    f"optimal detuning left Im[c1]/|c1| = {rel:.3e} above {_IM_C1_REL_TOL:g}"
                )
            return updated
        delta = updated
    raise NumericsError(
        f"optimal-detuning fixed point did not converge in {_FIXED_POINT_MAX_ITER} iterations"
    )


class CancellationReport(NamedTuple):
    n0_star: float  # density solving the diffraction-cancellation condition (m^-3)
    residual: float  # k_p^2 Re[c1]/k1^2 - 1 at the configured density


def cancellation_density(
    atom: AtomSystem, vapor: VaporEnv, drive: DriveConfig, exp: Expansion
) -> CancellationReport:
    """Solve the diffraction-cancellation condition 1/k_p^2 = Re[c1]/k1^2 for n0.

    Re[c1] is linear in the density (through alpha), so the required
    density follows from one evaluation.  Raises PhysicsError when
    Re[c1] <= 0: with the wrong detuning sign the dragged coherence
    cannot counteract diffraction at any density.
    """
    re_c1 = exp.c1.real
    if re_c1 <= 0.0:
        raise PhysicsError(
            "diffraction cancellation impossible: Re[c1] <= 0 at this detuning "
            "(coherence dragging defocuses instead of focusing)"
        )
    ratio = atom.k_p**2 * re_c1 / exp.k1**2
    return CancellationReport(n0_star=vapor.n0 / ratio, residual=ratio - 1.0)


def phase_law(model: ChiModel, exp: Expansion, z: float) -> float:
    """On-axis phase (1/2) k_p Re[c0] z of the uniform-evolution solution.

    Shape- and intensity-independent; the numeric propagator is the
    ground truth this must match at exact cancellation.
    """
    return 0.5 * model.atom.k_p * exp.c0.real * z


def attenuation_law(model: ChiModel, exp: Expansion, z: float) -> float:
    """ln(P(z)/P(0)) = -k_p Im[c0] z of the uniform-evolution solution."""
    return -model.atom.k_p * exp.c0.imag * z


# =====================================================================
# Reporting
# =====================================================================


def check_report(model: ChiModel) -> dict[str, complex | float]:
    """Labeled susceptibility quantities for the CLI ``check`` command."""
    drive = model.drive
    exp = expansion(model, drive)
    delta_star = optimal_detuning(model)
    cancel = cancellation_density(model.atom, model.vapor, drive, exp)
    return {
        "alpha": model.alpha,
        "gamma_cap_c": model.gamma_cap_c,
        "gamma_cap_1": model.gamma_cap_1,
        "c0": exp.c0,
        "c1": exp.c1,
        "k1": exp.k1,
        "delta_star": delta_star,
        "cancellation_residual": cancel.residual,
        "n0_star": cancel.n0_star,
    }
