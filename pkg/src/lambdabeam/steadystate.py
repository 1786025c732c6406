"""Probe-free steady state of the four-level atom.

With the probe treated as a first-order perturbation, the zeroth-order
density matrix is set by the control field on |2>-|3>, spontaneous decay
out of |3> and |4>, ground-state dephasing, and the two-way incoherent
pump between |1> and |4>.  Two independent routes are provided: the
closed-form populations/coherence (valid for a resonant control field)
and a full 16-dimensional Liouvillian null-space solve.  They are held
to 1e-9 agreement by the test suite, so either can serve as the oracle
for the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, PhysicsError
from .params import AtomSystem, DriveConfig

_TRACE_TOL = 1e-10
_RANK_TOL = 1e-9


@dataclass(frozen=True)
class SteadyState:
    """Populations and the |2>-|3> coherence of the probe-free fixed point."""

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho23: complex  # <2|rho|3>
    source: str  # "closed_form" or "numeric"

    def __post_init__(self) -> None:
        pops = (self.rho11, self.rho22, self.rho33, self.rho44)
        if any(p < -_TRACE_TOL or p > 1.0 + _TRACE_TOL for p in pops):
            raise NumericsError(f"steady-state population outside [0, 1]: {pops}")
        if abs(sum(pops) - 1.0) > _TRACE_TOL:
            raise NumericsError(f"steady-state populations sum to {sum(pops)!r}, not 1")

    @property
    def population_inversion(self) -> float:
        """rho11 - rho33, the weight of the probe transition."""
        return self.rho11 - self.rho33


def steady_closed(atom: AtomSystem, drive: DriveConfig) -> SteadyState:
    """Closed-form steady state for a resonant control field (delta_c = 0).

    rho22 and rho44 have no closed form here; they are filled from
    :func:`steady_numeric` (the source tag still records the closed-form
    origin of rho11, rho33, rho23).
    """
    if drive.delta_c != 0.0:
        raise PhysicsError("closed-form steady state requires a resonant control field (delta_c = 0)")
    p = drive.pump_p
    omega_c = drive.omega_c
    if omega_c == 0.0:
        if p > 0.0:
            raise PhysicsError(
                "dark configuration: omega_c = 0 with pump_p > 0 pools all population "
                "in |2> and leaves rho23 undefined in the closed form"
            )
        return SteadyState(1.0, 0.0, 0.0, 0.0, 0j, source="closed_form")

    g31, g3, g42, g4 = atom.Gamma31, atom.Gamma3, atom.Gamma42, atom.Gamma4
    norm = p * g3**2 * g42 + 4.0 * (2.0 * p * (g31 + g42) + g31 * g4) * omega_c**2
    rho11 = 4.0 * g31 * (p + g4) * omega_c**2 / norm
    rho33 = 4.0 * p * g42 * omega_c**2 / norm
    rho23 = -2j * p * g3 * g42 * omega_c / norm

    if p == 0.0:
        rho22 = rho44 = 0.0
    else:
        numeric = steady_numeric(atom, drive)
        rho22, rho44 = numeric.rho22, numeric.rho44
    return SteadyState(rho11, rho22, rho33, rho44, rho23, source="closed_form")


# =====================================================================
# Liouvillian route
# =====================================================================


def _liouvillian(atom: AtomSystem, drive: DriveConfig) -> np.ndarray:
    """16x16 generator of d(vec rho)/dt, row-major vec(rho)[4 i + j] = rho_ij.

    Rotating frame of the drive fields: H = -Delta |2><2| - Delta_p |3><3|
    - Omega_c (|3><2| + |2><3|); the probe is absent at zeroth order.
    Decay channels are Lindblad jumps |k><i| at Gamma_ik, the two-way pump
    is a pair of jumps sqrt(p) |4><1| and sqrt(p) |1><4| (which produces
    the p/2 damping on every coherence involving |1> or |4>), and gamma21
    damps only the |1>-|2> coherence.
    """
    eye = np.eye(4)
    ham = np.zeros((4, 4), dtype=complex)
    ham[1, 1] = -drive.delta
    ham[2, 2] = -drive.delta_p
    ham[1, 2] = ham[2, 1] = -drive.omega_c

    lv = -1j * (np.kron(ham, eye) - np.kron(eye, ham.T))

    def jump(rate: float, dst: int, src: int) -> None:
        if rate == 0.0:
            return
        op = np.zeros((4, 4))
        op[dst, src] = 1.0
        opop = op.T @ op
        lv[...] += rate * (
            np.kron(op, op.conj()) - 0.5 * (np.kron(opop, eye) + np.kron(eye, opop.T))
        )

    jump(atom.Gamma31, 0, 2)
    jump(atom.Gamma32, 1, 2)
    jump(atom.Gamma41, 0, 3)
    jump(atom.Gamma42, 1, 3)
    jump(drive.pump_p, 3, 0)
    jump(drive.pump_p, 0, 3)

    # pure dephasing of the ground-state coherence only; a projector-form
    # Lindblad dephaser would also damp rho23/rho13 and shift the fixed
    # point away from the closed form
    lv[4 * 0 + 1, 4 * 0 + 1] -= atom.gamma21
    lv[4 * 1 + 0, 4 * 1 + 0] -= atom.gamma21
    return lv


def steady_numeric(atom: AtomSystem, drive: DriveConfig) -> SteadyState:
    """Steady state as the one-dimensional null space of the Liouvillian.

    Works for any detunings.  Raises NumericsError when the null space is
    degenerate (for instance with every field and pump off), since no
    unique fixed point exists then.
    """
    lv = _liouvillian(atom, drive)
    scale = atom.Gamma31 if atom.Gamma31 > 0 else max(1.0, float(np.abs(lv).max()))
    _, svals, vh = np.linalg.svd(lv / scale)
    null_dim = int(np.sum(svals < _RANK_TOL * svals[0])) if svals[0] > 0 else 16
    if null_dim != 1:
        raise NumericsError(
            f"steady state is not unique: Liouvillian null space has dimension {null_dim}"
        )
    rho = vh[-1].conj().reshape(4, 4)
    rho = 0.5 * (rho + rho.conj().T)
    trace = float(rho.trace().real)
    if abs(trace) < 1e-12:
        raise NumericsError("null-space vector is traceless; cannot normalize a steady state")
    rho /= trace
    return SteadyState(
        rho11=float(rho[0, 0].real),
        rho22=float(rho[1, 1].real),
        rho33=float(rho[2, 2].real),
        rho44=float(rho[3, 3].real),
        rho23=complex(rho[1, 2]),
        source="numeric",
    )
