"""Steady-state solver: closed form against the Liouvillian null space."""

from __future__ import annotations

import numpy as np
import pytest

import lambdabeam as lb
from lambdabeam.steadystate import _liouvillian

N_DRAWS = 1000
AGREEMENT = 1e-9

# frozen values at the stock operating point (omega_c = 1.4 Gamma31,
# p = 0.65 Gamma31); the closed-form populations are exact rationals in
# the rates, the rho22/rho44 fill comes from the null-space solve
RHO11_DEFAULT = 0.4456771199430899
RHO22_DEFAULT = 0.2630143714907563
RHO33_DEFAULT = 0.19420567237743583
RHO44_DEFAULT = 0.09710283618871793
RHO23_DEFAULT = -0.11559861451037849j


def _random_drive(defaults, rng) -> lb.DriveConfig:
    gamma31 = defaults.atom.Gamma31
    omega_c = gamma31 * 10.0 ** rng.uniform(-2.0, 1.0)
    pump_p = gamma31 * 10.0 ** rng.uniform(-3.0, 1.0)
    delta = rng.uniform(-5e6, 5e6)
    return lb.DriveConfig.from_two_photon(omega_c, pump_p, delta=delta)


def _max_difference(a: lb.SteadyState, b: lb.SteadyState) -> float:
    return max(
        abs(a.rho11 - b.rho11),
        abs(a.rho22 - b.rho22),
        abs(a.rho33 - b.rho33),
        abs(a.rho44 - b.rho44),
        abs(a.rho23 - b.rho23),
    )


def test_closed_form_matches_null_space_over_draws(defaults, rng):
    atom = defaults.atom
    worst = 0.0
    for _ in range(N_DRAWS):
        drive = _random_drive(defaults, rng)
        closed = lb.steady_closed(atom, drive)
        numeric = lb.steady_numeric(atom, drive)
        worst = max(worst, _max_difference(closed, numeric))
    assert worst <= AGREEMENT, f"routes disagree by {worst:.3e}"


def test_closed_form_holds_for_any_branching(defaults, rng):
    # the closed form contains the decay rates symbolically, so it must
    # track the null space when the branching ratios change too
    base = defaults.atom
    worst = 0.0
    for _ in range(100):
        scale = 10.0 ** rng.uniform(-1.0, 1.0, size=4)
        atom = lb.AtomSystem(
            lambda_p=base.lambda_p,
            Gamma31=base.Gamma31 * scale[0],
            Gamma32=base.Gamma32 * scale[1],
            Gamma41=base.Gamma41 * scale[2],
            Gamma42=base.Gamma42 * scale[3],
            gamma21=base.gamma21,
        )
        drive = _random_drive(defaults, rng)
        closed = lb.steady_closed(atom, drive)
        numeric = lb.steady_numeric(atom, drive)
        worst = max(worst, _max_difference(closed, numeric))
    assert worst <= AGREEMENT, f"routes disagree by {worst:.3e}"


def test_internal_population_identities(defaults, rng):
    # two relations the closed form implies but does not store:
    # rho44/rho11 = p/(p + Gamma4) and rho22/rho33 = 1 + Gamma3^2/(4 omega_c^2)
    atom = defaults.atom
    for _ in range(25):
        drive = _random_drive(defaults, rng)
        state = lb.steady_closed(atom, drive)
        assert state.rho44 == pytest.approx(
            drive.pump_p * state.rho11 / (drive.pump_p + atom.Gamma4), abs=1e-9
        )
        assert state.rho22 == pytest.approx(
            state.rho33 * (1.0 + atom.Gamma3**2 / (4.0 * drive.omega_c**2)), abs=1e-9
        )


def test_default_point_frozen_values(defaults):
    state = lb.steady_closed(defaults.atom, defaults.drive)
    assert state.rho11 == pytest.approx(RHO11_DEFAULT, rel=1e-12)
    assert state.rho33 == pytest.approx(RHO33_DEFAULT, rel=1e-12)
    assert state.rho23.real == 0.0
    assert state.rho23.imag == pytest.approx(RHO23_DEFAULT.imag, rel=1e-12)
    # null-space fills, held a little looser (SVD vs closed form)
    assert state.rho22 == pytest.approx(RHO22_DEFAULT, rel=1e-9)
    assert state.rho44 == pytest.approx(RHO44_DEFAULT, rel=1e-9)
    assert state.population_inversion == pytest.approx(
        RHO11_DEFAULT - RHO33_DEFAULT, rel=1e-9
    )
    assert state.source == "closed_form"


def test_numeric_trace_and_bounds(defaults, rng):
    for _ in range(50):
        drive = _random_drive(defaults, rng)
        state = lb.steady_numeric(defaults.atom, drive)
        pops = (state.rho11, state.rho22, state.rho33, state.rho44)
        assert sum(pops) == pytest.approx(1.0, abs=1e-10)
        assert all(-1e-10 <= p <= 1.0 + 1e-10 for p in pops)
        assert state.source == "numeric"


def test_liouvillian_conserves_trace(defaults):
    lv = _liouvillian(defaults.atom, defaults.drive)
    trace_row = sum(lv[4 * i + i, :] for i in range(4))
    assert np.max(np.abs(trace_row)) < 1e-6 * np.max(np.abs(lv))


def test_dark_configuration(defaults):
    # control off with the pump on funnels everything into |2>
    drive = lb.DriveConfig.from_two_photon(0.0, defaults.drive.pump_p, delta=0.0)
    with pytest.raises(lb.PhysicsError, match="dark configuration"):
        lb.steady_closed(defaults.atom, drive)
    state = lb.steady_numeric(defaults.atom, drive)
    assert state.rho22 == pytest.approx(1.0, abs=1e-9)


def test_everything_off_has_no_unique_fixed_point(defaults):
    drive = lb.DriveConfig.from_two_photon(0.0, 0.0, delta=0.0)
    with pytest.raises(lb.NumericsError, match="not unique"):
        lb.steady_numeric(defaults.atom, drive)
    # the closed form picks the all-ground convention instead
    state = lb.steady_closed(defaults.atom, drive)
    assert state.rho11 == 1.0
    assert state.rho23 == 0


def test_no_pump_means_no_transfer(defaults):
    drive = lb.DriveConfig.from_two_photon(defaults.drive.omega_c, 0.0, delta=0.0)
    closed = lb.steady_closed(defaults.atom, drive)
    numeric = lb.steady_numeric(defaults.atom, drive)
    assert closed.rho11 == 1.0
    assert closed.rho33 == 0.0
    assert closed.rho23 == 0
    assert _max_difference(closed, numeric) <= AGREEMENT


def test_strong_control_empties_coherence(defaults):
    atom, drive = defaults.atom, defaults.drive
    weak = lb.steady_closed(atom, drive)
    strong = lb.steady_closed(atom, drive.with_omega_c(100.0 * atom.Gamma31))
    assert abs(strong.rho23) < abs(weak.rho23) / 50.0


def test_rejects_off_resonant_control(defaults):
    drive = lb.DriveConfig(
        omega_c=defaults.drive.omega_c,
        pump_p=defaults.drive.pump_p,
        delta_c=1e5,
        delta_p=1e5,
        delta=0.0,
    )
    with pytest.raises(lb.PhysicsError, match="resonant control"):
        lb.steady_closed(defaults.atom, drive)
    # the null-space route has no such restriction
    state = lb.steady_numeric(defaults.atom, drive)
    assert 0.0 < state.rho11 < 1.0
