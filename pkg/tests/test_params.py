"""Parameter objects, derived-value rules, and config round-tripping."""

from __future__ import annotations

import math

import pytest

import lambdabeam as lb
from lambdabeam.params import RB87_MASS

GAMMA31 = lb.GAMMA_D1 / 4.0


# ---------------------------------------------------------------------
# constants and helpers
# ---------------------------------------------------------------------


def test_thermal_speed_room_temperature():
    # most probable Maxwell-Boltzmann speed of Rb-87 near 300 K
    assert lb.thermal_speed(300.0) == pytest.approx(240.0, rel=0.01)


def test_thermal_speed_rejects_bad_temperature():
    with pytest.raises(lb.ConfigError):
        lb.thermal_speed(0.0)
    with pytest.raises(lb.ConfigError):
        lb.thermal_speed(-10.0)
    with pytest.raises(lb.ConfigError):
        lb.thermal_speed(math.nan)


def test_collision_rate_default_uses_angular_mismatch():
    # 22.8 cycles/m mismatch -> 2 pi * 22.8 rad/m, scaled by 2000 v_th
    assert lb.DELTA_K_DEFAULT == pytest.approx(2.0 * math.pi * 22.8, rel=1e-15)
    assert lb.GAMMA_C_DEFAULT == pytest.approx(2000.0 * lb.DELTA_K_DEFAULT * 240.0, rel=1e-15)


# ---------------------------------------------------------------------
# domain dataclasses
# ---------------------------------------------------------------------


def test_atom_totals_are_derived(defaults):
    atom = defaults.atom
    assert atom.Gamma3 == atom.Gamma31 + atom.Gamma32
    assert atom.Gamma4 == atom.Gamma41 + atom.Gamma42
    assert atom.k_p == pytest.approx(2.0 * math.pi / atom.lambda_p, rel=1e-15)


def test_atom_rejects_inconsistent_totals(defaults):
    atom = defaults.atom
    with pytest.raises(lb.ConfigError, match="Gamma3 is derived"):
        lb.AtomSystem(
            lambda_p=atom.lambda_p,
            Gamma31=atom.Gamma31,
            Gamma32=atom.Gamma32,
            Gamma41=atom.Gamma41,
            Gamma42=atom.Gamma42,
            gamma21=atom.gamma21,
            Gamma3=1.1 * (atom.Gamma31 + atom.Gamma32),
        )


def test_atom_rejects_negative_rates(defaults):
    atom = defaults.atom
    with pytest.raises(lb.ConfigError, match="atom.Gamma32"):
        lb.AtomSystem(
            lambda_p=atom.lambda_p,
            Gamma31=atom.Gamma31,
            Gamma32=-1.0,
            Gamma41=atom.Gamma41,
            Gamma42=atom.Gamma42,
            gamma21=atom.gamma21,
        )


def test_vapor_derives_thermal_speed_from_temperature():
    vapor = lb.VaporEnv(T=300.0, v_th=None, gamma_c=1e5, n0=1e18, delta_k=143.0)
    assert vapor.v_th == pytest.approx(lb.thermal_speed(300.0), rel=1e-15)


def test_vapor_requires_temperature_or_speed():
    with pytest.raises(lb.ConfigError, match="v_th or T"):
        lb.VaporEnv(T=None, v_th=None, gamma_c=1e5, n0=1e18, delta_k=143.0)


def test_vapor_cross_checks_temperature_against_speed():
    # 300 m/s is far outside 1% of the 300 K Maxwell-Boltzmann speed
    with pytest.raises(lb.ConfigError, match="disagrees with T"):
        lb.VaporEnv(T=300.0, v_th=300.0, gamma_c=1e5, n0=1e18, delta_k=143.0)
    # the default pairing (240 m/s at 300 K) is within tolerance
    lb.VaporEnv(T=300.0, v_th=240.0, gamma_c=1e5, n0=1e18, delta_k=143.0)


def test_vapor_rejects_nonpositive_speed():
    with pytest.raises(lb.ConfigError, match="v_th"):
        lb.VaporEnv(T=None, v_th=0.0, gamma_c=1e5, n0=1e18, delta_k=143.0)


def test_drive_two_photon_invariant():
    with pytest.raises(lb.ConfigError, match="delta is derived"):
        lb.DriveConfig(omega_c=1e6, pump_p=1e5, delta_c=1.0, delta_p=2.0, delta=3.0)
    drive = lb.DriveConfig.from_two_photon(1e6, 1e5, delta=-2.5e6, delta_c=0.3)
    assert drive.delta == drive.delta_p - drive.delta_c


def test_drive_with_helpers_preserve_invariant():
    drive = lb.DriveConfig.from_two_photon(1e6, 1e5, delta=-2.5e6)
    assert drive.with_delta(1.0).delta == 1.0
    assert drive.with_omega_c(2e6).omega_c == 2e6
    assert drive.with_pump(7e4).pump_p == 7e4
    assert drive.with_pump(7e4).delta == drive.delta


def test_beam_rayleigh_length(defaults):
    beam = defaults.beam
    assert beam.z_R == pytest.approx(2.0 * math.pi * beam.w_p**2 / beam.lambda_p, rel=1e-15)
    with pytest.raises(lb.ConfigError, match="z_R is derived"):
        lb.BeamConfig(w_p=beam.w_p, omega_p0=beam.omega_p0, lambda_p=beam.lambda_p, z_R=1.0)


def test_grid_validation():
    lb.GridConfig(n=64, window_over_wp=8.0)
    with pytest.raises(lb.ConfigError, match="power of two"):
        lb.GridConfig(n=96)
    with pytest.raises(lb.ConfigError, match="power of two"):
        lb.GridConfig(n=32)
    with pytest.raises(lb.ConfigError, match="window_over_wp"):
        lb.GridConfig(window_over_wp=4.0)


def test_run_controls_validation():
    with pytest.raises(lb.ConfigError, match="z_end_over_zR"):
        lb.RunControls(z_end_over_zR=0.0)
    with pytest.raises(lb.ConfigError, match="n_samples"):
        lb.RunControls(n_samples=10)
    with pytest.raises(lb.ConfigError, match="chi3"):
        lb.RunControls(chi3=math.inf)


# ---------------------------------------------------------------------
# validity report
# ---------------------------------------------------------------------


def test_default_point_inside_validity(defaults):
    report = lb.validate(defaults.atom, defaults.vapor, defaults.drive)
    assert report.ok
    assert report.dicke_ratio < 0.1
    assert report.near_resonance_ratio < 0.1
    assert "ok" in report.summary()


def test_validity_ratio_values(defaults):
    atom, vapor, drive = defaults.atom, defaults.vapor, defaults.drive
    report = lb.validate(atom, vapor, drive)
    dicke = vapor.delta_k * vapor.v_th / (0.5 * drive.pump_p + vapor.gamma_c)
    near = abs(drive.delta_p) / (0.5 * drive.pump_p + 0.5 * atom.Gamma3 + vapor.gamma_c)
    assert report.dicke_ratio == pytest.approx(dicke, rel=1e-12)
    assert report.near_resonance_ratio == pytest.approx(near, rel=1e-12)


def test_validity_flags_hot_undamped_cell(defaults):
    vapor = lb.VaporEnv(
        T=None, v_th=240.0, gamma_c=0.0, n0=1.5e18, delta_k=lb.DELTA_K_DEFAULT
    )
    drive = defaults.drive.with_pump(0.0)
    report = lb.validate(defaults.atom, vapor, drive)
    assert math.isinf(report.dicke_ratio)
    assert not report.ok
    assert "OUTSIDE VALIDITY" in report.summary()


def test_validity_zero_over_zero_is_zero(defaults):
    vapor = lb.VaporEnv(T=None, v_th=240.0, gamma_c=0.0, n0=1.5e18, delta_k=0.0)
    drive = lb.DriveConfig.from_two_photon(defaults.drive.omega_c, 0.0, delta=0.0)
    report = lb.validate(defaults.atom, vapor, drive)
    assert report.dicke_ratio == 0.0
    assert report.near_resonance_ratio == 0.0


# ---------------------------------------------------------------------
# config file round trips
# ---------------------------------------------------------------------


def test_write_parse_round_trip(defaults):
    assert lb.parse_config(lb.write_config(defaults)) == defaults


def test_round_trip_preserves_every_float(defaults):
    from dataclasses import replace

    cfg = replace(
        defaults,
        drive=defaults.drive.with_delta(-2.871e6 / 3.0),
        grid=lb.GridConfig(n=128, window_over_wp=12.5),
        run=lb.RunControls(z_end_over_zR=0.7, n_samples=96, chi3=1.25e-18, retune_delta=True),
    )
    again = lb.parse_config(lb.write_config(cfg))
    assert again == cfg
    assert again.drive.delta == cfg.drive.delta  # bit-exact, not approx


def test_round_trip_optimal_detuning_flag(defaults):
    from dataclasses import replace

    cfg = replace(defaults, delta_optimal=True)
    text = lb.write_config(cfg)
    assert "delta = optimal" in text
    again = lb.parse_config(text)
    assert again.delta_optimal
    assert again.drive.delta == 0.0  # placeholder until resolved


def _minimal_config(drive_lines: str) -> str:
    return f"""
[atom]
lambda_p = 795e-9
Gamma31_Hz2pi = 1.4375e6
Gamma32_G31 = 0.6666666666666666
Gamma41_G31 = 0.3333333333333333
Gamma42_G31 = 2.0
gamma21_G31 = 0.001

[vapor]
v_th = 240.0
gamma_c = 6.876318000177339e7
n0 = 1.5e18
delta_k = 143.25662
{drive_lines}

[beam]
w_p = 100e-6
omega_p0_G31 = 0.14
"""


def test_parse_unit_suffixes():
    cfg = lb.parse_config(
        _minimal_config("[drive]\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\ndelta = -2.97e6\n")
    )
    gamma31 = 2.0 * math.pi * 1.4375e6
    assert cfg.atom.Gamma31 == pytest.approx(gamma31, rel=1e-15)
    assert cfg.drive.omega_c == pytest.approx(1.4 * gamma31, rel=1e-15)
    assert cfg.beam.omega_p0 == pytest.approx(0.14 * gamma31, rel=1e-15)
    assert cfg.drive.delta == -2.97e6
    assert cfg.drive.delta_c == 0.0


def test_parse_rejects_duplicate_spellings():
    text = _minimal_config(
        "[drive]\nomega_c = 1.265e7\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\ndelta = 0.0\n"
    )
    with pytest.raises(lb.ConfigError, match="more than once"):
        lb.parse_config(text)


def test_parse_rejects_unknown_key():
    text = _minimal_config("[drive]\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\ndelta = 0\nfoo = 1\n")
    with pytest.raises(lb.ConfigError, match="unknown key 'foo'"):
        lb.parse_config(text)


def test_parse_rejects_unknown_section():
    text = _minimal_config("[drive]\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\ndelta = 0\n")
    with pytest.raises(lb.ConfigError, match=r"unknown section \[probe\]"):
        lb.parse_config(text + "\n[probe]\npower = 1\n")


def test_parse_requires_delta():
    text = _minimal_config("[drive]\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\n")
    with pytest.raises(lb.ConfigError, match="requires delta"):
        lb.parse_config(text)


def test_parse_optimal_excludes_explicit_probe_detuning():
    text = _minimal_config(
        "[drive]\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\ndelta = optimal\ndelta_p = 1.0\n"
    )
    with pytest.raises(lb.ConfigError, match="incompatible"):
        lb.parse_config(text)


def test_parse_checks_stored_against_derived():
    text = _minimal_config(
        "[drive]\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\ndelta_p = 2.0\ndelta = 1.0\n"
    )
    with pytest.raises(lb.ConfigError, match="disagrees with the derived value"):
        lb.parse_config(text)


def test_parse_accepts_consistent_stored_delta():
    cfg = lb.parse_config(
        _minimal_config(
            "[drive]\nomega_c_G31 = 1.4\npump_p_G31 = 0.65\ndelta_p = 2.0\ndelta = 2.0\n"
        )
    )
    assert cfg.drive.delta_p == 2.0


def test_parse_rejects_non_numeric_value():
    text = _minimal_config("[drive]\nomega_c_G31 = fast\npump_p_G31 = 0.65\ndelta = 0\n")
    with pytest.raises(lb.ConfigError, match="not a number"):
        lb.parse_config(text)


def test_parse_rejects_malformed_ini():
    with pytest.raises(lb.ConfigError, match="malformed config"):
        lb.parse_config("omega_c = 1.4 but no section header\n")


def test_load_config_missing_file(tmp_path):
    with pytest.raises(lb.ConfigError, match="cannot read config file"):
        lb.load_config(tmp_path / "missing.ini")


def test_load_config_round_trip(tmp_path, defaults):
    path = tmp_path / "cfg.ini"
    lb.write_config(defaults, path)
    assert lb.load_config(path) == defaults


def test_default_config_values(defaults):
    assert defaults.atom.lambda_p == 795e-9
    assert defaults.vapor.n0 == 1.5e18
    assert defaults.vapor.mass == RB87_MASS
    assert defaults.drive.omega_c == pytest.approx(1.4 * GAMMA31, rel=1e-15)
    assert defaults.drive.pump_p == pytest.approx(0.65 * GAMMA31, rel=1e-15)
    assert defaults.drive.delta == lb.DELTA_TWO_PHOTON_DEFAULT
    assert defaults.beam.w_p == 100e-6
    assert not defaults.delta_optimal
