"""Physical parameters, unit conventions, and configuration I/O.

Conventions used throughout the package:

* every rate, Rabi frequency, and detuning is angular (rad/s),
* every length is in meters, wavenumbers in rad/m,
* the Gaussian probe envelope is ``exp(-r^2 / (2 w_p^2))``, so ``w_p`` is
  the amplitude 1/sqrt(e) radius and the Rayleigh length is
  ``z_R = 2 pi w_p^2 / lambda_p``.

The four-level scheme has ground states |1>, |2> and excited states
|3>, |4>.  The probe couples |1>-|3>, the control couples |2>-|3>, an
incoherent two-way pump exchanges population between |1> and |4>.

Config files are plain ``key = value`` INI text with sections [atom],
[vapor], [drive], [beam], [grid], [run].  Keys are SI unless suffixed:
``_Hz2pi`` values are multiplied by 2*pi, ``_G31`` values by Gamma31.
Unknown keys are rejected, derived quantities are recomputed on load and
must agree with any stored value to 1e-12 relative.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, replace
from pathlib import Path

from scipy import constants as _const

from .errors import ConfigError

# =====================================================================
# Constants and default parameter set (warm Rb-87 D1 cell)
# =====================================================================

RB87_MASS = 86.909180520 * _const.atomic_mass  # kg
BOLTZMANN = _const.k  # J/K

GAMMA_D1 = 2.0 * math.pi * 5.75e6  # total excited-state decay rate (rad/s)

#: Probe-control wavevector mismatch (rad/m).  The beams differ by the
#: 6.835 GHz ground-state hyperfine splitting; 22.8 m^-1 is that
#: frequency over c as an ordinary (cycles) wavenumber, so the angular
#: mismatch carries a 2*pi.
DELTA_K_DEFAULT = 2.0 * math.pi * 22.8

V_TH_DEFAULT = 240.0  # m/s, most probable speed at ~300 K
GAMMA_C_DEFAULT = 2000.0 * DELTA_K_DEFAULT * V_TH_DEFAULT  # collision rate (rad/s)

#: Two-photon detuning that removes the k-perp-dependent absorption at
#: the default parameter set (frozen from the fixed-point solve in
#: :func:`lambdabeam.susceptibility.optimal_detuning`).
DELTA_TWO_PHOTON_DEFAULT = -2970774.123984122  # rad/s

#: Kerr coefficient for the comparison medium, units s^2 so that
#: (k_p/2) chi3 |Omega|^2 is rad/m.  Calibrated once so the on-axis
#: phase of the default comparison beam reaches 0.13 pi at the pi-flip
#: distance; see the propagation module.
CHI3_DEFAULT = 6.874959729402443e-18


def thermal_speed(temperature: float, mass: float = RB87_MASS) -> float:
    """Most probable speed of a Maxwell-Boltzmann gas (m/s)."""
    if not (math.isfinite(temperature) and temperature > 0):
        raise ConfigError("temperature must be finite and > 0")
    return math.sqrt(2.0 * BOLTZMANN * temperature / mass)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _finite_nonneg(owner: str, name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
        raise ConfigError(f"{owner}.{name} must be finite and >= 0, got {value!r}")


# =====================================================================
# Domain types
# =====================================================================


@dataclass(frozen=True)
class AtomSystem:
    """Level structure and radiative rates of the four-level emitter."""

    lambda_p: float  # probe wavelength (m)
    Gamma31: float  # |3> -> |1> spontaneous decay (rad/s)
    Gamma32: float  # |3> -> |2> (rad/s)
    Gamma41: float  # |4> -> |1> (rad/s)
    Gamma42: float  # |4> -> |2> (rad/s)
    gamma21: float  # ground-state coherence dephasing (rad/s)
    Gamma3: float | None = None  # derived total Gamma31 + Gamma32 (rad/s)
    Gamma4: float | None = None  # derived total Gamma41 + Gamma42 (rad/s)

    def __post_init__(self) -> None:
        for name in ("Gamma31", "Gamma32", "Gamma41", "Gamma42", "gamma21"):
            _finite_nonneg("atom", name, getattr(self, name))
        if not (isinstance(self.lambda_p, (int, float)) and math.isfinite(self.lambda_p) and self.lambda_p > 0):
            raise ConfigError(f"atom.lambda_p must be finite and > 0, got {self.lambda_p!r}")
        total3 = self.Gamma31 + self.Gamma32
        total4 = self.Gamma41 + self.Gamma42
        if self.Gamma3 is None:
            object.__setattr__(self, "Gamma3", total3)
        elif self.Gamma3 != total3:
            raise ConfigError("atom.Gamma3 is derived and must equal Gamma31 + Gamma32 exactly")
        if self.Gamma4 is None:
            object.__setattr__(self, "Gamma4", total4)
        elif self.Gamma4 != total4:
            raise ConfigError("atom.Gamma4 is derived and must equal Gamma41 + Gamma42 exactly")

    @property
    def k_p(self) -> float:
        """Probe wavenumber 2*pi/lambda_p (rad/m)."""
        return 2.0 * math.pi / self.lambda_p


@dataclass(frozen=True)
class VaporEnv:
    """Thermal and motional environment of the vapor cell.

    Either ``T`` or ``v_th`` may be given; the other is derived.  When
    both are given they must agree within 1% through the Maxwell-
    Boltzmann relation ``v_th = sqrt(2 k_B T / mass)``.
    """

    T: float | None  # temperature (K), optional
    v_th: float | None  # most probable thermal speed (m/s)
    gamma_c: float  # collision (velocity-thermalization) rate (rad/s)
    n0: float  # atomic number density (m^-3)
    delta_k: float  # probe-control wavevector mismatch magnitude (rad/m)
    mass: float = RB87_MASS  # atomic mass (kg) for the T <-> v_th check

    def __post_init__(self) -> None:
        _finite_nonneg("vapor", "gamma_c", self.gamma_c)
        _finite_nonneg("vapor", "delta_k", self.delta_k)
        if not (math.isfinite(self.n0) and self.n0 > 0):
            raise ConfigError(f"vapor.n0 must be finite and > 0, got {self.n0!r}")
        if not (math.isfinite(self.mass) and self.mass > 0):
            raise ConfigError(f"vapor.mass must be finite and > 0, got {self.mass!r}")
        if self.v_th is None:
            if self.T is None:
                raise ConfigError("vapor requires v_th or T (or both)")
            object.__setattr__(self, "v_th", thermal_speed(self.T, self.mass))
        else:
            if not (math.isfinite(self.v_th) and self.v_th > 0):
                raise ConfigError(f"vapor.v_th must be finite and > 0, got {self.v_th!r}")
            if self.T is not None:
                expected = thermal_speed(self.T, self.mass)
                if abs(self.v_th - expected) > 0.01 * expected:
                    raise ConfigError(
                        f"vapor.v_th={self.v_th!r} disagrees with T={self.T!r} K "
                        f"(Maxwell-Boltzmann gives {expected:.3f} m/s; tolerance 1%)"
                    )


@dataclass(frozen=True)
class DriveConfig:
    """Control field, incoherent pump, and detunings."""

    omega_c: float  # control Rabi frequency (rad/s)
    pump_p: float  # two-way incoherent pump rate (rad/s)
    delta_c: float  # control detuning (rad/s)
    delta_p: float  # probe detuning (rad/s)
    delta: float  # two-photon detuning, derived: delta_p - delta_c (rad/s)

    def __post_init__(self) -> None:
        _finite_nonneg("drive", "omega_c", self.omega_c)
        _finite_nonneg("drive", "pump_p", self.pump_p)
        for name in ("delta_c", "delta_p", "delta"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ConfigError(f"drive.{name} must be finite, got {value!r}")
        if self.delta != self.delta_p - self.delta_c:
            raise ConfigError("drive.delta is derived and must equal delta_p - delta_c exactly")

    @classmethod
    def from_two_photon(
        cls, omega_c: float, pump_p: float, delta: float, delta_c: float = 0.0
    ) -> "DriveConfig":
        """Build from the two-photon detuning, deriving ``delta_p = delta + delta_c``.

        The stored ``delta`` is re-derived as ``delta_p - delta_c`` so the
        exact-identity invariant holds even when the float addition rounds.
        """
        delta_p = delta + delta_c
        return cls(omega_c, pump_p, delta_c, delta_p, delta_p - delta_c)

    def with_delta(self, delta: float) -> "DriveConfig":
        return DriveConfig.from_two_photon(self.omega_c, self.pump_p, delta, self.delta_c)

    def with_omega_c(self, omega_c: float) -> "DriveConfig":
        return replace(self, omega_c=omega_c)

    def with_pump(self, pump_p: float) -> "DriveConfig":
        return replace(self, pump_p=pump_p)


@dataclass(frozen=True)
class BeamConfig:
    """Input Gaussian probe beam, envelope ``omega_p0 exp(-r^2/(2 w_p^2))``."""

    w_p: float  # amplitude 1/sqrt(e) radius (m)
    omega_p0: float  # peak probe Rabi frequency (rad/s)
    lambda_p: float  # probe wavelength (m)
    z_R: float | None = None  # derived Rayleigh length 2*pi*w_p^2/lambda_p (m)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.w_p) and self.w_p > 0):
            raise ConfigError(f"beam.w_p must be finite and > 0, got {self.w_p!r}")
        _finite_nonneg("beam", "omega_p0", self.omega_p0)
        if not (math.isfinite(self.lambda_p) and self.lambda_p > 0):
            raise ConfigError(f"beam.lambda_p must be finite and > 0, got {self.lambda_p!r}")
        derived = 2.0 * math.pi * self.w_p**2 / self.lambda_p
        if self.z_R is None:
            object.__setattr__(self, "z_R", derived)
        elif self.z_R != derived:
            raise ConfigError("beam.z_R is derived and must equal 2*pi*w_p^2/lambda_p exactly")

    @classmethod
    def for_atom(cls, atom: AtomSystem, w_p: float, omega_p0: float) -> "BeamConfig":
        return cls(w_p=w_p, omega_p0=omega_p0, lambda_p=atom.lambda_p)

    @property
    def k_p(self) -> float:
        return 2.0 * math.pi / self.lambda_p


@dataclass(frozen=True)
class GridConfig:
    """Transverse numerical grid: N x N points spanning ``window_over_wp * w_p``."""

    n: int = 512
    window_over_wp: float = 16.0

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and self.n >= 64 and (self.n & (self.n - 1)) == 0):
            raise ConfigError(f"grid.n must be a power of two >= 64, got {self.n!r}")
        if not (math.isfinite(self.window_over_wp) and self.window_over_wp >= 8.0):
            raise ConfigError(
                f"grid.window_over_wp must be >= 8 (windowing margin), got {self.window_over_wp!r}"
            )


@dataclass(frozen=True)
class RunControls:
    """Propagation run settings."""

    z_end_over_zR: float = 1.0  # propagation length in Rayleigh lengths
    n_samples: int = 512  # diagnostic samples along z (also unwrap density)
    chi3: float = CHI3_DEFAULT  # Kerr coefficient for the comparison medium (s^2)
    retune_delta: bool = False  # re-solve the optimal detuning per scan point

    def __post_init__(self) -> None:
        if not (math.isfinite(self.z_end_over_zR) and self.z_end_over_zR > 0):
            raise ConfigError(f"run.z_end_over_zR must be > 0, got {self.z_end_over_zR!r}")
        if not (isinstance(self.n_samples, int) and self.n_samples >= 64):
            raise ConfigError(f"run.n_samples must be an integer >= 64, got {self.n_samples!r}")
        if not math.isfinite(self.chi3):
            raise ConfigError(f"run.chi3 must be finite, got {self.chi3!r}")


@dataclass(frozen=True)
class SimConfig:
    """Complete simulation setup as read from or written to a config file."""

    atom: AtomSystem
    vapor: VaporEnv
    drive: DriveConfig
    beam: BeamConfig
    grid: GridConfig
    run: RunControls
    delta_optimal: bool = False  # config requested delta = optimal; resolve before running


@dataclass(frozen=True)
class ValidityReport:
    """Motional-narrowing and near-resonance validity diagnostics."""

    dicke_ratio: float  # delta_k * v_th / (p/2 + gamma_c)
    dicke_ok: bool  # ratio < 0.1: residual Doppler spread suppressed
    near_resonance_ratio: float  # |delta_p| / (p/2 + Gamma3/2 + gamma_c)
    near_resonance_ok: bool  # ratio < 0.1: real-kernel approximation valid

    @property
    def ok(self) -> bool:
        return self.dicke_ok and self.near_resonance_ok

    def summary(self) -> str:
        lines = [
            f"dicke_ratio          = {self.dicke_ratio:.6g} ({'ok' if self.dicke_ok else 'OUTSIDE VALIDITY'})",
            f"near_resonance_ratio = {self.near_resonance_ratio:.6g} ({'ok' if self.near_resonance_ok else 'OUTSIDE VALIDITY'})",
        ]
        return "\n".join(lines)


# =====================================================================
# Operations
# =====================================================================


def validate(atom: AtomSystem, vapor: VaporEnv, drive: DriveConfig) -> ValidityReport:
    """Check the motional-narrowing regime and the near-resonance condition.

    Raises ConfigError for non-finite or negative-rate inputs (naming the
    offending field).  Out-of-validity ratios do not raise; they are
    reported with flags so exploratory runs remain possible.
    """
    for owner, obj, names in (
        ("atom", atom, ("Gamma31", "Gamma32", "Gamma41", "Gamma42", "gamma21")),
        ("vapor", vapor, ("v_th", "gamma_c", "n0", "delta_k")),
        ("drive", drive, ("omega_c", "pump_p")),
    ):
        for name in names:
            _finite_nonneg(owner, name, getattr(obj, name))
    for name in ("delta_c", "delta_p", "delta"):
        if not math.isfinite(getattr(drive, name)):
            raise ConfigError(f"drive.{name} must be finite")

    doppler = vapor.delta_k * vapor.v_th
    narrowing = 0.5 * drive.pump_p + vapor.gamma_c
    if doppler == 0.0:
        dicke = 0.0
    elif narrowing == 0.0:
        dicke = math.inf
    else:
        dicke = doppler / narrowing

    linewidth = 0.5 * drive.pump_p + 0.5 * atom.Gamma3 + vapor.gamma_c
    if drive.delta_p == 0.0:
        near = 0.0
    elif linewidth == 0.0:
        near = math.inf
    else:
        near = abs(drive.delta_p) / linewidth

    return ValidityReport(
        dicke_ratio=dicke,
        dicke_ok=dicke < 0.1,
        near_resonance_ratio=near,
        near_resonance_ok=near < 0.1,
    )


def default_rb87_d1() -> tuple[AtomSystem, VaporEnv, DriveConfig, BeamConfig]:
    """Reference parameter set: warm Rb-87 D1 vapor, 100 um probe beam.

    The two-photon detuning defaults to the frozen optimum
    :data:`DELTA_TWO_PHOTON_DEFAULT`.
    """
    atom = AtomSystem(
        lambda_p=795e-9,
        Gamma31=GAMMA_D1 / 4.0,
        Gamma32=GAMMA_D1 / 6.0,
        Gamma41=GAMMA_D1 / 12.0,
        Gamma42=GAMMA_D1 / 2.0,
        gamma21=0.001 * GAMMA_D1 / 4.0,
    )
    vapor = VaporEnv(
        T=300.0,
        v_th=V_TH_DEFAULT,
        gamma_c=GAMMA_C_DEFAULT,
        n0=1.5e18,  # 1.5e12 cm^-3
        delta_k=DELTA_K_DEFAULT,
    )
    drive = DriveConfig.from_two_photon(
        omega_c=1.4 * atom.Gamma31,
        pump_p=0.65 * atom.Gamma31,
        delta=DELTA_TWO_PHOTON_DEFAULT,
    )
    beam = BeamConfig.for_atom(atom, w_p=100e-6, omega_p0=0.1 * drive.omega_c)
    return atom, vapor, drive, beam


def default_config() -> SimConfig:
    atom, vapor, drive, beam = default_rb87_d1()
    return SimConfig(atom, vapor, drive, beam, GridConfig(), RunControls())


# =====================================================================
# Config file I/O
# =====================================================================

_SECTIONS = ("atom", "vapor", "drive", "beam", "grid", "run")

# keys that accept the _Hz2pi and _G31 unit suffixes (angular rates)
_RATE_KEYS = {
    "atom": {"Gamma31", "Gamma32", "Gamma41", "Gamma42", "gamma21", "Gamma3", "Gamma4"},
    "vapor": {"gamma_c"},
    "drive": {"omega_c", "pump_p", "delta_c", "delta_p", "delta"},
    "beam": {"omega_p0"},
    "grid": set(),
    "run": set(),
}

_PLAIN_KEYS = {
    "atom": {"lambda_p"},
    "vapor": {"T", "v_th", "n0", "delta_k", "mass"},
    "drive": set(),
    "beam": {"w_p", "z_R"},
    "grid": {"n", "window_over_wp"},
    "run": {"z_end_over_zR", "n_samples", "chi3", "retune_delta"},
}


def _agree(stored: float, derived: float, what: str) -> None:
    scale = max(abs(stored), abs(derived))
    if stored != derived and abs(stored - derived) > 1e-12 * scale:
        raise ConfigError(
            f"{what} = {stored!r} disagrees with the derived value {derived!r} "
            "beyond 1e-12 relative; remove it or fix it"
        )


class _Section:
    """One config section with suffix-aware key consumption."""

    def __init__(self, name: str, raw: dict[str, str]):
        self.name = name
        self.raw = dict(raw)

    def take_raw(self, key: str) -> str | None:
        return self.raw.pop(key, None)

    def take_float(self, key: str, gamma31: float | None = None) -> float | None:
        """Consume ``key`` in any of its unit-suffixed spellings."""
        candidates = [key]
        if key in _RATE_KEYS[self.name]:
            candidates += [key + "_Hz2pi", key + "_G31"]
        present = [c for c in candidates if c in self.raw]
        if not present:
            return None
        if len(present) > 1:
            raise ConfigError(f"[{self.name}] gives {key!r} more than once: {present}")
        spelled = present[0]
        text = self.raw.pop(spelled)
        try:
            value = float(text)
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {spelled} = {text!r} is not a number") from exc
        if spelled.endswith("_Hz2pi"):
            value *= 2.0 * math.pi
        elif spelled.endswith("_G31"):
            if gamma31 is None:
                raise ConfigError(f"[{self.name}] {spelled}: Gamma31 must be defined without the _G31 suffix")
            value *= gamma31
        return value

    def take_int(self, key: str) -> int | None:
        text = self.raw.pop(key, None)
        if text is None:
            return None
        try:
            return int(text)
        except ValueError as exc:
            raise ConfigError(f"[{self.name}] {key} = {text!r} is not an integer") from exc

    def take_bool(self, key: str) -> bool | None:
        text = self.raw.pop(key, None)
        if text is None:
            return None
        lowered = text.strip().lower()
        if lowered in ("true", "1", "yes", "on"):
            return True
        if lowered in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"[{self.name}] {key} = {text!r} is not a boolean")

    def finish(self) -> None:
        if self.raw:
            key = sorted(self.raw)[0]
            raise ConfigError(f"unknown key {key!r} in section [{self.name}]")


def parse_config(text: str) -> SimConfig:
    """Parse config text into a validated :class:`SimConfig`."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep key case: Gamma31 != gamma31
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    for section in cp.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
    for required in ("atom", "vapor", "drive", "beam"):
        if required not in cp:
            raise ConfigError(f"missing required section [{required}]")

    sections = {name: _Section(name, dict(cp[name]) if name in cp else {}) for name in _SECTIONS}

    # --- [atom]: Gamma31 first, since it defines the _G31 unit ---
    atom_sec = sections["atom"]
    gamma31 = atom_sec.take_float("Gamma31")
    if gamma31 is None:
        raise ConfigError("[atom] requires Gamma31")
    lambda_p = atom_sec.take_float("lambda_p")
    if lambda_p is None:
        raise ConfigError("[atom] requires lambda_p")
    values = {}
    for key in ("Gamma32", "Gamma41", "Gamma42", "gamma21"):
        v = atom_sec.take_float(key, gamma31)
        if v is None:
            raise ConfigError(f"[atom] requires {key}")
        values[key] = v
    stored3 = atom_sec.take_float("Gamma3", gamma31)
    stored4 = atom_sec.take_float("Gamma4", gamma31)
    atom_sec.finish()
    if stored3 is not None:
        _agree(stored3, gamma31 + values["Gamma32"], "[atom] Gamma3")
    if stored4 is not None:
        _agree(stored4, values["Gamma41"] + values["Gamma42"], "[atom] Gamma4")
    atom = AtomSystem(lambda_p=lambda_p, Gamma31=gamma31, **values)

    # --- [vapor] ---
    vap_sec = sections["vapor"]
    vapor_kwargs = dict(
        T=vap_sec.take_float("T"),
        v_th=vap_sec.take_float("v_th"),
        gamma_c=vap_sec.take_float("gamma_c", gamma31),
        n0=vap_sec.take_float("n0"),
        delta_k=vap_sec.take_float("delta_k"),
    )
    mass = vap_sec.take_float("mass")
    vap_sec.finish()
    for key in ("gamma_c", "n0", "delta_k"):
        if vapor_kwargs[key] is None:
            raise ConfigError(f"[vapor] requires {key}")
    if mass is not None:
        vapor_kwargs["mass"] = mass
    vapor = VaporEnv(**vapor_kwargs)

    # --- [drive] ---
    drv_sec = sections["drive"]
    omega_c = drv_sec.take_float("omega_c", gamma31)
    pump_p = drv_sec.take_float("pump_p", gamma31)
    if omega_c is None or pump_p is None:
        raise ConfigError("[drive] requires omega_c and pump_p")
    delta_c = drv_sec.take_float("delta_c", gamma31)
    if delta_c is None:
        delta_c = 0.0
    delta_optimal = False
    delta = None
    if drv_sec.raw.get("delta", "").strip().lower() == "optimal":
        drv_sec.take_raw("delta")
        delta_optimal = True
    else:
        delta = drv_sec.take_float("delta", gamma31)
    delta_p = drv_sec.take_float("delta_p", gamma31)
    drv_sec.finish()
    if delta_optimal:
        if delta_p is not None:
            raise ConfigError("[drive] delta = optimal is incompatible with an explicit delta_p")
        drive = DriveConfig.from_two_photon(omega_c, pump_p, 0.0, delta_c)
    elif delta_p is not None:
        if delta is not None:
            _agree(delta, delta_p - delta_c, "[drive] delta")
        drive = DriveConfig(omega_c, pump_p, delta_c, delta_p, delta_p - delta_c)
    elif delta is not None:
        drive = DriveConfig.from_two_photon(omega_c, pump_p, delta, delta_c)
    else:
        raise ConfigError("[drive] requires delta or delta_p (or delta = optimal)")

    # --- [beam] ---
    beam_sec = sections["beam"]
    w_p = beam_sec.take_float("w_p")
    omega_p0 = beam_sec.take_float("omega_p0", gamma31)
    stored_zr = beam_sec.take_float("z_R")
    beam_sec.finish()
    if w_p is None or omega_p0 is None:
        raise ConfigError("[beam] requires w_p and omega_p0")
    if stored_zr is not None:
        _agree(stored_zr, 2.0 * math.pi * w_p**2 / atom.lambda_p, "[beam] z_R")
    beam = BeamConfig.for_atom(atom, w_p=w_p, omega_p0=omega_p0)

    # --- [grid] and [run] (optional, defaulted) ---
    grid_sec = sections["grid"]
    grid_kwargs = {}
    n = grid_sec.take_int("n")
    if n is not None:
        grid_kwargs["n"] = n
    window = grid_sec.take_float("window_over_wp")
    if window is not None:
        grid_kwargs["window_over_wp"] = window
    grid_sec.finish()
    grid = GridConfig(**grid_kwargs)

    run_sec = sections["run"]
    run_kwargs = {}
    z_end = run_sec.take_float("z_end_over_zR")
    if z_end is not None:
        run_kwargs["z_end_over_zR"] = z_end
    n_samples = run_sec.take_int("n_samples")
    if n_samples is not None:
        run_kwargs["n_samples"] = n_samples
    chi3 = run_sec.take_float("chi3")
    if chi3 is not None:
        run_kwargs["chi3"] = chi3
    retune = run_sec.take_bool("retune_delta")
    if retune is not None:
        run_kwargs["retune_delta"] = retune
    run_sec.finish()
    run = RunControls(**run_kwargs)

    return SimConfig(atom, vapor, drive, beam, grid, run, delta_optimal=delta_optimal)


def load_config(path: str | Path) -> SimConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text)


def write_config(cfg: SimConfig, path: str | Path | None = None) -> str:
    """Serialize to canonical config text; float fields round-trip bit-exactly."""
    lines = ["[atom]"]
    atom = cfg.atom
    for key in ("lambda_p", "Gamma31", "Gamma32", "Gamma41", "Gamma42", "gamma21", "Gamma3", "Gamma4"):
        lines.append(f"{key} = {getattr(atom, key)!r}")
    lines.append("")
    lines.append("[vapor]")
    vapor = cfg.vapor
    if vapor.T is not None:
        lines.append(f"T = {vapor.T!r}")
    for key in ("v_th", "gamma_c", "n0", "delta_k", "mass"):
        lines.append(f"{key} = {getattr(vapor, key)!r}")
    lines.append("")
    lines.append("[drive]")
    drive = cfg.drive
    for key in ("omega_c", "pump_p", "delta_c"):
        lines.append(f"{key} = {getattr(drive, key)!r}")
    if cfg.delta_optimal:
        lines.append("delta = optimal")
    else:
        lines.append(f"delta_p = {drive.delta_p!r}")
        lines.append(f"delta = {drive.delta!r}")
    lines.append("")
    lines.append("[beam]")
    lines.append(f"w_p = {cfg.beam.w_p!r}")
    lines.append(f"omega_p0 = {cfg.beam.omega_p0!r}")
    lines.append(f"z_R = {cfg.beam.z_R!r}")
    lines.append("")
    lines.append("[grid]")
    lines.append(f"n = {cfg.grid.n!r}")
    lines.append(f"window_over_wp = {cfg.grid.window_over_wp!r}")
    lines.append("")
    lines.append("[run]")
    lines.append(f"z_end_over_zR = {cfg.run.z_end_over_zR!r}")
    lines.append(f"n_samples = {cfg.run.n_samples!r}")
    lines.append(f"chi3 = {cfg.run.chi3!r}")
    lines.append(f"retune_delta = {'true' if cfg.run.retune_delta else 'false'}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
