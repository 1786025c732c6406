"""Scan harness and figure-style drivers with deterministic file outputs.

Every driver writes into an output directory: one or more CSV data
files, the exact configuration used (``config.ini``), and a
``manifest.json`` recording the config hash, the tool version, and a
per-point status so partial scan failures are visible without grepping
logs.  Outputs carry no timestamps; re-running with the same
configuration yields byte-identical files.

Numbers are written with 17 significant digits so that round-tripping
through the CSV preserves the float64 values exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, NumericsError, PhysicsError
from .field import TransverseField, gaussian, phase_map_csv
from .params import SimConfig, validate, write_config
from .propagation import MediumSpec, Trajectory, propagate_kerr, propagate_linear
from .susceptibility import ChiModel, build_chi_model, optimal_detuning
from .version import __version__

# z position of the first phase flip at the reference operating point,
# used as the comparison plane for the three-medium phase maps.
Z_FOCUS_OVER_ZR = 0.168

# z sampling for scan points: only endpoint diagnostics enter the CSV,
# so the sampling just has to keep the phase unwrapping safe.
_SCAN_SAMPLES = 64

_SCAN_VARIABLES = ("omega_c", "pump_p")

TRAJECTORY_COLUMNS = (
    "z_over_zR",
    "power_rel",
    "width_over_wp",
    "axis_phase_over_pi",
    "uniformity",
)
_POINT_COLUMNS = ("phase_over_pi", "ln_power", "width_over_wp", "rho11", "rho33", "im_rho23")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# =====================================================================
# Manifest
# =====================================================================


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record written next to every output CSV."""

    config_text: str
    sha256: str
    version: str
    points: tuple[dict, ...]

    @classmethod
    def build(cls, cfg: SimConfig, points: Sequence[dict]) -> "RunManifest":
        text = write_config(cfg)
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        return cls(
            config_text=text, sha256=digest, version=__version__, points=tuple(points)
        )

    def write(self, outdir: Path) -> None:
        (outdir / "config.ini").write_text(self.config_text, encoding="utf-8")
        payload = {
            "config_file": "config.ini",
            "config_sha256": self.sha256,
            "points": list(self.points),
            "tool": "lambda-beam",
            "version": self.version,
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
        (outdir / "manifest.json").write_text(text, encoding="utf-8")


def _ensure_outdir(outdir: str | Path) -> Path:
    path = Path(outdir)
    path.mkdir(parents=True, exist_ok=True)
    return path


# =====================================================================
# Configuration resolution
# =====================================================================


def resolve_config(cfg: SimConfig) -> tuple[SimConfig, ChiModel]:
    """Finalize the two-photon detuning and build the susceptibility model.

    ``delta = optimal`` in a config is resolved here (the parameter layer
    cannot do it without circular imports).  Validity-domain violations
    are reported as warnings, not errors: scans may deliberately leave
    the comfortable regime.
    """
    drive = cfg.drive
    model = build_chi_model(cfg.atom, cfg.vapor, drive)
    if cfg.delta_optimal:
        drive = drive.with_delta(optimal_detuning(model))
        model = build_chi_model(cfg.atom, cfg.vapor, drive, steady=model.steady)
        cfg = replace(cfg, drive=drive, delta_optimal=False)
    report = validate(cfg.atom, cfg.vapor, drive)
    if not report.ok:
        warnings.warn(f"operating point outside validity domain: {report.summary()}")
    return cfg, model


def _input_field(cfg: SimConfig) -> TransverseField:
    window = cfg.grid.window_over_wp * cfg.beam.w_p
    return gaussian(cfg.beam, n=cfg.grid.n, window=window)


# =====================================================================
# Single-trajectory drivers
# =====================================================================


def _trajectory_rows(traj: Trajectory, cfg: SimConfig) -> list[list[float]]:
    z_r = cfg.beam.z_R
    w_p = cfg.beam.w_p
    return [
        [z / z_r, d.power, d.width / w_p, d.axis_phase / math.pi, d.uniformity]
        for z, d in traj.samples
    ]


def run_config(cfg: SimConfig, outdir: str | Path, min_samples: int = 64) -> Path:
    """Propagate the configured beam through the vapor; emit trajectory.csv."""
    out = _ensure_outdir(outdir)
    cfg, model = resolve_config(cfg)
    f0 = _input_field(cfg)
    z_end = cfg.run.z_end_over_zR * cfg.beam.z_R
    n_samples = max(min_samples, cfg.run.n_samples)
    traj = propagate_linear(f0, MediumSpec.thermal_vapor(model), z_end, n_samples, cfg.beam)
    _write_csv(out / "trajectory.csv", TRAJECTORY_COLUMNS, _trajectory_rows(traj, cfg))
    RunManifest.build(cfg, [{"index": 0, "status": "ok"}]).write(out)
    return out / "trajectory.csv"


def figure3(cfg: SimConfig, outdir: str | Path) -> Path:
    """Beam evolution through the vapor over one Rayleigh length.

    Same as :func:`run_config` but with at least 512 z samples, enough
    to resolve the phase flips and the shallow width ripple.
    """
    return run_config(cfg, outdir, min_samples=512)


# =====================================================================
# Scans
# =====================================================================


@dataclass(frozen=True)
class ScanSpec:
    """One- or two-variable scan over drive parameters.

    Ranges are given in units of the radiative rate on the probe
    transition (the same normalization the CSV columns use).
    """

    variables: tuple[str, ...]
    ranges: tuple[tuple[float, float, int], ...]
    base: SimConfig
    outdir: Path

    def __post_init__(self) -> None:
        if not 1 <= len(self.variables) <= 2:
            raise ConfigError("a scan takes one or two variables")
        if len(set(self.variables)) != len(self.variables):
            raise ConfigError("scan variables must be distinct")
        for name in self.variables:
            if name not in _SCAN_VARIABLES:
                raise ConfigError(
                    f"unknown scan variable {name!r}; choose from {_SCAN_VARIABLES}"
                )
        if len(self.ranges) != len(self.variables):
            raise ConfigError("need one (lo, hi, points) range per variable")
        for (lo, hi, points), name in zip(self.ranges, self.variables):
            if points < 2:
                raise ConfigError(f"{name}: a scan needs at least 2 points")
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ConfigError(f"{name}: scan range must satisfy lo < hi")
            if lo < 0:
                raise ConfigError(f"{name}: negative drive strengths are not physical")

    def axis(self, i: int) -> list[float]:
        lo, hi, points = self.ranges[i]
        return [lo + (hi - lo) * j / (points - 1) for j in range(points)]


def _apply_assignment(base: SimConfig, assignment: dict[str, float]) -> SimConfig:
    drive = base.drive
    gamma31 = base.atom.Gamma31
    for name, value in assignment.items():
        if name == "omega_c":
            drive = drive.with_omega_c(value * gamma31)
        else:
            drive = drive.with_pump(value * gamma31)
    return replace(base, drive=drive)


def _scan_point(
    base: SimConfig, f0: TransverseField, assignment: dict[str, float]
) -> tuple[list[float], str]:
    """Evaluate one operating point; never raises, returns (row, status)."""
    try:
        cfg = _apply_assignment(base, assignment)
        drive = cfg.drive
        model = build_chi_model(cfg.atom, cfg.vapor, drive)
        if cfg.run.retune_delta:
            drive = drive.with_delta(optimal_detuning(model))
            model = build_chi_model(cfg.atom, cfg.vapor, drive, steady=model.steady)
        z_end = cfg.run.z_end_over_zR * cfg.beam.z_R
        with warnings.catch_warnings():
            # far-off operating points legitimately leave the quadratic
            # regime; the CSV row itself is the record of what happened
            warnings.simplefilter("ignore")
            traj = propagate_linear(
                f0, MediumSpec.thermal_vapor(model), z_end, _SCAN_SAMPLES, cfg.beam
            )
        end = traj.end
        steady = model.steady
        row = [
            end.axis_phase / math.pi,
            math.log(end.power),
            end.width / cfg.beam.w_p,
            steady.rho11,
            steady.rho33,
            steady.rho23.imag,
        ]
        return row, "ok"
    except (ConfigError, PhysicsError, NumericsError) as exc:
        return [math.nan] * len(_POINT_COLUMNS), f"failed: {exc}"


def _worker_count() -> int:
    env = os.environ.get("LAMBDA_BEAM_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError as exc:
            raise ConfigError(f"LAMBDA_BEAM_THREADS must be an integer, got {env!r}") from exc
        if cap < 1:
            raise ConfigError("LAMBDA_BEAM_THREADS must be at least 1")
        return cap
    return min(4, os.cpu_count() or 1)


def _column_name(variable: str) -> str:
    return "omega_c_over_G31" if variable == "omega_c" else "p_over_G31"


def run_scan(spec: ScanSpec) -> Path:
    """Execute a scan: one propagation per grid point, CSV + manifest out.

    The two-photon detuning stays at the base configuration's value
    unless ``run.retune_delta`` is set, in which case each point
    re-optimizes it.  Failed points are recorded as NaN rows in the CSV
    and as ``failed: ...`` entries in the manifest; the scan continues.
    """
    out = _ensure_outdir(spec.outdir)
    base, _ = resolve_config(spec.base)
    f0 = _input_field(base)

    if len(spec.variables) == 1:
        coords = [{spec.variables[0]: v} for v in spec.axis(0)]
        name = f"scan_{spec.variables[0]}.csv"
    else:
        # slow axis = second variable, so each block of rows at fixed
        # second value reads like the corresponding one-variable scan
        coords = [
            {spec.variables[0]: v0, spec.variables[1]: v1}
            for v1 in spec.axis(1)
            for v0 in spec.axis(0)
        ]
        name = "scan_2d.csv"

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        results = list(pool.map(lambda c: _scan_point(base, f0, c), coords))

    header = [_column_name(v) for v in spec.variables] + list(_POINT_COLUMNS)
    rows = []
    points = []
    for index, (coord, (row, status)) in enumerate(zip(coords, results)):
        values = [coord[v] for v in spec.variables]
        rows.append(values + row)
        entry = {"index": index, "status": status}
        for v in spec.variables:
            entry[_column_name(v)] = coord[v]
        points.append(entry)

    _write_csv(out / name, header, rows)
    RunManifest.build(base, points).write(out)
    return out / name


def scan_control(spec: ScanSpec) -> Path:
    if spec.variables != ("omega_c",):
        raise ConfigError("scan_control scans omega_c only")
    return run_scan(spec)


def scan_pump(spec: ScanSpec) -> Path:
    if spec.variables != ("pump_p",):
        raise ConfigError("scan_pump scans pump_p only")
    return run_scan(spec)


def scan_2d(spec: ScanSpec) -> Path:
    if len(spec.variables) != 2:
        raise ConfigError("scan_2d needs two variables")
    return run_scan(spec)


def figure4(cfg: SimConfig, outdir: str | Path) -> Path:
    """Endpoint phase, power, and width against the control strength."""
    spec = ScanSpec(
        variables=("omega_c",),
        ranges=((0.0, 2.5, 26),),
        base=cfg,
        outdir=Path(outdir),
    )
    return scan_control(spec)


def figure5(cfg: SimConfig, outdir: str | Path) -> Path:
    """Endpoint phase, power, and width against the incoherent pump rate."""
    spec = ScanSpec(
        variables=("pump_p",),
        ranges=((0.3, 2.0, 35),),
        base=cfg,
        outdir=Path(outdir),
    )
    return scan_pump(spec)


def figure6(cfg: SimConfig, outdir: str | Path) -> Path:
    """Two-dimensional control/pump map of the endpoint diagnostics."""
    spec = ScanSpec(
        variables=("omega_c", "pump_p"),
        ranges=((0.25, 2.5, 10), (0.3, 2.0, 9)),
        base=cfg,
        outdir=Path(outdir),
    )
    return scan_2d(spec)


# =====================================================================
# Three-medium comparison
# =====================================================================


def figure7(cfg: SimConfig, outdir: str | Path) -> Path:
    """Transverse phase maps after free-space, Kerr, and vapor propagation.

    All three media receive the same input beam and run to the phase
    flip plane z_f.  Emits one phase-map CSV per medium plus the
    uniformity-versus-z curves (from z = 0.002 z_R on, below which the
    metric is 0/0 noise).
    """
    out = _ensure_outdir(outdir)
    cfg, model = resolve_config(cfg)
    f0 = _input_field(cfg)
    z_f = Z_FOCUS_OVER_ZR * cfg.beam.z_R
    steps = 168  # z step of 0.001 z_R, comfortably inside the split-step budget

    points = []
    trajectories: dict[str, Trajectory | None] = {}
    arms = (
        ("free_space", lambda: propagate_linear(
            f0, MediumSpec.free_space(), z_f, steps, cfg.beam)),
        ("kerr", lambda: propagate_kerr(
            f0, cfg.run.chi3, z_f, steps, cfg.beam)),
        ("vapor", lambda: propagate_linear(
            f0, MediumSpec.thermal_vapor(model), z_f, steps, cfg.beam)),
    )
    for index, (label, runner) in enumerate(arms):
        try:
            traj = runner()
            trajectories[label] = traj
            phase_map_csv(traj.final, out / f"phase_map_{label}.csv")
            status = "ok"
        except (ConfigError, PhysicsError, NumericsError) as exc:
            trajectories[label] = None
            status = f"failed: {exc}"
        points.append({"index": index, "medium": label, "status": status})

    rows = []
    reference = next((t for t in trajectories.values() if t is not None), None)
    if reference is not None:
        z_r = cfg.beam.z_R
        z_min = 0.002 * z_r * (1.0 - 1e-9)
        for i, (z, _) in enumerate(reference.samples):
            if z < z_min:
                continue
            row = [z / z_r]
            for label in ("free_space", "kerr", "vapor"):
                traj = trajectories[label]
                row.append(traj.samples[i][1].uniformity if traj else math.nan)
            rows.append(row)
    _write_csv(
        out / "uniformity_vs_z.csv",
        ("z_over_zR", "uniformity_free_space", "uniformity_kerr", "uniformity_vapor"),
        rows,
    )
    RunManifest.build(cfg, points).write(out)
    return out / "uniformity_vs_z.csv"
