"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 physics-validity error,
4 numerical failure.  ``LAMBDA_BEAM_THREADS`` caps the scan worker pool.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, NumericsError, PhysicsError
from .experiments import (
    ScanSpec,
    figure3,
    figure4,
    figure5,
    figure6,
    figure7,
    resolve_config,
    run_config,
    run_scan,
)
from .params import SimConfig, default_config, load_config, validate
from .susceptibility import check_report
from .version import __version__

log = logging.getLogger("lambda-beam")

_FIGURES = {"3": figure3, "4": figure4, "5": figure5, "6": figure6, "7": figure7}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambda-beam",
        description="Probe-beam propagation through a pumped double-Lambda vapor",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="propagate the configured beam, write trajectory.csv")
    p_run.add_argument("config", help="configuration file")
    p_run.add_argument("--out", default="run_out", help="output directory")

    p_fig = sub.add_parser("figure", help="reproduce one of the canned studies")
    p_fig.add_argument("number", choices=sorted(_FIGURES), help="study number")
    p_fig.add_argument("--config", help="configuration file (defaults to built-in)")
    p_fig.add_argument("--out", help="output directory (default figure<N>_out)")

    p_scan = sub.add_parser("scan", help="scan drive parameters, one propagation per point")
    p_scan.add_argument("config", help="base configuration file")
    p_scan.add_argument(
        "--variable", required=True, choices=("omega_c", "pump_p"), help="scan variable"
    )
    p_scan.add_argument("--lo", type=float, required=True, help="range start (units of Gamma31)")
    p_scan.add_argument("--hi", type=float, required=True, help="range end (units of Gamma31)")
    p_scan.add_argument("--points", type=int, required=True, help="number of grid points")
    p_scan.add_argument(
        "--variable2", choices=("omega_c", "pump_p"), help="second variable (2-D scan)"
    )
    p_scan.add_argument("--lo2", type=float, help="second range start")
    p_scan.add_argument("--hi2", type=float, help="second range end")
    p_scan.add_argument("--points2", type=int, help="second grid size")
    p_scan.add_argument(
        "--retune-delta",
        action="store_true",
        help="re-optimize the two-photon detuning at every point",
    )
    p_scan.add_argument("--out", default="scan_out", help="output directory")

    p_check = sub.add_parser("check", help="print validity and susceptibility report")
    p_check.add_argument("config", nargs="?", help="configuration file (defaults to built-in)")
    p_check.add_argument("--csv", help="also write the report as CSV")

    return parser


def _load(path: str | None) -> SimConfig:
    return load_config(path) if path else default_config()


def _fmt_value(value: complex | float) -> str:
    if isinstance(value, complex):
        return f"{value.real:.12g} {value.imag:+.12g}j"
    return f"{value:.12g}"


def _cmd_run(args: argparse.Namespace) -> None:
    path = run_config(load_config(args.config), args.out)
    log.info("wrote %s", path)


def _cmd_figure(args: argparse.Namespace) -> None:
    cfg = _load(args.config)
    out = args.out or f"figure{args.number}_out"
    path = _FIGURES[args.number](cfg, out)
    log.info("wrote %s", path)


def _cmd_scan(args: argparse.Namespace) -> None:
    cfg = _load(args.config)
    if args.retune_delta:
        cfg = replace(cfg, run=replace(cfg.run, retune_delta=True))
    variables: tuple[str, ...] = (args.variable,)
    ranges: tuple[tuple[float, float, int], ...] = ((args.lo, args.hi, args.points),)
    if args.variable2:
        if args.lo2 is None or args.hi2 is None or args.points2 is None:
            raise ConfigError("--variable2 needs --lo2, --hi2, and --points2")
        variables += (args.variable2,)
        ranges += ((args.lo2, args.hi2, args.points2),)
    elif args.lo2 is not None or args.hi2 is not None or args.points2 is not None:
        raise ConfigError("--lo2/--hi2/--points2 are only valid with --variable2")
    spec = ScanSpec(variables=variables, ranges=ranges, base=cfg, outdir=Path(args.out))
    path = run_scan(spec)
    log.info("wrote %s", path)


def _cmd_check(args: argparse.Namespace) -> None:
    cfg, model = resolve_config(_load(args.config))
    report = validate(cfg.atom, cfg.vapor, cfg.drive)
    print(report.summary())
    values = check_report(model)
    for key, value in values.items():
        print(f"{key} = {_fmt_value(value)}")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("name,real,imag\n")
            for key, value in values.items():
                c = complex(value)
                fh.write(f"{key},{c.real:.17g},{c.imag:.17g}\n")
    if not report.ok:
        raise PhysicsError(f"operating point outside validity domain: {report.summary()}")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "figure": _cmd_figure,
        "scan": _cmd_scan,
        "check": _cmd_check,
    }
    try:
        handlers[args.command](args)
    except ConfigError as exc:
        log.error("%s", exc)
        return 2
    except PhysicsError as exc:
        log.error("%s", exc)
        return 3
    except NumericsError as exc:
        log.error("%s", exc)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
