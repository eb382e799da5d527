"""Command line entry point.

    vvhom sweep-delta  --config cfg.yaml --out sweep.csv
    vvhom sweep-delay  --config cfg.yaml --out dip.csv
    vvhom orbit        --config cfg.yaml --out orbit.csv
    vvhom render-field --config cfg.yaml --out field.csv
    vvhom fit          --config cfg.yaml --out fit.csv [--data sweep.csv]

An ``--out`` ending in ``.svg`` selects SVG output. Exit codes: 0 success,
2 config error, 3 fit failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from vvhom import __version__
from vvhom.lab.config import ConfigError, SweepConfig, SweepKind, load_config
from vvhom.lab.export import ExportError, export, read_records, write_output
from vvhom.lab.fitting import DelayDip, DeltaFringe, FitError, fit_fringe
from vvhom.lab.sweeps import RNG_IDENTITY, render_field, run_orbit, run_sweep

log = logging.getLogger("vvhom")

EXIT_OK, EXIT_CONFIG, EXIT_FIT = 0, 2, 3


def metadata(config: SweepConfig, kind: str) -> list[str]:
    return [
        f"vvhom {__version__} {kind}",
        f"rng: {RNG_IDENTITY}",
        f"config: {json.dumps(config.to_mapping())}",
    ]


def _format(args) -> str:
    if args.format:
        return args.format
    return "svg" if Path(args.out).suffix.lower() == ".svg" else "csv"


def _cmd_sweep(args, kind: SweepKind) -> int:
    config = load_config(args.config, kind)
    records = run_sweep(config)
    write_output(args.out, export(records, _format(args), metadata=metadata(config, f"sweep-{kind.value}")))
    return EXIT_OK


def _cmd_orbit(args) -> int:
    config = load_config(args.config)
    trace = run_orbit(config)
    write_output(args.out, export(trace, _format(args), metadata=metadata(config, "orbit")))
    return EXIT_OK


def _cmd_field(args) -> int:
    config = load_config(args.config)
    grid = render_field(config)
    meta = [f"vvhom {__version__} render-field", f"state={config.state} order={config.order} waist={config.waist!r}"]
    write_output(args.out, export(grid, _format(args), metadata=meta))
    return EXIT_OK


def _cmd_fit(args) -> int:
    config = load_config(args.config)
    data = args.data or config.data
    if data:
        path = Path(data)
        if not path.is_absolute() and args.data is None:
            path = Path(args.config).parent / path
        try:
            records = read_records(path)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    else:
        records = run_sweep(config)
    if config.sweep_kind is SweepKind.DELTA:
        model = DeltaFringe(config.input_pair, config.alpha0, config.measure_basis)
    else:
        model = DelayDip(config.input_pair, config.alpha0, config.fixed_delta, config.measure_basis)
    fit = fit_fringe(records, model)
    if fit.flat:
        log.warning("parameters not identifiable from these data: %s", ", ".join(fit.flat_parameters))
    if _format(args) == "svg":
        payload = export(records, "svg", fit=fit)
    else:
        payload = export(fit, "csv", metadata=metadata(config, "fit"))
    write_output(args.out, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vvhom", description="q-plate two-photon interference simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "sweep-delta": lambda a: _cmd_sweep(a, SweepKind.DELTA),
        "sweep-delay": lambda a: _cmd_sweep(a, SweepKind.DELAY),
        "orbit": _cmd_orbit,
        "render-field": _cmd_field,
        "fit": _cmd_fit,
    }
    for name, handler in commands.items():
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML config file")
        p.add_argument("--out", required=True, help="output path (.csv or .svg)")
        p.add_argument("--format", choices=("csv", "svg"), help="override format inferred from --out")
        if name == "fit":
            p.add_argument("--data", help="sweep CSV to fit (default: simulate from the config)")
        p.set_defaults(handler=handler)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except FitError as exc:
        log.error("fit failed: %s", exc)
        return EXIT_FIT
    except ExportError as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
