"""Experiment harness: sweeps, synthetic counts, fits, export and the CLI."""

from vvhom.lab.config import ConfigError, InputPair, SweepConfig, SweepKind, load_config
from vvhom.lab.export import ExportError, export, read_records, write_output
from vvhom.lab.fitting import DelayDip, DeltaFringe, FitError, FitResult, fit_fringe
from vvhom.lab.sweeps import (
    RNG_IDENTITY,
    FieldGrid,
    OrbitTrace,
    SweepRecord,
    coincidence_curve,
    point_rng,
    render_field,
    run_delay_sweep,
    run_delta_sweep,
    run_orbit,
    run_sweep,
    sample_counts,
)

__all__ = [
    "RNG_IDENTITY",
    "ConfigError",
    "DelayDip",
    "DeltaFringe",
    "ExportError",
    "FieldGrid",
    "FitError",
    "FitResult",
    "InputPair",
    "OrbitTrace",
    "SweepConfig",
    "SweepKind",
    "SweepRecord",
    "coincidence_curve",
    "export",
    "fit_fringe",
    "load_config",
    "point_rng",
    "read_records",
    "render_field",
    "run_delay_sweep",
    "run_delta_sweep",
    "run_orbit",
    "run_sweep",
    "sample_counts",
    "write_output",
]
