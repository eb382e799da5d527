"""Sweep configuration and its YAML loader."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np
import yaml

from vvhom.mode_space import ModeBasisId, VVState, ket


class ConfigError(ValueError):
    pass


class InputPair(enum.Enum):
    CIRCULAR = "CircularPair"
    RADIAL_AZIMUTHAL = "RadialAzimuthalPair"
    ANTI_DIAG = "AntiDiagPair"

    @classmethod
    def parse(cls, value: "str | InputPair") -> "InputPair":
        if isinstance(value, cls):
            return value
        key = str(value).replace("_", "").replace("-", "").lower()
        for member in cls:
            if key in (member.value.lower(), member.name.replace("_", "").lower()):
                return member
        raise ConfigError(f"unknown input_pair {value!r}; expected one of {[m.value for m in cls]}")

    @property
    def kets(self) -> tuple[str, str]:
        return _PAIR_KETS[self]

    @property
    def natural_basis(self) -> ModeBasisId:
        return _PAIR_BASIS[self]

    def states(self, order: int = 1) -> tuple[VVState, VVState]:
        first, second = self.kets
        return ket(first, order), ket(second, order)


_PAIR_KETS = {
    InputPair.CIRCULAR: ("R", "L"),
    InputPair.RADIAL_AZIMUTHAL: ("r", "theta"),
    InputPair.ANTI_DIAG: ("a", "d"),
}
_PAIR_BASIS = {
    InputPair.CIRCULAR: ModeBasisId.CIRCULAR,
    InputPair.RADIAL_AZIMUTHAL: ModeBasisId.RADIAL_AZIMUTHAL,
    InputPair.ANTI_DIAG: ModeBasisId.ANTI_DIAG,
}


class SweepKind(enum.Enum):
    DELTA = "delta"
    DELAY = "delay"


@dataclass(frozen=True)
class SweepConfig:
    """One sweep experiment.

    ``grid`` is (min, max, steps) in radians for delta sweeps and in
    picoseconds for delay sweeps. ``measure_basis`` defaults to the natural
    basis of the input pair.
    """

    input_pair: InputPair = InputPair.CIRCULAR
    alpha0: float = 0.0
    sweep_kind: SweepKind = SweepKind.DELTA
    grid: tuple[float, float, int] = (0.0, math.pi, 61)
    fixed_delta: float = math.pi / 2
    tau_c: float = 150.0
    pair_rate: float = 5000.0
    seed: int = 0
    measure_basis: ModeBasisId | None = None
    gamma_abs2: float | None = None
    # orbit / render-field extras
    state: str = "r"
    order: int = 1
    waist: float = 1.0
    field_extent: float = 2.0
    field_steps: int = 41
    data: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "input_pair", InputPair.parse(self.input_pair))
        if not isinstance(self.sweep_kind, SweepKind):
            try:
                object.__setattr__(self, "sweep_kind", SweepKind(str(self.sweep_kind).lower()))
            except ValueError:
                raise ConfigError(f"unknown sweep kind {self.sweep_kind!r}") from None
        if self.measure_basis is None:
            object.__setattr__(self, "measure_basis", self.input_pair.natural_basis)
        else:
            try:
                object.__setattr__(self, "measure_basis", ModeBasisId.parse(self.measure_basis))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        lo, hi, steps = self.grid
        if int(steps) != steps or steps < 2:
            raise ConfigError(f"sweep.steps must be an integer >= 2, got {steps!r}")
        object.__setattr__(self, "grid", (float(lo), float(hi), int(steps)))
        if not self.pair_rate > 0:
            raise ConfigError(f"pair_rate must be positive, got {self.pair_rate!r}")
        if not self.tau_c > 0:
            raise ConfigError(f"tau_c_ps must be positive, got {self.tau_c!r}")
        if int(self.seed) != self.seed or self.seed < 0 or self.seed >= 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))
        if self.gamma_abs2 is not None and not 0.0 <= self.gamma_abs2 <= 1.0:
            raise ConfigError(f"gamma_abs2 must lie in [0, 1], got {self.gamma_abs2!r}")
        if self.order < 1 or self.waist <= 0 or self.field_extent <= 0 or self.field_steps < 2:
            raise ConfigError("order >= 1, waist > 0, field_extent > 0 and field_steps >= 2 required")
        try:
            ket(self.state, self.order)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def xs(self) -> np.ndarray:
        lo, hi, steps = self.grid
        return np.linspace(lo, hi, steps)

    def replace(self, **changes) -> "SweepConfig":
        return replace(self, **changes)

    def to_mapping(self) -> dict[str, Any]:
        """Config echo in file-key form, stable order."""
        lo, hi, steps = self.grid
        out = {
            "input_pair": self.input_pair.value,
            "alpha0_rad": self.alpha0,
            "measure_basis": self.measure_basis.value,
            "sweep_kind": self.sweep_kind.value,
            "sweep": {"min": lo, "max": hi, "steps": steps},
            "fixed_delta_rad": self.fixed_delta,
            "tau_c_ps": self.tau_c,
            "pair_rate": self.pair_rate,
            "seed": self.seed,
        }
        if self.gamma_abs2 is not None:
            out["gamma_abs2"] = self.gamma_abs2
        return out

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any], sweep_kind: SweepKind | str | None = None) -> "SweepConfig":
        if not isinstance(raw, Mapping):
            raise ConfigError("config must be a key-value mapping")
        raw = dict(raw)
        kwargs: dict[str, Any] = {}
        try:
            for src, dst, conv in _SCALAR_KEYS:
                if src in raw:
                    kwargs[dst] = conv(raw.pop(src))
            if "sweep" in raw:
                sweep = raw.pop("sweep")
                if not isinstance(sweep, Mapping) or not {"min", "max", "steps"} <= set(sweep):
                    raise ConfigError("sweep must be a mapping with keys min, max, steps")
                kwargs["grid"] = (float(sweep["min"]), float(sweep["max"]), sweep["steps"])
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad config value: {exc}") from None
        if sweep_kind is not None:
            kwargs["sweep_kind"] = sweep_kind
        if raw:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(map(str, raw)))}")
        try:
            return cls(**kwargs)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


def _optional_float(v):
    return None if v is None else float(v)


_SCALAR_KEYS = [
    ("input_pair", "input_pair", str),
    ("alpha0_rad", "alpha0", float),
    ("measure_basis", "measure_basis", str),
    ("sweep_kind", "sweep_kind", str),
    ("fixed_delta_rad", "fixed_delta", float),
    ("tau_c_ps", "tau_c", float),
    ("pair_rate", "pair_rate", float),
    ("seed", "seed", int),
    ("gamma_abs2", "gamma_abs2", _optional_float),
    ("state", "state", str),
    ("order", "order", int),
    ("waist", "waist", float),
    ("field_extent", "field_extent", float),
    ("field_steps", "field_steps", int),
    ("data", "data", str),
]


def load_config(path: str | Path, sweep_kind: SweepKind | str | None = None) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML ({exc})") from None
    if raw is None:
        raw = {}
    return SweepConfig.from_mapping(raw, sweep_kind)
