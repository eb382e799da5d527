"""Parameter sweeps with Poissonian synthetic counts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vvhom.elements import orbit, qplate_unitary
from vvhom.interference import (
    PhotonPair,
    coincidence_probability,
    overlap_from_delay,
    pattern_probabilities,
)
from vvhom.lab.config import ConfigError, InputPair, SweepConfig, SweepKind
from vvhom.mode_space import (
    ModeBasisId,
    PolarizationSample,
    StokesVector,
    basis_change,
    ket,
    sample_transverse_field,
)

RNG_IDENTITY = (
    f"numpy {np.__version__} Generator(PCG64) seeded by SeedSequence(entropy=seed, spawn_key=(point_index,))"
)


@dataclass(frozen=True)
class SweepRecord:
    x: float
    p_model: float
    counts: int
    sigma: float


def point_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for grid point ``index``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_counts(p: float, rate: float, stream: np.random.Generator) -> int:
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise ValueError(f"probability out of range: {p}")
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    return int(stream.poisson(rate * min(max(p, 0.0), 1.0)))


def _pair(config: SweepConfig, gamma: complex = 1.0) -> PhotonPair:
    a, b = config.input_pair.states(config.order)
    return PhotonPair(a, b, gamma)


def _records(config: SweepConfig, xs, probs) -> list[SweepRecord]:
    out = []
    for i, (x, p) in enumerate(zip(xs, probs)):
        p = min(max(float(p), 0.0), 1.0)
        n = sample_counts(p, config.pair_rate, point_rng(config.seed, i))
        out.append(SweepRecord(float(x), p, n, math.sqrt(n)))
    return out


def run_delta_sweep(config: SweepConfig) -> list[SweepRecord]:
    if config.sweep_kind is not SweepKind.DELTA:
        raise ConfigError("run_delta_sweep needs sweep_kind = delta")
    g2 = 1.0 if config.gamma_abs2 is None else config.gamma_abs2
    pair = _pair(config, math.sqrt(g2))
    xs = config.xs
    probs = [coincidence_probability(pair, qplate_unitary(d, config.alpha0), config.measure_basis) for d in xs]
    return _records(config, xs, probs)


def run_delay_sweep(config: SweepConfig) -> list[SweepRecord]:
    if config.sweep_kind is not SweepKind.DELAY:
        raise ConfigError("run_delay_sweep needs sweep_kind = delay")
    U = qplate_unitary(config.fixed_delta, config.alpha0)
    xs = config.xs
    probs = [
        coincidence_probability(_pair(config, overlap_from_delay(dt, config.tau_c)), U, config.measure_basis)
        for dt in xs
    ]
    return _records(config, xs, probs)


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    if config.sweep_kind is SweepKind.DELTA:
        return run_delta_sweep(config)
    return run_delay_sweep(config)


def qplate_stack(deltas, alpha0: float) -> np.ndarray:
    """Circular-basis q-plate matrices for many retardations, shape (n, 2, 2)."""
    d = np.asarray(deltas, dtype=float)
    c = np.cos(d / 2.0)
    s = np.sin(d / 2.0)
    e = np.exp(2j * alpha0)
    out = np.empty(d.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = 1j * e * s
    out[..., 1, 0] = 1j * np.conj(e) * s
    out[..., 1, 1] = c
    return out


def coincidence_curve(
    input_pair: InputPair,
    alpha0: float,
    deltas,
    gamma_abs2=1.0,
    measure_basis: ModeBasisId | None = None,
    order: int = 1,
) -> np.ndarray:
    """Vectorized p11 over retardations; same kernel as ``evolve_pair``."""
    input_pair = InputPair.parse(input_pair)
    basis = input_pair.natural_basis if measure_basis is None else ModeBasisId.parse(measure_basis)
    a, b = input_pair.states(order)
    change = basis_change(ModeBasisId.CIRCULAR, basis).entries
    transfer = change @ qplate_stack(deltas, alpha0)
    probs, _ = pattern_probabilities(transfer, a.circular(), b.circular(), gamma_abs2)
    return probs[..., 1]


@dataclass(frozen=True)
class OrbitTrace:
    deltas: tuple[float, ...]
    points: tuple[StokesVector, ...]
    alpha0: float


def run_orbit(config: SweepConfig) -> OrbitTrace:
    deltas = [float(d) for d in config.xs]
    pts = orbit(ket(config.state, config.order), config.alpha0, deltas)
    return OrbitTrace(tuple(deltas), tuple(pts), config.alpha0)


@dataclass(frozen=True)
class FieldGrid:
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    samples: tuple[PolarizationSample, ...]  # row-major, y outer


def render_field(config: SweepConfig) -> FieldGrid:
    state = ket(config.state, config.order)
    axis = np.linspace(-config.field_extent, config.field_extent, config.field_steps)
    samples = []
    for y in axis:
        for x in axis:
            r = math.hypot(x, y)
            phi = math.atan2(y, x)
            samples.append(sample_transverse_field(state, r, phi, config.waist))
    return FieldGrid(tuple(map(float, axis)), tuple(map(float, axis)), tuple(samples))
