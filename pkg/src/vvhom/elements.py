"""q-plate and waveplate unitaries, single-photon action and Poincare orbits."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from vvhom.mode_space import (
    E_L,
    E_R,
    ModeBasisId,
    SingleParticleUnitary,
    StokesVector,
    VVState,
    hybrid_stokes,
)

PHASE_TOL = 1e-10

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QPlateParams:
    """Device parameters: topological charge, retardation and offset angle.

    ``delta`` is reduced to [0, 2pi) and ``alpha0`` to [0, pi).
    """

    q: float
    delta: float = math.pi
    alpha0: float = 0.0

    def __post_init__(self):
        twice = 2.0 * self.q
        if abs(twice - round(twice)) > 1e-12:
            raise ValueError(f"q must be a half-integer, got {self.q}")
        object.__setattr__(self, "q", round(twice) / 2.0)
        object.__setattr__(self, "delta", float(self.delta) % _TWO_PI)
        object.__setattr__(self, "alpha0", float(self.alpha0) % math.pi)

    def unitary(self, basis: ModeBasisId = ModeBasisId.CIRCULAR) -> SingleParticleUnitary:
        return qplate_unitary_in_basis(self.delta, self.alpha0, basis)


def director_angle(params: QPlateParams, phi):
    """Liquid-crystal director angle alpha0 + q*phi, reduced mod pi.

    Accepts scalar or array azimuths.
    """
    return np.mod(params.alpha0 + params.q * np.asarray(phi, dtype=float), math.pi)


def director_field(params: QPlateParams, x, y):
    """Director angle sampled on Cartesian points of the plate."""
    return director_angle(params, np.arctan2(y, x))


def qplate_unitary(delta: float, alpha0: float) -> SingleParticleUnitary:
    """q=m plate acting inside the order-m VV space, Circular basis."""
    c = math.cos(delta / 2.0)
    s = math.sin(delta / 2.0)
    e = complex(math.cos(2.0 * alpha0), math.sin(2.0 * alpha0))
    return SingleParticleUnitary(
        np.array([[c, 1j * e * s], [1j * e.conjugate() * s, c]]),
        ModeBasisId.CIRCULAR,
    )


def qplate_unitary_in_basis(delta: float, alpha0: float, basis: ModeBasisId) -> SingleParticleUnitary:
    return qplate_unitary(delta, alpha0).in_basis(ModeBasisId.parse(basis))


class WaveplateKind(enum.Enum):
    HALF = math.pi
    QUARTER = math.pi / 2.0


# Jones vector J = C @ circular amplitudes.
_C = np.column_stack([E_R, E_L])


def waveplate(kind: WaveplateKind, axis_angle: float) -> SingleParticleUnitary:
    """Uniform retarder with fast axis at ``axis_angle`` from x, Circular basis.

    The plate acts on polarization only; in the VV picture it is applied
    between the spin-orbit interfaces, so it is represented directly on the
    circular amplitudes.
    """
    if isinstance(kind, str):
        kind = WaveplateKind[kind.upper()]
    g = kind.value
    c, s = math.cos(axis_angle), math.sin(axis_angle)
    rot = np.array([[c, s], [-s, c]])
    lin = rot.T @ np.diag([np.exp(-0.5j * g), np.exp(0.5j * g)]) @ rot
    return SingleParticleUnitary(_C.conj().T @ lin @ _C, ModeBasisId.CIRCULAR)


def apply_single(U: SingleParticleUnitary, state: VVState) -> VVState:
    if U.basis is not state.basis:
        raise ValueError(
            f"basis mismatch: operator in {U.basis.value}, state in {state.basis.value}"
        )
    v = U.entries @ state.vector
    return VVState(state.order, (complex(v[0]), complex(v[1])), U.out_basis)


def orbit(state: VVState, alpha0: float, deltas: Iterable[float]) -> list[StokesVector]:
    deltas = list(deltas)
    if not deltas:
        raise ValueError("orbit needs at least one retardation value")
    start = state.in_basis(ModeBasisId.CIRCULAR)
    return [hybrid_stokes(apply_single(qplate_unitary(d, alpha0), start)) for d in deltas]


def phase_distance(a, b) -> float:
    """Min over a global unit phase of the max entrywise difference."""
    a = np.asarray(getattr(a, "entries", a), dtype=complex)
    b = np.asarray(getattr(b, "entries", b), dtype=complex)
    inner = np.vdot(b, a)
    phase = inner / abs(inner) if abs(inner) > 0 else 1.0
    return float(np.max(np.abs(a - phase * b)))


def equal_up_to_phase(a, b, tol: float = PHASE_TOL) -> bool:
    return phase_distance(a, b) <= tol
