"""Order-m vector-vortex mode space.

A VV subspace of order m is spanned by |R,+m> and |L,-m>. Three mutually
unbiased bases are used throughout:

    Circular         {|R,+m>, |L,-m>}
    RadialAzimuthal  {|r_m>, |theta_m>} = (|R,+m> +/- |L,-m>)/sqrt(2)
    AntiDiag         {|a_m>, |d_m>}     = (|R,+m> +/- i|L,-m>)/sqrt(2)

Conventions: the circular Jones vectors are e_R = (1, -i)/sqrt(2) and
e_L = (1, i)/sqrt(2), which makes |r_1> radially polarized. On the hybrid
Poincare sphere |r_m> sits on +s1 and |a_m> on +s2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12

_SQRT1_2 = 1.0 / math.sqrt(2.0)

E_R = np.array([1.0, -1.0j]) * _SQRT1_2
E_L = np.array([1.0, 1.0j]) * _SQRT1_2


class ModeBasisId(enum.Enum):
    CIRCULAR = "Circular"
    RADIAL_AZIMUTHAL = "RadialAzimuthal"
    ANTI_DIAG = "AntiDiag"

    @classmethod
    def parse(cls, value: "str | ModeBasisId") -> "ModeBasisId":
        if isinstance(value, cls):
            return value
        key = str(value).replace("_", "").replace("-", "").lower()
        for member in cls:
            if member.value.lower() == key or member.name.replace("_", "").lower() == key:
                return member
        raise ValueError(f"unknown mode basis {value!r}")


# Columns are the basis vectors written in Circular coordinates.
_BASIS_VECTORS = {
    ModeBasisId.CIRCULAR: np.eye(2, dtype=complex),
    ModeBasisId.RADIAL_AZIMUTHAL: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT1_2,
    ModeBasisId.ANTI_DIAG: np.array([[1, 1], [1j, -1j]], dtype=complex) * _SQRT1_2,
}


@dataclass(frozen=True, eq=False)
class SingleParticleUnitary:
    """2x2 matrix on VV mode amplitudes.

    ``entries`` act on column vectors of amplitudes expressed in ``basis``.
    The result is expressed in ``out_basis``, which equals ``basis`` for every
    physical element; only basis-change matrices have the two differ.
    """

    entries: np.ndarray
    basis: ModeBasisId = ModeBasisId.CIRCULAR
    out_basis: ModeBasisId | None = None

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if self.out_basis is None:
            object.__setattr__(self, "out_basis", self.basis)

    def unitarity_error(self) -> float:
        m = self.entries
        return float(np.max(np.abs(m @ m.conj().T - np.eye(2))))

    def is_unitary(self, tol: float = NORM_TOL) -> bool:
        return self.unitarity_error() <= tol

    def dagger(self) -> "SingleParticleUnitary":
        return SingleParticleUnitary(self.entries.conj().T, self.out_basis, self.basis)

    def in_basis(self, basis: ModeBasisId) -> "SingleParticleUnitary":
        """Re-express an operator (basis == out_basis) in another basis."""
        if self.basis is not self.out_basis:
            raise ValueError("only operators with matching input/output basis can be re-expressed")
        if basis is self.basis:
            return self
        b = basis_change(self.basis, basis).entries
        return SingleParticleUnitary(b @ self.entries @ b.conj().T, basis)

    def __matmul__(self, other: "SingleParticleUnitary") -> "SingleParticleUnitary":
        if not isinstance(other, SingleParticleUnitary):
            return NotImplemented
        if other.out_basis is not self.basis:
            raise ValueError(
                f"cannot compose: {other.out_basis.value} output into {self.basis.value} input"
            )
        return SingleParticleUnitary(self.entries @ other.entries, other.basis, self.out_basis)


def basis_change(source: ModeBasisId, target: ModeBasisId) -> SingleParticleUnitary:
    """Coordinate map c' = B c taking ``source`` amplitudes to ``target`` amplitudes.

    Row k of B is the conjugate of the k-th target vector written in the
    source basis.
    """
    source, target = ModeBasisId.parse(source), ModeBasisId.parse(target)
    b = _BASIS_VECTORS[target].conj().T @ _BASIS_VECTORS[source]
    return SingleParticleUnitary(b, source, target)


@dataclass(frozen=True)
class VVState:
    """Pure single-photon state in the order-``order`` VV subspace."""

    order: int
    amplitudes: tuple[complex, complex]
    basis: ModeBasisId = ModeBasisId.CIRCULAR

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValueError(f"VV order must be a positive integer, got {self.order!r}")
        c1, c2 = (complex(c) for c in self.amplitudes)
        norm = abs(c1) ** 2 + abs(c2) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |c1|^2 + |c2|^2 = {norm!r}")
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "amplitudes", (c1, c2))
        object.__setattr__(self, "basis", ModeBasisId.parse(self.basis))

    @classmethod
    def from_vector(cls, vec, basis=ModeBasisId.CIRCULAR, order: int = 1, normalize: bool = False):
        v = np.asarray(vec, dtype=complex)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(order, (complex(v[0]), complex(v[1])), ModeBasisId.parse(basis))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def in_basis(self, basis: ModeBasisId) -> "VVState":
        basis = ModeBasisId.parse(basis)
        if basis is self.basis:
            return self
        v = basis_change(self.basis, basis).entries @ self.vector
        return VVState(self.order, (complex(v[0]), complex(v[1])), basis)

    def circular(self) -> np.ndarray:
        return self.in_basis(ModeBasisId.CIRCULAR).vector


_KETS = {
    "R": (ModeBasisId.CIRCULAR, 0),
    "L": (ModeBasisId.CIRCULAR, 1),
    "r": (ModeBasisId.RADIAL_AZIMUTHAL, 0),
    "theta": (ModeBasisId.RADIAL_AZIMUTHAL, 1),
    "a": (ModeBasisId.ANTI_DIAG, 0),
    "d": (ModeBasisId.ANTI_DIAG, 1),
}


def ket(name: str, order: int = 1) -> VVState:
    """Named basis ket: ``R``, ``L``, ``r``, ``theta``, ``a`` or ``d``."""
    try:
        basis, idx = _KETS[name]
    except KeyError:
        raise ValueError(f"unknown ket {name!r}; expected one of {sorted(_KETS)}") from None
    amps = [0j, 0j]
    amps[idx] = 1 + 0j
    return VVState(order, tuple(amps), basis)


@dataclass(frozen=True)
class StokesVector:
    s1: float
    s2: float
    s3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s1, self.s2, self.s3])


def hybrid_stokes(state: VVState) -> StokesVector:
    c1, c2 = state.circular()
    cross = np.conj(c1) * c2
    return StokesVector(
        s1=float(2.0 * cross.real),
        s2=float(2.0 * cross.imag),
        s3=float(abs(c1) ** 2 - abs(c2) ** 2),
    )


@dataclass(frozen=True)
class PolarizationSample:
    r: float
    phi: float
    jones: tuple[complex, complex]
    intensity: float

    @property
    def xy(self) -> tuple[float, float]:
        return self.r * math.cos(self.phi), self.r * math.sin(self.phi)

    def ellipse(self) -> tuple[float, float]:
        """(orientation angle in (-pi/2, pi/2], signed ellipticity b/a).

        Positive ellipticity is right-handed in the e_R convention. Both are 0
        where the field vanishes.
        """
        ex, ey = self.jones
        s0 = self.intensity
        if s0 <= 0.0:
            return 0.0, 0.0
        cross = np.conj(ex) * ey
        s1 = abs(ex) ** 2 - abs(ey) ** 2
        s2 = 2.0 * cross.real
        s3 = -2.0 * cross.imag
        angle = 0.5 * math.atan2(s2, s1)
        chi = 0.5 * math.asin(max(-1.0, min(1.0, s3 / s0)))
        return angle, math.tan(chi)


def radial_envelope(r, order: int, waist: float):
    """Unnormalized p=0 Laguerre-Gauss ring amplitude."""
    r = np.asarray(r, dtype=float)
    return (math.sqrt(2.0) * r / waist) ** order * np.exp(-(r**2) / waist**2)


def sample_transverse_field(state: VVState, r: float, phi: float, waist: float = 1.0) -> PolarizationSample:
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    if waist <= 0:
        raise ValueError(f"waist must be positive, got {waist}")
    c1, c2 = state.circular()
    m = state.order
    f = float(radial_envelope(r, m, waist))
    jones = f * (c1 * np.exp(1j * m * phi) * E_R + c2 * np.exp(-1j * m * phi) * E_L)
    ex, ey = complex(jones[0]), complex(jones[1])
    return PolarizationSample(float(r), float(phi), (ex, ey), abs(ex) ** 2 + abs(ey) ** 2)
