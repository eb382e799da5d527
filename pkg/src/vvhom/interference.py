"""Two-photon evolution through a single-particle mode unitary.

Partial distinguishability is carried by one complex overlap ``gamma``
between the photons' temporal wavepackets. Writing photon b's wavepacket as
gamma|t1> + sqrt(1 - |gamma|^2)|t_perp>, the output splits into a bosonic
sector (both photons in t1) and a distinguishable sector (different
temporal modes). For inputs in orthogonal VV modes this reduces to

    p_x = |gamma|^2 p_x(indistinguishable) + (1 - |gamma|^2) p_x(distinguishable).

Occupation patterns are ordered (2,0), (1,1), (0,2) in the measurement basis.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from vvhom.mode_space import ModeBasisId, SingleParticleUnitary, VVState, basis_change

UNITARY_TOL = 1e-10
NOON_TOL = 1e-9
_SQRT2 = math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhotonPair:
    a: VVState
    b: VVState
    gamma: complex = 1.0

    def __post_init__(self):
        g = complex(self.gamma)
        if abs(g) > 1.0 + 1e-12:
            raise ValueError(f"|gamma| must not exceed 1, got {abs(g)}")
        if abs(g) > 1.0:
            g = g / abs(g)
        object.__setattr__(self, "gamma", g)
        if self.a.order != self.b.order:
            raise ValueError(f"photons live in different VV orders ({self.a.order}, {self.b.order})")

    @property
    def gamma_abs2(self) -> float:
        return abs(self.gamma) ** 2

    def with_gamma(self, gamma: complex) -> "PhotonPair":
        return PhotonPair(self.a, self.b, gamma)


@dataclass(frozen=True)
class TwoPhotonOutput:
    p20: float
    p11: float
    p02: float
    amp20: complex
    amp11: complex
    amp02: complex
    basis: ModeBasisId

    @property
    def probabilities(self) -> tuple[float, float, float]:
        return self.p20, self.p11, self.p02


@dataclass(frozen=True)
class NoonReport:
    is_noon: bool
    relative_phase: float
    weight20: float
    weight02: float


def overlap_from_delay(delta_t, tau_c: float):
    """Gaussian wavepacket overlap exp(-dt^2 / (4 tau_c^2)); |gamma|^2 has width tau_c."""
    if tau_c <= 0:
        raise ValueError(f"coherence time must be positive, got {tau_c}")
    dt = np.asarray(delta_t, dtype=float)
    g = np.exp(-(dt**2) / (4.0 * tau_c**2))
    if g.ndim == 0:
        return complex(g)
    return g.astype(complex)


def _transfer(U: SingleParticleUnitary, measure_in: ModeBasisId) -> np.ndarray:
    if U.basis is not U.out_basis:
        raise ValueError("expected a mode operator, got a basis change")
    err = U.unitarity_error()
    if err > UNITARY_TOL:
        raise ValueError(f"operator is not unitary (max |UU^dag - I| = {err:.3e})")
    u = U.in_basis(ModeBasisId.CIRCULAR).entries
    return basis_change(ModeBasisId.CIRCULAR, ModeBasisId.parse(measure_in)).entries @ u


def _check_degenerate(va: np.ndarray, vb: np.ndarray, gamma_abs2) -> None:
    if abs(abs(np.vdot(va, vb)) - 1.0) < 1e-12 and np.any(np.abs(np.asarray(gamma_abs2) - 1.0) > 1e-12):
        raise ValueError("photons share one VV mode: only |gamma| = 1 is supported")


def pattern_probabilities(transfer, va, vb, gamma_abs2):
    """Vectorized core over a stack of transfer matrices.

    ``transfer`` has shape (..., 2, 2) and maps circular input amplitudes to
    measurement-basis amplitudes. Returns ``(probs, amps)`` with trailing axis
    ordered (2,0), (1,1), (0,2); ``amps`` are the normalized bosonic-sector
    amplitudes.
    """
    m = np.asarray(transfer, dtype=complex)
    g = np.asarray(gamma_abs2, dtype=float)
    wa = m @ np.asarray(va, dtype=complex)
    wb = m @ np.asarray(vb, dtype=complex)
    a0, a1 = wa[..., 0], wa[..., 1]
    b0, b1 = wb[..., 0], wb[..., 1]

    # a^dag_k a^dag_l |0> expanded; (a^dag)^2|0> = sqrt(2)|2>.
    raw = np.stack([_SQRT2 * a0 * b0, a0 * b1 + a1 * b0, _SQRT2 * a1 * b1], axis=-1)
    pa0, pa1 = np.abs(a0) ** 2, np.abs(a1) ** 2
    pb0, pb1 = np.abs(b0) ** 2, np.abs(b1) ** 2
    dist = np.stack([pa0 * pb0, pa0 * pb1 + pa1 * pb0, pa1 * pb1], axis=-1)

    ov2 = abs(np.vdot(va, vb)) ** 2
    g = g[..., None]
    probs = (g * np.abs(raw) ** 2 + (1.0 - g) * dist) / (1.0 + g * ov2)
    amps = raw / math.sqrt(1.0 + ov2)
    return probs, amps


def evolve_pair(pair: PhotonPair, U: SingleParticleUnitary, measure_in: ModeBasisId) -> TwoPhotonOutput:
    measure_in = ModeBasisId.parse(measure_in)
    m = _transfer(U, measure_in)
    va, vb = pair.a.circular(), pair.b.circular()
    _check_degenerate(va, vb, pair.gamma_abs2)
    probs, amps = pattern_probabilities(m, va, vb, pair.gamma_abs2)
    return TwoPhotonOutput(
        p20=float(probs[0]),
        p11=float(probs[1]),
        p02=float(probs[2]),
        amp20=complex(amps[0]),
        amp11=complex(amps[1]),
        amp02=complex(amps[2]),
        basis=measure_in,
    )


def coincidence_probability(pair: PhotonPair, U: SingleParticleUnitary, measure_in: ModeBasisId) -> float:
    return evolve_pair(pair, U, measure_in).p11


def noon_decompose(out: TwoPhotonOutput, tol: float = NOON_TOL) -> NoonReport:
    w20 = abs(out.amp20) ** 2
    w02 = abs(out.amp02) ** 2
    if w20 > 0 and w02 > 0:
        phase = (np.angle(out.amp20) - np.angle(out.amp02)) % _TWO_PI
    else:
        phase = 0.0
    return NoonReport(out.p11 <= tol, float(phase), float(w20), float(w02))


# Brute-force oracle -------------------------------------------------------
#
# Modes: 0 = (VV1, t1), 1 = (VV2, t1), 2 = (VV1, t_perp), 3 = (VV2, t_perp).


def _expand(poly: dict, substitution: dict) -> dict:
    """Substitute every creation operator in a monomial polynomial."""
    out: dict = defaultdict(complex)
    for monomial, coeff in poly.items():
        factors = [substitution[mode] for mode in monomial]
        for choice in itertools.product(*(f.items() for f in factors)):
            term = coeff
            modes = []
            for mode, c in choice:
                term *= c
                modes.append(mode)
            out[tuple(sorted(modes))] += term
    return dict(out)


def brute_force_probabilities(pair: PhotonPair, U: SingleParticleUnitary, measure_in: ModeBasisId) -> TwoPhotonOutput:
    measure_in = ModeBasisId.parse(measure_in)
    m = _transfer(U, measure_in)
    va, vb = pair.a.circular(), pair.b.circular()
    _check_degenerate(va, vb, pair.gamma_abs2)
    gamma = pair.gamma
    perp = math.sqrt(max(0.0, 1.0 - abs(gamma) ** 2))

    photon_a = {0: va[0], 1: va[1]}
    photon_b = {0: gamma * vb[0], 1: gamma * vb[1], 2: perp * vb[0], 3: perp * vb[1]}
    poly: dict = defaultdict(complex)
    for (i, ci), (j, cj) in itertools.product(photon_a.items(), photon_b.items()):
        poly[tuple(sorted((i, j)))] += ci * cj

    substitution = {}
    for t in (0, 2):
        for j in (0, 1):
            substitution[t + j] = {t + k: m[k, j] for k in (0, 1)}
    out = _expand(dict(poly), substitution)

    fock: dict = defaultdict(complex)
    for monomial, coeff in out.items():
        counts = [monomial.count(mode) for mode in range(4)]
        fock[tuple(counts)] += coeff * math.sqrt(math.prod(math.factorial(n) for n in counts))
    norm = sum(abs(c) ** 2 for c in fock.values())

    patterns = {(2, 0): 0.0, (1, 1): 0.0, (0, 2): 0.0}
    for occ, amp in fock.items():
        spatial = (occ[0] + occ[2], occ[1] + occ[3])
        patterns[spatial] += float(abs(amp) ** 2 / norm)

    # Bosonic-sector amplitudes: only t1 photons, renormalized within that sector.
    sector = {k: v for k, v in fock.items() if k[2] == 0 and k[3] == 0}
    snorm = math.sqrt(sum(abs(v) ** 2 for v in sector.values()))
    amp = {key: (sector.get(key + (0, 0), 0j) / snorm if snorm > 0 else 0j) for key in patterns}
    return TwoPhotonOutput(
        p20=patterns[(2, 0)],
        p11=patterns[(1, 1)],
        p02=patterns[(0, 2)],
        amp20=amp[(2, 0)],
        amp11=amp[(1, 1)],
        amp02=amp[(0, 2)],
        basis=measure_in,
    )
