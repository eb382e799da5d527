"""Poisson-weighted fringe and dip fits.

The objective is sum_i w_i (counts_i - N0 p(x_i; params))^2 with
w_i = 1 / max(counts_i, 1). A coarse grid supplies the start point
(N0 is solved in closed form at every grid node) and a damped Gauss-Newton
loop with box constraints refines it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from vvhom.interference import pattern_probabilities
from vvhom.lab.config import InputPair
from vvhom.lab.sweeps import SweepRecord, coincidence_curve, qplate_stack
from vvhom.mode_space import ModeBasisId, basis_change

MAX_ITER = 200
STEP_TOL = 1e-8
FLAT_TOL = 1e-6
OFFSET_BOUND = math.pi / 4


class FitError(RuntimeError):
    pass


@dataclass(frozen=True)
class DeltaFringe:
    """Counts vs retardation: params (N0, |gamma|^2, delta_offset)."""

    input_pair: InputPair
    alpha0: float
    basis: ModeBasisId | None = None

    names = ("amplitude", "indistinguishability", "delta_offset")

    def __post_init__(self):
        object.__setattr__(self, "input_pair", InputPair.parse(self.input_pair))
        if self.basis is None:
            object.__setattr__(self, "basis", self.input_pair.natural_basis)

    def probability(self, x, shape_params) -> np.ndarray:
        g, offset = shape_params
        return coincidence_curve(self.input_pair, self.alpha0, np.asarray(x) + offset, g, self.basis)

    def bounds(self):
        return np.array([0.0, 0.0, -OFFSET_BOUND]), np.array([np.inf, 1.0, OFFSET_BOUND])

    def shape_grid(self, x):
        gs = np.linspace(0.0, 1.0, 11)
        offs = np.linspace(-OFFSET_BOUND, OFFSET_BOUND, 31)
        return [(g, o) for g in gs for o in offs]

    def scales(self, theta):
        return np.array([max(abs(theta[0]), 1.0), 1.0, 1.0])


@dataclass(frozen=True)
class DelayDip:
    """Counts vs delay at fixed retardation: params (N0, tau_c)."""

    input_pair: InputPair
    alpha0: float
    fixed_delta: float
    basis: ModeBasisId | None = None

    names = ("amplitude", "tau_c")

    def __post_init__(self):
        object.__setattr__(self, "input_pair", InputPair.parse(self.input_pair))
        if self.basis is None:
            object.__setattr__(self, "basis", self.input_pair.natural_basis)

    def probability(self, x, shape_params) -> np.ndarray:
        (tau,) = shape_params
        x = np.asarray(x, dtype=float)
        g2 = np.exp(-(x**2) / (2.0 * tau**2))
        a, b = self.input_pair.states()
        transfer = basis_change(ModeBasisId.CIRCULAR, self.basis).entries @ qplate_stack(self.fixed_delta, self.alpha0)
        probs, _ = pattern_probabilities(transfer, a.circular(), b.circular(), g2)
        return probs[..., 1]

    def bounds(self):
        return np.array([0.0, 1e-12]), np.array([np.inf, np.inf])

    def shape_grid(self, x):
        span = float(np.max(np.abs(x)))
        if span <= 0:
            span = 1.0
        return [(t,) for t in np.geomspace(span / 500.0, span * 2.0, 80)]

    def scales(self, theta):
        return np.array([max(abs(theta[0]), 1.0), max(abs(theta[1]), 1e-12)])


@dataclass(frozen=True)
class FitResult:
    amplitude: float
    indistinguishability: float | None
    delta_offset: float
    residual: float
    iterations: int
    tau_c: float | None = None
    converged: bool = True
    flat_parameters: tuple[str, ...] = ()
    model: DeltaFringe | DelayDip | None = field(default=None, compare=False, repr=False)

    @property
    def flat(self) -> bool:
        """True when some parameter leaves the model unchanged at the optimum."""
        return bool(self.flat_parameters)

    @property
    def params(self) -> np.ndarray:
        if isinstance(self.model, DelayDip):
            return np.array([self.amplitude, self.tau_c])
        return np.array([self.amplitude, self.indistinguishability, self.delta_offset])

    def predict(self, x) -> np.ndarray:
        """Expected counts at ``x``."""
        if self.model is None:
            raise ValueError("fit carries no model")
        theta = self.params
        return theta[0] * self.model.probability(x, theta[1:])

    def as_rows(self) -> list[tuple[str, object]]:
        rows = [("model", type(self.model).__name__ if self.model is not None else "")]
        rows += [
            ("amplitude", self.amplitude),
            ("indistinguishability", self.indistinguishability),
            ("tau_c", self.tau_c),
            ("delta_offset", self.delta_offset),
            ("residual", self.residual),
            ("iterations", self.iterations),
            ("converged", self.converged),
            ("flat_parameters", ";".join(self.flat_parameters)),
        ]
        return rows


def _amplitude_ls(counts, w, p) -> float:
    den = float(np.sum(w * p * p))
    return float(np.sum(w * counts * p)) / den if den > 0 else 0.0


def fit_fringe(records: Sequence[SweepRecord], model: DeltaFringe | DelayDip) -> FitResult:
    if len(records) < 5:
        raise FitError(f"need at least 5 points to fit, got {len(records)}")
    x = np.array([r.x for r in records], dtype=float)
    counts = np.array([r.counts for r in records], dtype=float)
    if np.any(counts < 0) or not np.all(np.isfinite(counts)):
        raise FitError("counts must be finite and nonnegative")
    if not np.any(counts > 0):
        raise FitError("all counts are zero: amplitude is unidentifiable")
    w = 1.0 / np.maximum(counts, 1.0)
    sw = np.sqrt(w)
    lower, upper = model.bounds()

    def residuals(theta):
        return sw * (counts - theta[0] * model.probability(x, theta[1:]))

    def jacobian(theta):
        cols = [-sw * model.probability(x, theta[1:])]
        for j in range(1, len(theta)):
            h = 1e-6 * max(abs(theta[j]), 1e-3)
            tp, tm = theta.copy(), theta.copy()
            tp[j] += h
            tm[j] -= h
            cols.append((residuals(tp) - residuals(tm)) / (2.0 * h))
        return np.column_stack(cols)

    # coarse start
    best = None
    for shape in model.shape_grid(x):
        p = model.probability(x, shape)
        n0 = _amplitude_ls(counts, w, p)
        cost = float(np.sum(w * (counts - n0 * p) ** 2))
        if best is None or cost < best[0]:
            best = (cost, np.array([n0, *shape], dtype=float))
    theta = np.clip(best[1], lower, upper)

    r = residuals(theta)
    cost = float(r @ r)
    lam = 1e-3
    converged = False
    it = 0
    for it in range(1, MAX_ITER + 1):
        J = jacobian(theta)
        grad = J.T @ r
        # freeze parameters pinned at a bound with the descent pointing outward
        free = ~(((theta <= lower) & (grad > 0)) | ((theta >= upper) & (grad < 0)))
        Jf = J[:, free]
        A = Jf.T @ Jf
        diag = np.diag(A).copy()
        diag[diag <= 0] = 1.0
        accepted = False
        while lam < 1e16:
            try:
                step_f = np.linalg.solve(A + lam * np.diag(diag), -Jf.T @ r)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            step = np.zeros_like(theta)
            step[free] = step_f
            trial = np.clip(theta + step, lower, upper)
            r_trial = residuals(trial)
            c_trial = float(r_trial @ r_trial)
            if c_trial <= cost:
                accepted = True
                actual = trial - theta
                theta, r, cost = trial, r_trial, c_trial
                lam = max(lam / 10.0, 1e-12)
                break
            lam *= 10.0
        if not accepted:
            converged = True  # no descent direction left
            break
        if np.linalg.norm(actual / model.scales(theta)) < STEP_TOL:
            converged = True
            break

    J = jacobian(theta)
    col = np.linalg.norm(J, axis=0) * model.scales(theta)
    ref = max(float(np.max(col)), 1e-300)
    flat = tuple(name for name, c in zip(model.names, col) if c / ref < FLAT_TOL)

    if isinstance(model, DelayDip):
        return FitResult(
            amplitude=float(theta[0]),
            indistinguishability=None,
            delta_offset=0.0,
            residual=cost,
            iterations=it,
            tau_c=float(theta[1]),
            converged=converged,
            flat_parameters=flat,
            model=model,
        )
    return FitResult(
        amplitude=float(theta[0]),
        indistinguishability=float(np.clip(theta[1], 0.0, 1.0)),
        delta_offset=float(theta[2]),
        residual=cost,
        iterations=it,
        converged=converged,
        flat_parameters=flat,
        model=model,
    )
