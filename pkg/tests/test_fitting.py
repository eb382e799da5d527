import math

import numpy as np
import pytest

from vvhom.lab.config import SweepConfig
from vvhom.lab.fitting import DelayDip, DeltaFringe, FitError, fit_fringe
from vvhom.lab.sweeps import SweepRecord, coincidence_curve, run_delay_sweep, run_delta_sweep


def noiseless(xs, expected):
    return [SweepRecord(float(x), float(e) / 5000.0, float(e), math.sqrt(e)) for x, e in zip(xs, expected)]


class TestDeltaFringe:
    def test_exact_data(self):
        xs = np.linspace(0, math.pi, 30)
        fit = fit_fringe(noiseless(xs, 5000 * np.cos(xs) ** 2), DeltaFringe("CircularPair", 0.0))
        assert fit.indistinguishability == pytest.approx(1.0, rel=1e-6)
        assert fit.delta_offset == pytest.approx(0.0, abs=1e-6)
        assert fit.amplitude == pytest.approx(5000.0, rel=1e-6)
        assert fit.converged and not fit.flat

    def test_exact_partial_with_offset(self):
        xs = np.linspace(0, math.pi, 30)
        truth = 4000 * coincidence_curve("CircularPair", 0.0, xs + 0.1, 0.7)
        fit = fit_fringe(noiseless(xs, truth), DeltaFringe("CircularPair", 0.0))
        assert fit.indistinguishability == pytest.approx(0.7, rel=1e-6)
        assert fit.delta_offset == pytest.approx(0.1, abs=1e-6)
        assert fit.amplitude == pytest.approx(4000.0, rel=1e-6)

    def test_poisson_recovery(self):
        cfg = SweepConfig(grid=(0.0, math.pi, 30), pair_rate=5000)
        errs, amps = [], []
        for seed in range(50):
            fit = fit_fringe(run_delta_sweep(cfg.replace(seed=seed)), DeltaFringe("CircularPair", 0.0))
            errs.append(abs(fit.indistinguishability - 1.0))
            amps.append(fit.amplitude)
        assert np.mean(errs) <= 0.03
        assert np.max(np.abs(np.array(amps) / 5000 - 1)) <= 0.02

    def test_large_rate_converges(self):
        cfg = SweepConfig(
            input_pair="RadialAzimuthalPair", alpha0=math.pi / 4, grid=(0.0, 2 * math.pi, 41), pair_rate=1e6,
            gamma_abs2=0.8, seed=17,
        )
        fit = fit_fringe(run_delta_sweep(cfg), DeltaFringe("RadialAzimuthalPair", math.pi / 4))
        assert fit.indistinguishability == pytest.approx(0.8, rel=0.005)
        assert fit.amplitude == pytest.approx(1e6, rel=0.005)
        assert abs(fit.delta_offset) <= 0.005

    def test_flat_radial(self):
        cfg = SweepConfig(input_pair="RadialAzimuthalPair", alpha0=0.0, grid=(0.0, math.pi, 30))
        fit = fit_fringe(run_delta_sweep(cfg), DeltaFringe("RadialAzimuthalPair", 0.0))
        assert fit.flat
        assert set(fit.flat_parameters) == {"indistinguishability", "delta_offset"}
        assert fit.amplitude == pytest.approx(5000, rel=0.02)
        assert 0 <= fit.indistinguishability <= 1 and fit.residual >= 0

    def test_predict(self):
        xs = np.linspace(0, math.pi, 12)
        fit = fit_fringe(noiseless(xs, 5000 * np.cos(xs) ** 2), DeltaFringe("CircularPair", 0.0))
        np.testing.assert_allclose(fit.predict(xs), 5000 * np.cos(xs) ** 2, rtol=1e-6, atol=1e-3)

    def test_too_few(self):
        recs = noiseless([0, 1, 2, 3], [1, 2, 3, 4])
        with pytest.raises(FitError, match="at least 5"):
            fit_fringe(recs, DeltaFringe("CircularPair", 0.0))

    def test_all_zero(self):
        recs = [SweepRecord(float(x), 0.5, 0, 0.0) for x in range(8)]
        with pytest.raises(FitError, match="zero"):
            fit_fringe(recs, DeltaFringe("CircularPair", 0.0))

    def test_negative_counts(self):
        recs = [SweepRecord(float(x), 0.5, -1 if x == 3 else 10, 1.0) for x in range(8)]
        with pytest.raises(FitError):
            fit_fringe(recs, DeltaFringe("CircularPair", 0.0))


class TestDelayDip:
    def test_exact(self):
        xs = np.linspace(-600, 600, 41)
        truth = 3000 * 0.5 * (1 - np.exp(-(xs**2) / (2 * 120.0**2)))
        fit = fit_fringe(noiseless(xs, truth), DelayDip("CircularPair", 0.0, math.pi / 2))
        assert fit.tau_c == pytest.approx(120.0, rel=1e-6)
        assert fit.amplitude == pytest.approx(3000.0, rel=1e-6)
        assert fit.indistinguishability is None

    def test_large_rate(self):
        cfg = SweepConfig(sweep_kind="delay", grid=(-800.0, 800.0, 41), tau_c=150.0, pair_rate=1e6, seed=4)
        fit = fit_fringe(run_delay_sweep(cfg), DelayDip("CircularPair", 0.0, math.pi / 2))
        assert fit.tau_c == pytest.approx(150.0, rel=0.005)
        assert fit.amplitude == pytest.approx(1e6, rel=0.005)

    def test_no_interference_is_flat(self):
        cfg = SweepConfig(sweep_kind="delay", grid=(-800.0, 800.0, 41), fixed_delta=0.0, seed=4)
        fit = fit_fringe(run_delay_sweep(cfg), DelayDip("CircularPair", 0.0, 0.0))
        assert fit.flat_parameters == ("tau_c",)
