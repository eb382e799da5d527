"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from tests.conftest import ACCEPTANCE_LINES
from vvhom.elements import qplate_unitary, qplate_unitary_in_basis
from vvhom.interference import (
    PhotonPair,
    brute_force_probabilities,
    coincidence_probability,
    evolve_pair,
    noon_decompose,
    overlap_from_delay,
)
from vvhom.lab.config import SweepConfig
from vvhom.lab.fitting import DeltaFringe, fit_fringe
from vvhom.lab.sweeps import run_delay_sweep, run_delta_sweep
from vvhom.mode_space import ModeBasisId, ket, sample_transverse_field

C = ModeBasisId.CIRCULAR
RA = ModeBasisId.RADIAL_AZIMUTHAL
AD = ModeBasisId.ANTI_DIAG
DELTAS_721 = np.linspace(0, 2 * math.pi, 721)


def report(n, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def circ_pair(g=1.0):
    return PhotonPair(ket("R"), ket("L"), g)


def radial_pair(g=1.0):
    return PhotonPair(ket("r"), ket("theta"), g)


def antidiag_pair(g=1.0):
    return PhotonPair(ket("a"), ket("d"), g)


def test_01_circular_curve():
    t0 = time.perf_counter()
    err = 0.0
    for a0 in (0.0, math.pi / 4):
        for d in DELTAS_721:
            err = max(err, abs(coincidence_probability(circ_pair(), qplate_unitary(d, a0), C) - math.cos(d) ** 2))
    dt = time.perf_counter() - t0
    report(1, "circular pair p11 = cos^2(delta)", err <= 1e-12 and dt < 1.0, f"max err {err:.2e}, {dt:.3f} s")


def test_02_total_bunching():
    alphas = np.linspace(0, math.pi, 64, endpoint=False)
    worst = max(coincidence_probability(circ_pair(), qplate_unitary(math.pi / 2, a), C) for a in alphas)
    report(2, "p11(pi/2) = 0 for any alpha0", worst <= 1e-14, f"max p11 {worst:.2e}")


def test_03_radial_family():
    err = 0.0
    flat = 0.0
    for a0 in (0.0, math.pi / 12, math.pi / 8, math.pi / 4):
        c2, s2 = math.cos(2 * a0) ** 2, math.sin(2 * a0) ** 2
        for d in DELTAS_721:
            p = coincidence_probability(radial_pair(), qplate_unitary(d, a0), RA)
            err = max(err, abs(p - (c2 + math.cos(d) * s2) ** 2))
            if a0 == 0.0:
                flat = max(flat, abs(p - 1.0))
    report(3, "r/theta pair curve family", err <= 1e-12 and flat <= 1e-12, f"max err {err:.2e}, alpha0=0 dev {flat:.2e}")


def test_04_mub_shift():
    err = 0.0
    for a0 in (0.0, math.pi / 12, math.pi / 8, math.pi / 4):
        for d in DELTAS_721:
            pad = coincidence_probability(antidiag_pair(), qplate_unitary(d, a0), AD)
            pra = coincidence_probability(radial_pair(), qplate_unitary(d, a0 - math.pi / 4), RA)
            err = max(err, abs(pad - pra))
    report(4, "a/d curve = r/theta curve at alpha0 - pi/4", err <= 1e-12, f"max err {err:.2e}")


def test_05_conjugation():
    err = 0.0
    for d in np.linspace(0, 2 * math.pi, 32):
        for a0 in np.linspace(0, math.pi, 32, endpoint=False):
            c, s = math.cos(d / 2), math.sin(d / 2)
            c2, s2 = math.cos(2 * a0), math.sin(2 * a0)
            ref = np.array([[c + 1j * c2 * s, s2 * s], [-s2 * s, c - 1j * c2 * s]])
            err = max(err, float(np.max(np.abs(qplate_unitary_in_basis(d, a0, RA).entries - ref))))
    report(5, "basis-conjugated q-plate matches r/theta entries", err <= 1e-12, f"max err {err:.2e}")


def test_06_oracle_equivalence():
    t0 = time.perf_counter()
    worst, n = 0.0, 0
    pairs = ((circ_pair, C), (radial_pair, RA), (antidiag_pair, AD))
    for make, basis in pairs:
        for d in np.linspace(0, 2 * math.pi, 20):
            for a0 in np.linspace(0, math.pi, 20, endpoint=False):
                U = qplate_unitary(d, a0)
                for g in np.linspace(0, 1, 5):
                    pr = make(g)
                    e = evolve_pair(pr, U, basis).probabilities
                    b = brute_force_probabilities(pr, U, basis).probabilities
                    worst = max(worst, max(abs(x - y) for x, y in zip(e, b)))
                    n += 1
    dt = time.perf_counter() - t0
    report(6, "evolve_pair == brute-force oracle", n == 6000 and worst <= 1e-10 and dt < 10.0,
           f"{n} cases, max diff {worst:.2e}, {dt:.2f} s")


def test_07_hom_dip():
    tau = 150.0
    U_full = qplate_unitary(math.pi / 2, 0.0)
    p0 = coincidence_probability(circ_pair(overlap_from_delay(0.0, tau)), U_full, C)
    pfar = coincidence_probability(circ_pair(overlap_from_delay(10 * tau, tau)), U_full, C)
    cfg = SweepConfig(sweep_kind="delay", grid=(-10 * tau, 10 * tau, 201), tau_c=tau, fixed_delta=0.0)
    flat = max(abs(r.p_model - 1.0) for r in run_delay_sweep(cfg))
    dip = run_delay_sweep(cfg.replace(fixed_delta=math.pi / 2, alpha0=math.pi / 4))
    sweep_ok = dip[100].p_model <= 1e-14 and abs(dip[0].p_model - 0.5) <= 1e-6
    ok = p0 <= 1e-14 and abs(pfar - 0.5) <= 1e-6 and flat <= 1e-12 and sweep_ok
    report(7, "HOM dip only with interference", ok, f"p11(0)={p0:.1e}, |p11(10tau)-1/2|={abs(pfar - 0.5):.1e}, flat dev {flat:.1e}")


def test_08_noon_phase():
    worst = 0.0
    for a0 in np.linspace(0.05, math.pi - 0.05, 16):
        rep = noon_decompose(evolve_pair(circ_pair(), qplate_unitary(math.pi / 2, a0), C))
        diff = (rep.relative_phase - 4 * a0 + math.pi) % (2 * math.pi) - math.pi
        worst = max(worst, abs(diff) if rep.is_noon else math.inf)
    report(8, "NOON relative phase = 4 alpha0", worst <= 1e-10, f"max phase err {worst:.2e}")


def test_09_fit_recovery():
    t0 = time.perf_counter()
    cfg = SweepConfig(grid=(0.0, math.pi, 30), pair_rate=5000)
    model = DeltaFringe("CircularPair", 0.0)
    g_err, n_err = [], []
    for seed in range(50):
        fit = fit_fringe(run_delta_sweep(cfg.replace(seed=seed)), model)
        g_err.append(abs(fit.indistinguishability - 1.0))
        n_err.append(abs(fit.amplitude / 5000 - 1))
    dt = time.perf_counter() - t0
    mae, nmax = float(np.mean(g_err)), float(np.max(n_err))
    report(9, "Poisson fit recovers |gamma|^2 and N0", mae <= 0.03 and nmax <= 0.02 and dt < 30.0,
           f"MAE |gamma|^2 {mae:.4f}, worst N0 dev {nmax:.4f}, {dt:.2f} s")


@pytest.mark.parametrize("cmd", ["sweep-delta", "sweep-delay"])
def test_10_determinism(tmp_path, cmd):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(
        "input_pair: RadialAzimuthalPair\nalpha0_rad: 0.6\nsweep: {min: -500, max: 500, steps: 41}\n"
        "fixed_delta_rad: 1.2\ntau_c_ps: 120\npair_rate: 3000\nseed: 18446744073709551615\n"
    )
    outs = []
    for i in range(2):
        out = tmp_path / f"{i}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "vvhom", cmd, "--config", str(cfg), "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    report(10, f"{cmd} CSV byte-identical across runs", outs[0] == outs[1], f"{len(outs[0])} bytes")


def test_11_field_rendering():
    worst = 0.0
    for phi in np.linspace(0, 2 * math.pi, 64, endpoint=False):
        angle, _ = sample_transverse_field(ket("r"), 1.0, phi, 1.0).ellipse()
        worst = max(worst, abs((angle - phi + math.pi / 2) % math.pi - math.pi / 2))
    core = sample_transverse_field(ket("r"), 0.0, 0.0, 1.0).intensity
    report(11, "radial field direction = azimuth, dark core", worst <= 1e-12 and core == 0.0,
           f"max angle err {worst:.2e}, I(0)={core}")
