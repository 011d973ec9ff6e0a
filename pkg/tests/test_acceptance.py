"""Exit criteria.  Each test prints one PASS/FAIL line with the measured values.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import math
import os

import numpy as np
import pytest

from puretomo import DensityMatrix, PureState, RandomStream, fidelity, haar_random_state, purity, white_noise_state
from puretomo.experiments import default_config, run_fidelity_vs_dimension, run_study, run_visibility_vs_purity
from puretomo.measurement import NoiseModel, born_probability, simulate_pulses
from puretomo.mub import build_mubs, mub_linear_inversion, mub_probabilities, simulate_mub_tomography
from puretomo.projectors import phase_projector_state
from puretomo.reconstruct import run_adaptive_tomography

from conftest import random_density_matrix

WORKERS = max(1, min(4, os.cpu_count() or 1))


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        assert ok, f"{criterion}: {detail}"

    return emit


def test_ac1_exact_round_trip(report):
    worst = 1.0
    zero_c0 = 0
    for d in range(2, 17):
        gen = RandomStream(1, d).generator()
        states = [haar_random_state(d, gen) for _ in range(1000)]
        for _ in range(50):
            amps = haar_random_state(d, gen).amplitudes.copy()
            amps[0] = 0.0
            states.append(PureState.from_amplitudes(amps))
            zero_c0 += 1
        for psi in states:
            worst = min(worst, fidelity(run_adaptive_tomography(psi).estimate, psi))
    report(
        "AC1 exact round trip d=2..16 (1000 Haar + 50 c0=0 each)",
        worst >= 1 - 1e-9,
        f"min fidelity {worst:.16f} (>= 1 - 1e-9), {zero_c0} crafted c0=0 states",
    )


def test_ac2_outcome_counts(report):
    counts = {}
    for d in range(2, 17):
        run = run_adaptive_tomography(haar_random_state(d, RandomStream(2, d)))
        counts[d] = len(run.records)
    ok = all(n == 4 * d - 3 for d, n in counts.items())
    mub_counts = {d: simulate_mub_tomography(haar_random_state(d, RandomStream(2, d)))[1].size for d in (2, 3, 5, 7, 11)}
    ok &= all(n == d * (d + 1) for d, n in mub_counts.items())
    ok &= counts[7] == 25 and mub_counts[7] == 56
    report("AC2 outcome counts", ok, f"adaptive d=7: {counts[7]}, MUB d=7: {mub_counts[7]}")


def test_ac3_noise_model_anchors(report):
    n = 1_000_000
    mu = 0.18
    stats = simulate_pulses(NoiseModel(mu=mu), n, RandomStream(3))
    empty = math.exp(-mu)
    multi = 1 - math.exp(-mu) * (1 + mu)
    se_empty = math.sqrt(empty * (1 - empty) / n)
    se_multi = math.sqrt(multi * (1 - multi) / n)
    z_empty = (stats.empty_fraction - empty) / se_empty
    z_multi = (stats.multi_photon_fraction - multi) / se_multi
    report(
        "AC3 noise-model anchors (mu=0.18, 1e6 pulses)",
        abs(z_empty) <= 3 and abs(z_multi) <= 3,
        f"empty {stats.empty_fraction:.5f} vs {empty:.5f} (z={z_empty:+.2f}); "
        f"multi-photon {stats.multi_photon_fraction:.5f} vs {multi:.5f} (z={z_multi:+.2f})",
    )


def test_ac4_fidelity_trend(report):
    dims = (4, 7, 8, 16)
    darks = (0.0, 2e-4, 5e-4)
    cfg = default_config("fidelity-vs-dim", dims=dims, dark_rates=darks, trials=2000, workers=WORKERS)
    res = run_fidelity_vs_dimension(cfg, write=False)
    means = {(d, dark): mean for d, dark, _, mean, _ in res.summary}
    monotone = all(
        means[(d, darks[i])] >= means[(d, darks[i + 1])] for d in (4, 8, 16) for i in range(len(darks) - 1)
    )
    f7 = means[(7, 0.0)]
    detail = "; ".join(f"d={d}: " + ", ".join(f"{means[(d, x)]:.6f}" for x in darks) for d in dims)
    report("AC4 fidelity non-increasing in dark rate, F(d=7, dark=0) >= 0.98", monotone and f7 >= 0.98, detail)


def test_ac5_visibility_anchors(report):
    d, trials = 8, 2000
    grid = tuple(round(0.1 * i, 10) for i in range(11))
    cfg = default_config("visibility-vs-purity", dims=(d,), lambda_grid=grid, trials=trials, exact_mode=True, workers=WORKERS)
    res = run_visibility_vs_purity(cfg, write=False)
    summary = {lam: mean for lam, _, _, mean, _ in res.summary}

    # analytic max_k residual, same Haar states as the harness (stream = trial)
    probs = np.array([haar_random_state(d, RandomStream(cfg.seed, t)).probabilities() for t in range(trials)])
    a_r = probs.max(axis=1, keepdims=True)
    worst_dev = 0.0
    positive = True
    for lam, _, t, _, value in res.rows:
        if lam in (0.0, 1.0):
            continue
        delta = (1 - lam) * lam * (a_r[t] + probs[t]) / d + lam**2 / d**2
        delta[np.argmax(probs[t])] = 0.0
        worst_dev = max(worst_dev, abs(value - delta.max()))
        positive &= value > 0

    lam1 = [row[4] for row in res.rows if row[0] == 1.0]
    ok = (
        summary[0.0] <= 1e-12
        and all(abs(v - 1 / 64) <= 1e-15 for v in lam1)
        and positive
        and worst_dev <= 1e-12
    )
    report(
        "AC5 purity-residual anchors (d=8, 2000 states)",
        ok,
        f"mean at lam=0: {summary[0.0]:.2e}; lam=1: {summary[1.0]!r} (1/64); "
        f"max deviation from analytic on 0.1..0.9: {worst_dev:.2e}",
    )


def test_ac6_purity_formula(report):
    worst = 0.0
    for d in range(2, 17):
        psi = haar_random_state(d, RandomStream(6, d))
        for lam in np.linspace(0, 1, 21):
            expected = (d - 1) / d * (lam - 1) ** 2 + 1 / d
            worst = max(worst, abs(purity(white_noise_state(psi, lam)) - expected))
    report("AC6 white-noise purity formula d=2..16", worst <= 1e-12, f"max deviation {worst:.2e}")


def test_ac7_phase_identity(report):
    worst = 0.0
    for d in range(2, 13):
        gen = RandomStream(7, d).generator()
        for _ in range(1000):
            psi = haar_random_state(d, gen)
            r = int(np.argmax(psi.probabilities()))
            c = psi.amplitudes * np.exp(-1j * np.angle(psi.amplitudes[r]))
            for k in range(d):
                if k == r:
                    continue
                p1, p2, p3 = (born_probability(psi, phase_projector_state(k, ell, r, d)) for ell in (1, 2, 3))
                lhs = (p1 - p2) + 1j * (p3 - p2)
                worst = max(worst, abs(lhs - math.sqrt(2) * c[r] * np.conj(c[k])))
    report("AC7 (p1-p2) + i(p3-p2) = sqrt2 c_r conj(c_k), d=2..12", worst <= 1e-12, f"max deviation {worst:.2e}")


def test_ac8_mub_soundness(report):
    worst_overlap = 0.0
    for d in (2, 3, 5, 7, 11, 13):
        family = build_mubs(d)
        for a, b in itertools.combinations(family.bases, 2):
            worst_overlap = max(worst_overlap, np.abs(np.abs(a.conj().T @ b) ** 2 - 1 / d).max())
    family = build_mubs(7)
    gen = RandomStream(8).generator()
    worst_entry = 0.0
    for _ in range(200):
        rho = DensityMatrix(random_density_matrix(7, gen))
        est = mub_linear_inversion(mub_probabilities(rho, family), family)
        worst_entry = max(worst_entry, np.abs(est - rho.entries).max())
    report(
        "AC8 MUB unbiasedness and exact inversion",
        worst_overlap <= 1e-10 and worst_entry <= 1e-9,
        f"max overlap deviation {worst_overlap:.2e}; max entry error at d=7 {worst_entry:.2e}",
    )


@pytest.mark.parametrize(
    "study, kwargs",
    [
        ("fidelity-vs-dim", dict(dims=(4, 7), trials=40)),
        ("visibility-vs-purity", dict(trials=40)),
        ("compare-d7", dict(trials=40)),
        ("single-shot", dict(state="random")),
    ],
)
def test_ac9_determinism(report, tmp_path, study, kwargs):
    blobs = []
    for i, workers in enumerate((1, 1, 2)):
        out = tmp_path / f"run{i}.csv"
        run_study(default_config(study, workers=workers, output_path=str(out), **kwargs))
        blobs.append(out.read_bytes())
    report(f"AC9 byte-identical CSV ({study}, workers 1/1/2)", blobs[0] == blobs[1] == blobs[2], f"{len(blobs[0])} bytes")
