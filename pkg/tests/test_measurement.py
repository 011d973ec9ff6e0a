import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from puretomo import DensityMatrix, PureState, RandomStream, haar_random_state
from puretomo.errors import DimensionMismatchError, DomainError, InvalidModelError
from puretomo.measurement import (
    NoiseModel,
    born_probability,
    detection_probability,
    estimate_probability,
    expected_counts,
    is_saturated,
    simulate_counts,
    simulate_pulses,
)
from puretomo.projectors import phase_projector_state

MODEL = NoiseModel(mu=0.18, lambda_dc=0.0, pulses=50_000)


class TestBorn:
    def test_plus_state_first_phase_projector(self):
        psi = PureState.from_amplitudes([1, 1])
        proj = phase_projector_state(1, 1, 0, 2)
        # direct inner-product oracle
        overlap = np.conj(proj.amplitudes) @ psi.amplitudes
        assert born_probability(psi, proj) == pytest.approx(abs(overlap) ** 2, abs=1e-15)
        assert born_probability(psi, proj) == pytest.approx(math.cos(math.pi / 8) ** 2, abs=1e-12)

    @pytest.mark.parametrize("ell", [1, 2, 3])
    def test_basis_state_half_overlap(self, ell):
        assert born_probability(PureState.basis(0, 5), phase_projector_state(3, ell, 0, 5)) == pytest.approx(0.5, abs=1e-15)

    def test_maximally_mixed(self):
        rho = DensityMatrix.maximally_mixed(6)
        proj = PureState.from_amplitudes(np.arange(1, 7) * np.exp(1j * np.arange(6)))
        assert born_probability(rho, proj) == pytest.approx(1 / 6, abs=1e-15)

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            born_probability(PureState.uniform(3), PureState.uniform(2))


class TestCountModel:
    def test_detection_values(self):
        assert detection_probability(0.0, NoiseModel(0.18, 0.0)) == 0.0
        assert detection_probability(1.0, MODEL) == pytest.approx(1 - math.exp(-0.18), rel=1e-14)
        assert detection_probability(1.0, MODEL) == pytest.approx(0.164729789, abs=1e-9)
        assert detection_probability(0.0, NoiseModel(0.18, 5e-4)) == pytest.approx(4.99875e-4, rel=1e-5)

    def test_expected_counts_values(self):
        assert expected_counts(1.0, MODEL) == pytest.approx(8236.489, abs=1e-3)
        assert expected_counts(0.0, NoiseModel(0.18, 0.0, 123)) == 0.0
        assert expected_counts(0.0, NoiseModel(0.18, 5e-4, 50_000)) == pytest.approx(24.994, abs=1e-3)

    @settings(max_examples=100, deadline=None)
    @given(
        p=st.floats(0, 1),
        dp=st.floats(0, 1),
        mu=st.floats(0, 2),
        dark=st.floats(0, 0.01),
    )
    def test_monotone(self, p, dp, mu, dark):
        base = detection_probability(p, NoiseModel(mu, dark))
        assert detection_probability(min(p + dp, 1.0), NoiseModel(mu, dark)) >= base
        assert detection_probability(p, NoiseModel(mu + dp, dark)) >= base
        assert detection_probability(p, NoiseModel(mu, dark + dp)) >= base

    def test_small_mu_linearization(self):
        model = NoiseModel(mu=5e-4, lambda_dc=2e-4, pulses=50_000)
        for p in np.linspace(0, 1, 11):
            if model.mu * p + model.lambda_dc > 1e-3:
                continue
            linear = model.pulses * (model.mu * p + model.lambda_dc)
            assert expected_counts(p, model) == pytest.approx(linear, rel=1e-3)

    def test_invalid_models(self):
        for kwargs in (dict(mu=-1), dict(lambda_dc=-1e-3), dict(pulses=0), dict(pulses=2.5)):
            with pytest.raises(InvalidModelError):
                NoiseModel(**kwargs)

    def test_probability_domain(self):
        with pytest.raises(DomainError):
            detection_probability(1.5, MODEL)


class TestSimulation:
    def test_zero_probability_never_clicks(self):
        model = NoiseModel(0.18, 0.0, 50_000)
        counts = simulate_counts(np.zeros(1000), model, RandomStream(3))
        assert np.all(counts == 0)

    def test_deterministic(self):
        a = simulate_counts(np.full(20, 0.3), MODEL, RandomStream(42, 7))
        b = simulate_counts(np.full(20, 0.3), MODEL, RandomStream(42, 7))
        assert np.array_equal(a, b)

    def test_scalar_returns_int(self):
        n = simulate_counts(0.3, MODEL, RandomStream(1))
        assert isinstance(n, int) and 0 <= n <= MODEL.pulses

    def test_binomial_moments(self):
        reps = 100_000
        counts = simulate_counts(np.full(reps, 0.3), MODEL, RandomStream(11))
        q = detection_probability(0.3, MODEL)
        mean, var = MODEL.pulses * q, MODEL.pulses * q * (1 - q)
        assert abs(counts.mean() - mean) < 3 * math.sqrt(var / reps)
        # variance of the sample variance for a near-normal variable: 2 var^2 / reps
        assert abs(counts.var(ddof=1) - var) < 3 * var * math.sqrt(2 / reps)

    def test_coupling_is_monotone_in_dark_rate(self):
        p = np.random.default_rng(0).random(500)
        lo = simulate_counts(p, NoiseModel(0.18, 0.0), RandomStream(5))
        hi = simulate_counts(p, NoiseModel(0.18, 5e-4), RandomStream(5))
        assert np.all(hi >= lo)


class TestEstimate:
    @settings(max_examples=200, deadline=None)
    @given(p=st.floats(0, 1), dark=st.sampled_from([0.0, 2e-4, 5e-4]))
    def test_round_trip(self, p, dark):
        model = NoiseModel(0.18, dark, 50_000)
        assert estimate_probability(expected_counts(p, model), model) == pytest.approx(p, abs=1e-12)

    def test_round_trip_point(self):
        assert estimate_probability(expected_counts(0.3, MODEL), MODEL) == pytest.approx(0.3, abs=1e-12)

    def test_clamps_negative(self):
        model = NoiseModel(0.18, 5e-4, 50_000)
        raw = (-math.log1p(0) - 5e-4) / 0.18
        assert raw < 0
        assert estimate_probability(0, model) == 0.0

    def test_saturation(self):
        assert estimate_probability(MODEL.pulses, MODEL) == 1.0
        assert is_saturated(MODEL.pulses, MODEL)
        assert not is_saturated(MODEL.pulses - 1, MODEL)

    def test_zero_mu(self):
        with pytest.raises(InvalidModelError):
            estimate_probability(10, NoiseModel(0.0, 0.0, 100))

    def test_counts_range(self):
        with pytest.raises(DomainError):
            estimate_probability(MODEL.pulses + 1, MODEL)


class TestPulses:
    def test_empty_and_multi_photon_fractions(self):
        n = 1_000_000
        stats = simulate_pulses(MODEL, n, RandomStream(2019))
        empty = math.exp(-0.18)
        multi = 1 - math.exp(-0.18) * 1.18
        assert abs(stats.empty_fraction - empty) < 3 * math.sqrt(empty * (1 - empty) / n)
        assert abs(stats.multi_photon_fraction - multi) < 3 * math.sqrt(multi * (1 - multi) / n)

    def test_click_fraction_matches_detection_probability(self):
        n = 1_000_000
        model = NoiseModel(0.18, 5e-3, n)
        stats = simulate_pulses(model, n, RandomStream(4), p=0.4)
        q = detection_probability(0.4, model)
        assert abs(stats.click_fraction - q) < 3 * math.sqrt(q * (1 - q) / n)
