"""
Photon counting with a weak coherent source
===========================================

Each setting is measured with N pulses of mean photon number mu.  A pulse
clicks with probability 1 - exp(-mu p - lambda_dc); counts are binomial and
the probability is recovered by inverting the mean-count relation.
"""

import math

import numpy as np

from puretomo import NoiseModel, RandomStream, estimate_probability, expected_counts, simulate_counts
from puretomo.measurement import simulate_pulses

model = NoiseModel(mu=0.18, lambda_dc=2e-4, pulses=50_000)

stats = simulate_pulses(model, 1_000_000, RandomStream(1))
print(f"empty pulses:        {stats.empty_fraction:.4f} (exp(-mu) = {math.exp(-model.mu):.4f})")
print(f"multi-photon pulses: {stats.multi_photon_fraction:.4f} (1 - exp(-mu)(1 + mu) = {1 - math.exp(-model.mu) * (1 + model.mu):.4f})")

# %%
# Mean counts and the inverse map
for p in (0.0, 0.01, 0.1, 0.5, 1.0):
    n = expected_counts(p, model)
    print(f"p = {p:<5} mean counts = {n:9.2f}  inverted = {estimate_probability(n, model):.12f}")

# %%
# Sampling error of the estimate for one setting
p = 0.3
counts = simulate_counts(np.full(10_000, p), model, RandomStream(2))
est = estimate_probability(counts, model)
print(f"\np = {p}: estimate mean {est.mean():.5f}, std {est.std():.5f}")

# With small mu the count model is nearly linear: n ~ N (mu p + lambda_dc)
small = NoiseModel(mu=5e-4, lambda_dc=2e-4, pulses=50_000)
print("small-mu linearity:", expected_counts(0.9, small), "vs", small.pulses * (small.mu * 0.9 + small.lambda_dc))
