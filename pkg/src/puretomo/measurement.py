"""Born-rule probabilities and the pulsed photon-counting model with dark counts.

A weak coherent pulse projected onto a setting with probability p carries a
Poisson(mu * p) number of photons; the detector also fires on a
Poisson(lambda_dc) number of dark events.  A pulse registers a count when
either is non-zero, so the click probability is 1 - exp(-mu p - lambda_dc)
and N pulses give Binomial(N, click probability) counts.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.stats import binom

from .core import PureState, as_generator
from .errors import DimensionMismatchError, DomainError, InvalidModelError, InvalidStateError

__all__ = [
    "NoiseModel",
    "OutcomeRecord",
    "born_probability",
    "detection_probability",
    "expected_counts",
    "simulate_counts",
    "estimate_probability",
    "is_saturated",
    "PulseStatistics",
    "simulate_pulses",
]

PROB_TOL = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    """Source and detector parameters.

    Attributes:
        mu: mean photon number per pulse.
        lambda_dc: mean dark counts per pulse.
        pulses: number of pulses N spent on each setting.
    """

    mu: float = 0.18
    lambda_dc: float = 0.0
    pulses: int = 50_000

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu >= 0):
            raise InvalidModelError(f"mu must be >= 0, got {self.mu}")
        if not (np.isfinite(self.lambda_dc) and self.lambda_dc >= 0):
            raise InvalidModelError(f"lambda_dc must be >= 0, got {self.lambda_dc}")
        if int(self.pulses) != self.pulses or self.pulses < 1:
            raise InvalidModelError(f"pulses must be a positive integer, got {self.pulses}")


class OutcomeRecord(NamedTuple):
    """Result of one setting.  ``counts`` is None for exact probabilities."""

    setting: tuple
    estimated_prob: float
    counts: Optional[int] = None
    saturated: bool = False


def born_probability(state, projector):
    """|<phi|psi>|^2 for a pure state, <phi|rho|phi> for a density matrix."""
    if state.dim != projector.dim:
        raise DimensionMismatchError(f"dimension mismatch: {state.dim} vs {projector.dim}")
    phi = projector.amplitudes
    if isinstance(state, PureState):
        p = abs(np.vdot(phi, state.amplitudes)) ** 2
    else:
        p = np.vdot(phi, state.entries @ phi).real
    if p < -PROB_TOL or p > 1 + PROB_TOL:
        raise InvalidStateError(f"Born probability {p!r} outside [0, 1]")
    return float(min(max(p, 0.0), 1.0))


def _check_prob(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or np.any(p > 1) or not np.all(np.isfinite(p)):
        raise DomainError("projection probabilities must lie in [0, 1]")
    return p


def detection_probability(p, model):
    """Probability that a single pulse registers a count: 1 - exp(-mu p - lambda_dc)."""
    p = _check_prob(p)
    return -np.expm1(-model.mu * p - model.lambda_dc)


def expected_counts(p, model):
    """Mean counts over ``model.pulses`` pulses."""
    return model.pulses * detection_probability(p, model)


def simulate_counts(p, model, rng):
    """Binomial(N, detection_probability) counts by CDF inversion.

    One uniform is drawn per probability, so runs that differ only in the
    noise model see coupled (monotone) count realizations.
    """
    q = detection_probability(p, model)
    gen = as_generator(rng)
    u = 1.0 - gen.random(np.shape(q))  # in (0, 1], keeps the quantile >= 0
    counts = binom.ppf(u, model.pulses, q)
    if np.ndim(counts) == 0:
        return int(counts)
    return counts.astype(np.int64)


def is_saturated(counts, model):
    return np.asarray(counts) >= model.pulses


def estimate_probability(counts, model):
    """Invert the mean-count relation, clamped to [0, 1].

    ``p = (-log(1 - n/N) - lambda_dc) / mu``.  Negative raw values (dark
    counts exceeding signal) become 0; saturated settings (n = N) return 1,
    see :func:`is_saturated`.
    """
    if model.mu <= 0:
        raise InvalidModelError("mu must be positive to invert the count model")
    n = np.asarray(counts, dtype=float)
    if np.any(n < 0) or np.any(n > model.pulses):
        raise DomainError(f"counts must lie in [0, {model.pulses}]")
    saturated = n >= model.pulses
    frac = np.where(saturated, 0.0, n / model.pulses)
    raw = (-np.log1p(-frac) - model.lambda_dc) / model.mu
    est = np.where(saturated, 1.0, np.clip(raw, 0.0, 1.0))
    if est.ndim == 0:
        return float(est)
    return est


class PulseStatistics(NamedTuple):
    pulses: int
    empty_fraction: float
    multi_photon_fraction: float
    click_fraction: float


def simulate_pulses(model, n_pulses, rng, p=1.0):
    """Pulse-by-pulse simulation of photon numbers and dark events.

    Returns the fraction of pulses carrying no photon, more than one photon,
    and the fraction producing a click (photon or dark event).
    """
    gen = as_generator(rng)
    photons = gen.poisson(model.mu * p, size=n_pulses)
    dark = gen.poisson(model.lambda_dc, size=n_pulses)
    return PulseStatistics(
        pulses=n_pulses,
        empty_fraction=float(np.mean(photons == 0)),
        multi_photon_fraction=float(np.mean(photons > 1)),
        click_fraction=float(np.mean((photons + dark) > 0)),
    )
