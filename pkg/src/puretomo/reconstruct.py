"""Closed-form pure-state reconstruction and purity certification.

For each k != r the three phase projectors give

    (p1 - p2) + i (p3 - p2) = sqrt(2) c_r conj(c_k)

with c_r chosen real and positive.  Moduli come from the canonical
measurement, phases from the relation above, so the returned amplitude is
c_k = |c_k| exp(i atan2(-(p3 - p2), p1 - p2)).

The same outcomes test purity: |rho_rk|^2 = rho_rr rho_kk holds for every k
only when the state is pure, and |rho_rk| is the fringe visibility
sqrt(((p1 - p2)^2 + (p2 - p3)^2) / 2).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import PureState, as_generator
from .errors import DegenerateInputError, DomainError, IncompleteDataError, InvalidDimensionError
from .measurement import (
    NoiseModel,
    OutcomeRecord,
    born_probability,
    detection_probability,
    estimate_probability,
    is_saturated,
    simulate_counts,
)
from .projectors import PHASE_STEPS, build_frame, phase_projector_state

__all__ = [
    "LOW_VISIBILITY_TOL",
    "EXACT_THRESHOLD_FLOOR",
    "ReconstructionResult",
    "PurityCertificate",
    "TomographyRun",
    "phase_from_probs",
    "is_low_visibility",
    "visibility",
    "reconstruct_pure",
    "purity_residuals",
    "default_threshold",
    "certify_purity",
    "run_adaptive_tomography",
    "phase_probs_from_state",
]

LOW_VISIBILITY_TOL = 1e-12
EXACT_THRESHOLD_FLOOR = 1e-6


def is_low_visibility(p1, p2, p3):
    return abs(p1 - p2) < LOW_VISIBILITY_TOL and abs(p3 - p2) < LOW_VISIBILITY_TOL


def phase_from_probs(p1, p2, p3):
    """Phase of c_k relative to the reference, in (-pi, pi].

    Returns 0 when both differences vanish (see :func:`is_low_visibility`);
    any phase then describes the same state.
    """
    if is_low_visibility(p1, p2, p3):
        return 0.0
    phi = float(np.arctan2(-(p3 - p2), p1 - p2))
    return np.pi if phi == -np.pi else phi


def visibility(p1, p2, p3):
    return float(np.sqrt(((p1 - p2) ** 2 + (p2 - p3) ** 2) / 2.0))


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Outcome of the closed-form inversion.

    Per-index arrays have length d.  At the reference index the natural
    values are stored: phase term sqrt(2) p_r, visibility p_r, residual 0.
    """

    estimate: PureState
    reference: int
    phase_terms: np.ndarray
    visibilities: np.ndarray
    purity_residuals: np.ndarray
    max_residual: float
    low_visibility: tuple = ()


@dataclass(frozen=True, eq=False)
class PurityCertificate:
    residuals: np.ndarray
    max_residual: float
    threshold: float
    passed: bool


@dataclass(frozen=True, eq=False)
class TomographyRun:
    result: ReconstructionResult
    records: tuple
    certificate: PurityCertificate
    frame: object

    @property
    def estimate(self):
        return self.result.estimate


def _phase_table(phase_probs, reference, d):
    """(d, 3) array of p_ell^(k); the reference row is left at zero."""
    table = np.zeros((d, 3))
    missing = []
    for k in range(d):
        if k == reference:
            continue
        for j, ell in enumerate(PHASE_STEPS):
            try:
                table[k, j] = phase_probs[(k, ell)]
            except KeyError:
                missing.append((k, ell))
    if missing:
        raise IncompleteDataError(f"missing phase-projector outcomes for {missing}")
    return table


def _validate_inputs(canonical_probs, reference):
    probs = np.asarray(canonical_probs, dtype=float).reshape(-1)
    d = probs.size
    if d < 1:
        raise InvalidDimensionError("empty canonical probability vector")
    if np.any(probs < 0) or not np.all(np.isfinite(probs)):
        raise DomainError("canonical probabilities must be finite and non-negative")
    if not 0 <= reference < d:
        raise DomainError(f"reference {reference} outside [0, {d})")
    return probs, d


def purity_residuals(canonical_probs, phase_probs, reference):
    """Per-index |visibility^2 - p_r p_k| and the visibilities themselves."""
    probs, d = _validate_inputs(canonical_probs, reference)
    table = _phase_table(phase_probs, reference, d)
    vis = np.array([visibility(*table[k]) for k in range(d)])
    vis[reference] = probs[reference]
    residuals = np.abs(vis**2 - probs[reference] * probs)
    residuals[reference] = 0.0
    return residuals, vis


def reconstruct_pure(canonical_probs, phase_probs, reference):
    """Recover the pure state from the canonical and phase-projector probabilities.

    Args:
        canonical_probs: length-d probabilities of |k><k|.
        phase_probs: mapping ``(k, ell) -> p`` for every k != reference and
            ell in 1..3.
        reference: index r of the reference amplitude.

    Raises:
        DegenerateInputError: canonical_probs[reference] is zero.
        IncompleteDataError: a phase outcome is missing.
    """
    probs, d = _validate_inputs(canonical_probs, reference)
    if probs[reference] <= 0:
        raise DegenerateInputError(
            f"reference amplitude {reference} has zero probability; reselect the reference"
        )
    table = _phase_table(phase_probs, reference, d)

    terms = (table[:, 0] - table[:, 1]) + 1j * (table[:, 2] - table[:, 1])
    terms[reference] = np.sqrt(2.0) * probs[reference]

    amps = np.sqrt(probs).astype(complex)
    low = []
    for k in range(d):
        if k == reference:
            continue
        if is_low_visibility(*table[k]):
            low.append(k)
        amps[k] *= np.exp(1j * phase_from_probs(*table[k]))
    estimate = PureState.from_amplitudes(amps)

    residuals, vis = purity_residuals(probs, phase_probs, reference)
    return ReconstructionResult(
        estimate=estimate,
        reference=reference,
        phase_terms=terms,
        visibilities=vis,
        purity_residuals=residuals,
        max_residual=float(residuals.max()),
        low_visibility=tuple(low),
    )


def _estimate_variance(p, model):
    # delta method on p = (-log(1 - q) - lambda_dc) / mu with Var(n/N) = q(1 - q)/N
    q = detection_probability(np.clip(p, 0.0, 1.0), model)
    return q / (model.pulses * model.mu**2 * np.maximum(1.0 - q, 1e-300))


def default_threshold(canonical_probs, phase_probs, reference, model=None):
    """Three propagated standard errors of the largest-error residual.

    In exact mode (``model`` is None) the floor 1e-6 is returned.
    """
    if model is None:
        return EXACT_THRESHOLD_FLOOR
    probs, d = _validate_inputs(canonical_probs, reference)
    table = _phase_table(phase_probs, reference, d)
    var_canon = _estimate_variance(probs, model)
    var_phase = _estimate_variance(table, model)
    worst = 0.0
    for k in range(d):
        if k == reference:
            continue
        p1, p2, p3 = table[k]
        grad_phase = np.array([p1 - p2, -(p1 - p2) + (p2 - p3), -(p2 - p3)])
        var = (
            np.sum(grad_phase**2 * var_phase[k])
            + probs[k] ** 2 * var_canon[reference]
            + probs[reference] ** 2 * var_canon[k]
        )
        worst = max(worst, float(np.sqrt(var)))
    return max(3.0 * worst, EXACT_THRESHOLD_FLOOR)


def certify_purity(canonical_probs, phase_probs, reference, threshold=None, model=None):
    """Pass iff every residual |visibility_k^2 - p_r p_k| is at most ``threshold``."""
    residuals, _ = purity_residuals(canonical_probs, phase_probs, reference)
    if threshold is None:
        threshold = default_threshold(canonical_probs, phase_probs, reference, model)
    max_residual = float(residuals.max())
    return PurityCertificate(
        residuals=residuals,
        max_residual=max_residual,
        threshold=float(threshold),
        passed=bool(max_residual <= threshold),
    )


def _measure(state, projectors, model, gen):
    exact = np.array([born_probability(state, phi) for phi in projectors])
    if model is None:
        return exact, exact, None
    counts = simulate_counts(exact, model, gen)
    return exact, estimate_probability(counts, model), counts


def run_adaptive_tomography(
    true_state, model: Optional[NoiseModel] = None, rng=None, threshold=None
) -> TomographyRun:
    """Full 4d - 3 outcome protocol on a simulated source.

    Measures the canonical basis, picks the reference from those outcomes,
    measures the 3(d - 1) phase projectors, then reconstructs and certifies.
    With ``model=None`` exact Born probabilities are used and no randomness
    is consumed.
    """
    d = true_state.dim
    if d < 2:
        raise InvalidDimensionError(f"tomography needs dim >= 2, got {d}")
    gen = None
    if model is not None:
        if rng is None:
            raise ValueError("a random stream is required in noisy mode")
        gen = as_generator(rng)

    canon_states = [PureState.basis(k, d) for k in range(d)]
    _, canon_est, canon_counts = _measure(true_state, canon_states, model, gen)
    total = canon_est.sum()
    if total <= 0:
        raise DegenerateInputError("no counts registered in the canonical basis")
    canonical_probs = canon_est / total

    frame = build_frame(canonical_probs)
    phase_settings = frame.phase_settings
    _, phase_est, phase_counts = _measure(
        true_state, [frame.projector_state(s) for s in phase_settings], model, gen
    )
    phase_probs = {(s.k, s.ell): float(p) for s, p in zip(phase_settings, phase_est)}

    records = []
    for settings, est, counts in (
        (frame.canonical_settings, canon_est, canon_counts),
        (phase_settings, phase_est, phase_counts),
    ):
        for i, s in enumerate(settings):
            if counts is None:
                records.append(OutcomeRecord(s, float(est[i])))
            else:
                n = int(counts[i])
                records.append(OutcomeRecord(s, float(est[i]), n, bool(is_saturated(n, model))))

    result = reconstruct_pure(canonical_probs, phase_probs, frame.reference)
    certificate = certify_purity(canonical_probs, phase_probs, frame.reference, threshold, model)
    return TomographyRun(result=result, records=tuple(records), certificate=certificate, frame=frame)


def phase_probs_from_state(state, reference):
    """Exact phase-projector probabilities for every k != reference."""
    d = state.dim
    return {
        (k, ell): born_probability(state, phase_projector_state(k, ell, reference, d))
        for k in range(d)
        if k != reference
        for ell in PHASE_STEPS
    }

