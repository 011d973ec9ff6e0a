"""The adaptive measurement frame: canonical basis plus three-phase projectors."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import PureState
from .errors import DegenerateInputError, DomainError, InvalidDimensionError, InvalidProjectorError

__all__ = [
    "PHASE_STEPS",
    "Setting",
    "ProjectorFrame",
    "phase_offset",
    "phase_projector_state",
    "select_reference",
    "build_frame",
]

PHASE_STEPS = (1, 2, 3)


class Setting(NamedTuple):
    """One measurement setting.

    ``ell == 0`` denotes the canonical projector |k><k|; ``ell`` in 1..3
    denotes the phase projector built on the pair (reference, k).
    """

    k: int
    ell: int = 0

    @property
    def is_canonical(self):
        return self.ell == 0

    def label(self):
        return f"canonical[{self.k}]" if self.is_canonical else f"phase[{self.k},{self.ell}]"


def phase_offset(ell):
    """Relative phase pi/2 * (ell - 1/2) of the ell-th projector: pi/4, 3pi/4, 5pi/4."""
    if ell not in PHASE_STEPS:
        raise DomainError(f"phase step must be one of {PHASE_STEPS}, got {ell}")
    return 0.5 * np.pi * (ell - 0.5)


def phase_projector_state(k, ell, r, dim):
    """(|r> + exp(i pi/2 (ell - 1/2)) |k>) / sqrt(2)."""
    if dim < 2:
        raise InvalidDimensionError(f"phase projectors need dim >= 2, got {dim}")
    if not (0 <= k < dim and 0 <= r < dim):
        raise InvalidProjectorError(f"indices k={k}, r={r} outside [0, {dim})")
    if k == r:
        raise InvalidProjectorError(f"k and the reference coincide (k = r = {k})")
    theta = phase_offset(ell)
    amps = np.zeros(dim, dtype=complex)
    amps[r] = 1.0 / np.sqrt(2.0)
    amps[k] = np.exp(1j * theta) / np.sqrt(2.0)
    return PureState(amps)


def select_reference(canonical_probs):
    """Index of the largest canonical probability, lowest index on ties.

    Estimated probabilities need not be normalized; only their ordering
    matters.
    """
    probs = np.asarray(canonical_probs, dtype=float).reshape(-1)
    if probs.size < 1:
        raise InvalidDimensionError("empty probability vector")
    if np.any(probs < 0) or not np.all(np.isfinite(probs)):
        raise DomainError("canonical probabilities must be finite and non-negative")
    if not np.any(probs > 0):
        raise DegenerateInputError("all canonical probabilities are zero")
    # np.argmax returns the first maximum
    return int(np.argmax(probs))


@dataclass(frozen=True)
class ProjectorFrame:
    """The 4d - 3 settings of one adaptive run, in measurement order."""

    dim: int
    reference: int
    settings: tuple

    @property
    def canonical_settings(self):
        return self.settings[: self.dim]

    @property
    def phase_settings(self):
        return self.settings[self.dim :]

    def __len__(self):
        return len(self.settings)

    def projector_state(self, setting):
        if setting.is_canonical:
            return PureState.basis(setting.k, self.dim)
        return phase_projector_state(setting.k, setting.ell, self.reference, self.dim)

    def projector_matrix(self):
        """Rows are the conjugated projector states, one per setting."""
        return np.array([self.projector_state(s).amplitudes.conj() for s in self.settings])


def build_frame(canonical_probs):
    probs = np.asarray(canonical_probs, dtype=float).reshape(-1)
    reference = select_reference(probs)
    d = probs.size
    settings = [Setting(k) for k in range(d)]
    settings += [Setting(k, ell) for k in range(d) if k != reference for ell in PHASE_STEPS]
    return ProjectorFrame(dim=d, reference=reference, settings=tuple(settings))
