"""Mutually unbiased bases for prime dimensions and linear-inversion tomography.

For odd prime d the d non-canonical bases are indexed by b and have
components e^{2 pi i (b m^2 + j m) / d} / sqrt(d) on basis vector j; the
canonical basis completes the family.  d = 2 uses the Z, X and Y
eigenbases.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import DensityMatrix, PureState, as_generator
from .errors import DegenerateInputError, DimensionMismatchError, InvalidStateError, UnsupportedDimensionError
from .linalg import jacobi_eigh
from .measurement import estimate_probability, simulate_counts

__all__ = [
    "MubFamily",
    "is_prime",
    "build_mubs",
    "mub_probabilities",
    "mub_linear_inversion",
    "mub_reconstruct",
    "psd_project",
    "simulate_mub_tomography",
]


def is_prime(n):
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, eq=False)
class MubFamily:
    """d + 1 bases; ``bases[b][:, j]`` is the j-th vector of basis b."""

    dim: int
    bases: tuple

    @property
    def outcome_count(self):
        return self.dim * (self.dim + 1)

    def vectors(self):
        """All d(d + 1) basis vectors as rows, grouped by basis."""
        return np.concatenate([u.T for u in self.bases], axis=0)


@lru_cache(maxsize=None)
def _mub_family(d):
    if d == 2:
        s = 1.0 / np.sqrt(2.0)
        bases = [
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
        ]
    else:
        m = np.arange(d)
        bases = [np.eye(d, dtype=complex)]
        for b in range(d):
            # (b m^2 + j m) mod d keeps the exponent small and exact
            expo = (b * m[:, None] ** 2 + m[:, None] * m[None, :]) % d
            bases.append(np.exp(2j * np.pi * expo / d) / np.sqrt(d))
    for u in bases:
        u.setflags(write=False)
    return MubFamily(dim=d, bases=tuple(bases))


def build_mubs(dim):
    """The d + 1 mutually unbiased bases of a prime dimension."""
    if int(dim) != dim or not is_prime(int(dim)):
        raise UnsupportedDimensionError(f"MUB construction needs a prime dimension, got {dim}")
    return _mub_family(int(dim))


def mub_probabilities(state, family):
    """(d + 1, d) array of outcome probabilities for each basis."""
    if state.dim != family.dim:
        raise DimensionMismatchError(f"dimension mismatch: {state.dim} vs {family.dim}")
    out = np.empty((family.dim + 1, family.dim))
    for b, u in enumerate(family.bases):
        if isinstance(state, PureState):
            out[b] = np.abs(u.conj().T @ state.amplitudes) ** 2
        else:
            out[b] = np.real(np.einsum("mj,mn,nj->j", u.conj(), state.entries, u))
    return np.clip(out, 0.0, 1.0)


def mub_linear_inversion(probabilities, family=None):
    """sum_b sum_j p_bj |b,j><b,j| - I, without any positivity correction.

    Each row is renormalized to sum to one first.
    """
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1] + 1:
        raise DimensionMismatchError(f"expected a (d + 1, d) probability array, got shape {p.shape}")
    d = p.shape[1]
    if family is None:
        family = build_mubs(d)
    elif family.dim != d:
        raise DimensionMismatchError(f"family has dim {family.dim}, probabilities imply {d}")
    sums = p.sum(axis=1, keepdims=True)
    if np.any(sums <= 0):
        raise DegenerateInputError("a basis has no probability mass")
    p = p / sums
    rho = -np.eye(d, dtype=complex)
    for b, u in enumerate(family.bases):
        rho += (u * p[b]) @ u.conj().T
    return 0.5 * (rho + rho.conj().T)


def psd_project(matrix):
    """Clip negative eigenvalues and renormalize the trace to one."""
    h = np.asarray(matrix, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {h.shape}")
    if np.abs(h - h.conj().T).max() > 1e-10:
        raise InvalidStateError("matrix is not Hermitian")
    w, v = jacobi_eigh(h)
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if total <= 0:
        raise DegenerateInputError("no positive spectral weight left after clipping")
    rho = (v * (w / total)) @ v.conj().T
    return DensityMatrix(0.5 * (rho + rho.conj().T))


def mub_reconstruct(probabilities, family=None):
    """Linear inversion followed by projection onto the density matrices."""
    return psd_project(mub_linear_inversion(probabilities, family))


def simulate_mub_tomography(state, model=None, rng=None):
    """Measure all d(d + 1) MUB projectors and reconstruct.

    Every projector is measured separately with ``model.pulses`` pulses.
    Returns ``(rho_estimate, probabilities_used)``.
    """
    family = build_mubs(state.dim)
    exact = mub_probabilities(state, family)
    if model is None:
        probs = exact
    else:
        counts = simulate_counts(exact, model, as_generator(rng))
        probs = estimate_probability(counts, model)
    return mub_reconstruct(probs, family), probs
