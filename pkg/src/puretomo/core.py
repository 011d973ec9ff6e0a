"""State types, random states, fidelity and purity."""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    InvalidDimensionError,
    InvalidStateError,
)
from .linalg import hermitian_function, jacobi_eigh

__all__ = [
    "PureState",
    "DensityMatrix",
    "RandomStream",
    "as_generator",
    "haar_random_state",
    "fidelity",
    "uhlmann_fidelity",
    "purity",
    "white_noise_state",
]

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGEN_TOL = 1e-10
RANK_TOL = 1e-12


def _frozen(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector of complex amplitudes in the canonical basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 1:
            raise InvalidDimensionError("a state needs at least one amplitude")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"amplitudes have squared norm {norm!r}, expected 1")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def from_amplitudes(cls, amplitudes):
        """Normalize an arbitrary non-zero amplitude vector."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if amps.size < 1:
            raise InvalidDimensionError("a state needs at least one amplitude")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or norm == 0.0:
            raise InvalidStateError("amplitude vector cannot be normalized")
        return cls(amps / norm)

    @classmethod
    def basis(cls, index, dim):
        if dim < 1:
            raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
        if not 0 <= index < dim:
            raise DomainError(f"basis index {index} outside [0, {dim})")
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def uniform(cls, dim):
        if dim < 1:
            raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
        return cls(np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))

    @property
    def dim(self):
        return self.amplitudes.size

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def density_matrix(self):
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def __repr__(self):
        return f"PureState(dim={self.dim}, amplitudes={np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator.

    Construction validates all three properties; pass ``validate=False``
    only for matrices produced by code that guarantees them.
    """

    entries: np.ndarray
    validate: bool = True

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 1:
            raise InvalidDimensionError(f"density matrix must be square and non-empty, got {rho.shape}")
        if self.validate:
            if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
                raise InvalidStateError("density matrix is not Hermitian")
            tr = np.trace(rho).real
            if abs(tr - 1.0) > TRACE_TOL:
                raise InvalidStateError(f"density matrix has trace {tr!r}, expected 1")
            # eigvalsh only validates here; the algorithms use jacobi_eigh
            if np.linalg.eigvalsh(rho).min() < -EIGEN_TOL:
                raise InvalidStateError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _frozen(rho))

    @classmethod
    def maximally_mixed(cls, dim):
        if dim < 1:
            raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self):
        return self.entries.shape[0]

    def probabilities(self):
        return np.real(np.diag(self.entries)).copy()

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True)
class RandomStream:
    """Reproducible random substream identified by ``(seed, stream)``.

    Every call to :meth:`generator` restarts the same draw sequence, so a
    trial indexed by ``stream`` is independent of how trials are scheduled.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream < 0:
            raise DomainError(f"stream index must be non-negative, got {self.stream}")

    def generator(self):
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(seq))


def as_generator(rng):
    """Accept a RandomStream, a numpy Generator, or an int seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RandomStream):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RandomStream(int(rng)).generator()
    raise TypeError(f"cannot build a random generator from {type(rng).__name__}")


def haar_random_state(dim, rng):
    """Haar-distributed pure state from normalized complex Gaussians."""
    if dim < 1:
        raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
    gen = as_generator(rng)
    z = gen.standard_normal(dim) + 1j * gen.standard_normal(dim)
    return PureState(z / np.linalg.norm(z))


def _check_dims(a, b):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")


def uhlmann_fidelity(sigma, rho):
    """Root fidelity Tr sqrt(sqrt(sigma) rho sqrt(sigma)) for general density matrices."""
    _check_dims(sigma, rho)
    s = _as_matrix(sigma)
    r = _as_matrix(rho)
    root = hermitian_function(s, _truncated_sqrt)
    w, _ = jacobi_eigh(root @ r @ root)
    return float(np.clip(np.sum(_truncated_sqrt(w)), 0.0, 1.0))


def _truncated_sqrt(w):
    # round-off eigenvalues of rank-deficient inputs would otherwise add ~1e-8 each
    cutoff = RANK_TOL * max(float(np.max(w)), 0.0)
    return np.sqrt(np.where(w > cutoff, w, 0.0))


def _as_matrix(state):
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    return state.entries


def fidelity(sigma, rho):
    """Root fidelity between two states, each a PureState or DensityMatrix.

    Pure arguments take the exact shortcuts |<psi|phi>| and
    sqrt(<psi|rho|psi>); two mixed arguments go through
    :func:`uhlmann_fidelity`.
    """
    _check_dims(sigma, rho)
    if isinstance(sigma, PureState) and isinstance(rho, PureState):
        value = abs(np.vdot(sigma.amplitudes, rho.amplitudes))
    elif isinstance(sigma, PureState) or isinstance(rho, PureState):
        psi, mixed = (sigma, rho) if isinstance(sigma, PureState) else (rho, sigma)
        overlap = np.vdot(psi.amplitudes, mixed.entries @ psi.amplitudes).real
        value = np.sqrt(max(overlap, 0.0))
    else:
        return uhlmann_fidelity(sigma, rho)
    return float(min(value, 1.0))


def purity(rho):
    """Tr(rho^2); 1 for pure states and 1/d for the maximally mixed state."""
    if isinstance(rho, PureState):
        return 1.0
    m = rho.entries
    # Tr(rho^2) = sum |rho_kl|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def white_noise_state(psi, lam):
    """Mixture (1 - lam)|psi><psi| + lam * I/d."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"noise weight must lie in [0, 1], got {lam}")
    d = psi.dim
    projector = np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityMatrix((1.0 - lam) * projector + lam * np.eye(d) / d)
