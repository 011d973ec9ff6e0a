"""Cyclic Jacobi eigensolver for small complex Hermitian matrices.

Used wherever the package needs a spectral decomposition (matrix square
roots for fidelity, projection onto the positive cone).  Sizes of interest
are d <= 64, where the quadratic number of rotations per sweep is cheap.
"""

import numpy as np

from .errors import DimensionMismatchError

__all__ = ["jacobi_eigh", "hermitian_function"]


def _off_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def jacobi_eigh(matrix, tol=1e-13, max_sweeps=100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot a[p, q] with a
    diagonal unitary and then applies the classical real Jacobi rotation,
    so the transformed matrix stays exactly Hermitian.

    Args:
        matrix: square complex array, Hermitian up to rounding.  Only the
            Hermitian part ``(A + A^H) / 2`` is used.
        tol: sweeps stop once the off-diagonal Frobenius norm falls below
            ``tol * max(1, ||A||_F)``.
        max_sweeps: hard limit on full sweeps.

    Returns:
        ``(w, v)`` with eigenvalues ``w`` in ascending order and the
        corresponding orthonormal eigenvectors as the columns of ``v``.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, np.linalg.norm(a))

    for _ in range(max_sweeps):
        if _off_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g < 1e-300:
                    continue
                phase = apq / g
                theta = (a[q, q].real - a[p, p].real) / (2.0 * g)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_function(matrix, func):
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, v = jacobi_eigh(matrix)
    return (v * func(w)) @ v.conj().T
