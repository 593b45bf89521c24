"""Dense complex-matrix kernels used by the precoders.

All kernels work on double-precision complex arrays. Returned vectors carry a
fixed phase convention (largest-magnitude entry real and nonnegative, ties
resolved to the lowest index) so that repeated runs are bit-reproducible.
"""
from __future__ import annotations

import numpy as np

# Max entrywise deviation from the conjugate transpose tolerated by
# hermitian_eig_max.
HERMITIAN_TOL = 1e-10

# Default relative singular-value cutoff for null_space is
# max(rows, cols) * RANK_EPS_SCALE, applied relative to the largest
# singular value (the usual numerical-rank convention).
RANK_EPS_SCALE = 1e-12


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf entries."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a vector so its largest-magnitude entry is real and >= 0.

    Ties pick the lowest index; the zero vector is returned unchanged.
    """
    v = np.asarray(v, dtype=np.complex128)
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    if pivot == 0:
        return v.copy()
    return v * (pivot.conjugate() / abs(pivot))


def hermitian_eig_max(a) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit-norm eigenvector of a Hermitian matrix.

    Raises ValueError if ``a`` is not square, is empty, or deviates from its
    conjugate transpose by more than HERMITIAN_TOL in any entry.
    """
    a = as_complex_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("matrix is empty")
    deviation = float(np.max(np.abs(a - a.conj().T)))
    if deviation > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
    eigvals, eigvecs = np.linalg.eigh(a)
    return float(eigvals[-1]), fix_phase(eigvecs[:, -1])


def null_space(a, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of the right null space of ``a``.

    ``tol`` is a cutoff relative to the largest singular value; every returned
    column v satisfies ||a @ v|| <= tol * ||a||_2. Defaults to
    max(rows, cols) * 1e-12. Returns an (n, 0) array for full column rank; a
    matrix with zero rows (or all-zero entries) yields the identity basis.
    """
    a = as_complex_matrix(a, "a")
    m, n = a.shape
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    if m == 0 or not np.any(a):
        return np.eye(n, dtype=np.complex128)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    cutoff = (tol if tol is not None else max(m, n) * RANK_EPS_SCALE) * s[0]
    rank = int(np.sum(s > cutoff))
    basis = vh[rank:].conj().T
    for j in range(basis.shape[1]):
        basis[:, j] = fix_phase(basis[:, j])
    return basis


def least_squares(a, b) -> np.ndarray:
    """Minimum-Frobenius-norm X minimizing ||a @ X - b||_F."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: a has {a.shape[0]} rows, b has {b.shape[0]}")
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    return x
