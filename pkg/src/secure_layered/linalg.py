"""Dense complex Hermitian linear algebra helpers.

Matrices are plain ``numpy`` arrays; :func:`as_hermitian` is the single
validation gate used everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigDecomposition",
    "as_hermitian",
    "herm_eig",
    "numerical_rank",
    "is_psd",
    "min_eig",
    "dominant_component",
    "frob_inner",
    "DEFAULT_RANK_TOL",
]

DEFAULT_RANK_TOL = 1e-6
HERMITIAN_TOL = 1e-9


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``a`` as Hermitian and return its exact Hermitian part.

    Raises ``ValueError`` when ``a`` is not square or when
    ``||a - a^H||_F > tol * max(1, ||a||_F)``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    skew = np.linalg.norm(a - a.conj().T)
    scale = max(1.0, float(np.linalg.norm(a)))
    if skew > tol * scale:
        raise ValueError(f"matrix is not Hermitian (skew norm {skew:.3e})")
    h = 0.5 * (a + a.conj().T)
    # diagonal of a Hermitian matrix is real
    h[np.diag_indices_from(h)] = h.diagonal().real
    return h


def herm_eig(a) -> EigDecomposition:
    a = as_hermitian(a)
    w, u = np.linalg.eigh(a)
    # stable sort keeps the LAPACK ordering inside eigenvalue ties
    order = np.argsort(-w, kind="stable")
    return EigDecomposition(w[order], u[:, order])


def _eigvals(a) -> np.ndarray:
    return np.linalg.eigvalsh(as_hermitian(a))


def numerical_rank(a, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of eigenvalues with ``|lambda| > rel_tol * max|lambda|``."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1)")
    w = np.abs(_eigvals(a))
    top = w.max(initial=0.0)
    if top == 0.0:
        return 0
    return int(np.count_nonzero(w > rel_tol * top))


def min_eig(a) -> float:
    return float(_eigvals(a)[0])


def is_psd(a, tol: float = 1e-9) -> bool:
    """PSD test relative to the spectral scale: ``min eig >= -tol * max(1, max|eig|)``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    w = _eigvals(a)
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    return bool(w[0] >= -tol * scale)


def dominant_component(a) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit eigenvector for it.

    The phase is fixed so that the first nonzero entry of the vector is real
    and nonnegative. When the top eigenvalue is repeated the vector returned is
    whichever one ``eigh`` places first in that eigenspace: deterministic, but
    basis dependent.
    """
    dec = herm_eig(a)
    if not np.any(dec.eigenvalues):
        raise ValueError("dominant component of the zero matrix is undefined")
    u = dec.eigenvectors[:, 0].copy()
    mag = np.abs(u)
    first = int(np.flatnonzero(mag > 1e-12 * mag.max())[0])
    u *= np.conj(u[first]) / mag[first]
    u[first] = mag[first]
    return float(dec.eigenvalues[0]), u


def frob_inner(a, b) -> float:
    """``Tr(a b)`` for Hermitian ``a`` and ``b`` (real by construction)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # Tr(AB) = sum_ij A_ij B_ji
    return float(np.real(np.sum(a * b.T)))
