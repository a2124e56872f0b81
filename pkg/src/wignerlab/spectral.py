"""Dense hermitian eigendecompositions, principal minors and resolvents.

All indices are 0-based.  Eigenvalues come out ascending; eigenvectors,
when requested, are the columns of a unitary matrix.  The decomposition
is delegated to LAPACK through numpy, which meets the residual and
orthonormality bounds asserted in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericsError

#: eigenvector residual / orthonormality bound relative to ||H||
EIG_TOL = 1e-10


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.abs(h).max()) if h.size else 1.0)
    if np.abs(h - h.conj().T).max() > 1e-12 * scale:
        raise ValueError("matrix is not hermitian")
    return h


def _check_upper_half(z: complex) -> complex:
    z = complex(z)
    if z.imag <= 0:
        raise ValueError(f"spectral parameter must have positive imaginary part, got {z}")
    return z


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and, optionally, matching orthonormal vectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    def vector(self, alpha: int) -> np.ndarray:
        if self.eigenvectors is None:
            raise ValueError("decomposition was computed without eigenvectors")
        return self.eigenvectors[:, alpha]


def hermitian_eig(h: np.ndarray, want_vectors: bool = False) -> SpectralDecomposition:
    """Full spectrum of a hermitian matrix, ascending."""
    h = _check_hermitian(h)
    try:
        if want_vectors:
            w, v = np.linalg.eigh(h)
            return SpectralDecomposition(w, v)
        return SpectralDecomposition(np.linalg.eigvalsh(h))
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"eigensolver failed to converge: {exc}") from exc


def principal_minor(h: np.ndarray, j: int) -> np.ndarray:
    """The matrix with row and column ``j`` removed."""
    h = np.asarray(h)
    n = h.shape[0]
    if n < 2:
        raise ValueError("a 1x1 matrix has no principal minor")
    if not 0 <= j < n:
        raise ValueError(f"index {j} out of range for dimension {n}")
    keep = np.arange(n) != j
    return h[np.ix_(keep, keep)]


def deleted_column(h: np.ndarray, j: int) -> np.ndarray:
    """Column ``j`` of ``h`` with its diagonal entry removed."""
    h = np.asarray(h)
    n = h.shape[0]
    if not 0 <= j < n:
        raise ValueError(f"index {j} out of range for dimension {n}")
    return np.delete(h[:, j], j)


def resolvent_diag(h: np.ndarray, z: complex, j: int) -> complex:
    """Entry (j, j) of ``(H - z)^{-1}`` by a direct linear solve."""
    h = _check_hermitian(h)
    z = _check_upper_half(z)
    n = h.shape[0]
    if not 0 <= j < n:
        raise ValueError(f"index {j} out of range for dimension {n}")
    rhs = np.zeros(n, dtype=complex)
    rhs[j] = 1.0
    try:
        x = np.linalg.solve(h - z * np.eye(n), rhs)
    except np.linalg.LinAlgError as exc:  # impossible for Im z > 0
        raise NumericsError(f"resolvent solve broke down at z={z}: {exc}") from exc
    out = complex(x[j])
    if out.imag <= 0:
        raise NumericsError(f"resolvent diagonal lost positivity at z={z}")
    return out


def minor_overlaps(h: np.ndarray, j: int) -> np.ndarray:
    """Overlaps ``xi_alpha = N |a . u_alpha|^2`` with the minor's eigenbasis.

    ``a`` is column ``j`` of ``H`` without the diagonal entry; ``u_alpha``
    runs over the eigenvectors of the minor.  By Parseval the overlaps sum
    to ``N ||a||^2`` exactly.
    """
    h = _check_hermitian(h)
    n = h.shape[0]
    a = deleted_column(h, j)
    dec = hermitian_eig(principal_minor(h, j), want_vectors=True)
    return n * np.abs(dec.eigenvectors.conj().T @ a) ** 2


def schur_diag(h: np.ndarray, z: complex, j: int) -> complex:
    """Entry (j, j) of the resolvent through the Schur complement.

    Evaluates ``1 / (h_jj - z - (1/N) sum_a xi_a / (lambda_a - z))`` with
    the minor's spectrum and overlaps; agrees with :func:`resolvent_diag`
    analytically and serves as its independent cross-check.
    """
    h = _check_hermitian(h)
    z = _check_upper_half(z)
    n = h.shape[0]
    if n < 2:
        raise ValueError("Schur form needs dimension >= 2")
    a = deleted_column(h, j)
    dec = hermitian_eig(principal_minor(h, j), want_vectors=True)
    xi = n * np.abs(dec.eigenvectors.conj().T @ a) ** 2
    quad = np.sum(xi / (dec.eigenvalues - z)) / n
    out = 1.0 / (h[j, j].real - z - quad)
    out = complex(out)
    if out.imag <= 0:
        raise NumericsError(f"Schur diagonal lost positivity at z={z}")
    return out
