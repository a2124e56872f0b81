"""Stieltjes transforms and the semicircle self-consistency diagnostics.

The empirical transform of a spectrum is compared against the semicircle
transform m(z), the root of m^2 + z m + 1 = 0 in the upper half plane.
The per-index decomposition isolates the three error terms whose
smallness makes the empirical transform an approximate root of the same
quadratic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import (_check_hermitian, _check_upper_half, deleted_column,
                       hermitian_eig, principal_minor)


def empirical_stieltjes(eigs, z: complex) -> complex:
    """(1/N) sum 1/(mu_a - z) for Im z > 0."""
    z = _check_upper_half(z)
    eigs = np.asarray(eigs, dtype=float)
    return complex(np.mean(1.0 / (eigs - z)))


def semicircle_stieltjes(z):
    """Upper-half-plane root of m^2 + z m + 1 = 0.

    The branch is selected by testing the sign of the imaginary part of
    the two quadratic roots, not through a principal square root, so the
    function is continuous across Re z = 0 and beyond |E| = 2.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise ValueError("spectral parameter must have positive imaginary part")
    s = np.sqrt(z * z - 4.0)
    plus = (-z + s) / 2.0
    minus = (-z - s) / 2.0
    out = np.where(plus.imag > 0, plus, minus)
    return out if out.ndim else complex(out)


def fixed_point_residual(m: complex, z: complex) -> float:
    """|m + 1/(z + m)|, zero exactly at the semicircle transform."""
    z = complex(z)
    m = complex(m)
    if z + m == 0:
        raise ZeroDivisionError("z + m = 0: fixed-point map singular here")
    return abs(m + 1.0 / (z + m))


@dataclass(frozen=True)
class SelfConsistency:
    """Summands of the self-consistency error at one diagonal index.

    hjj_term    : minus the rescaled diagonal entry (order N^{-1/2})
    minor_drift : weighted minor transform minus the full transform
                  (interlacing forces |drift| <= 1/(N eta))
    fluctuation : (1/N) sum (xi_a - 1)/(lambda_a - z), mean zero
    """

    hjj_term: complex
    minor_drift: complex
    fluctuation: complex

    @property
    def total(self) -> complex:
        return self.hjj_term + self.minor_drift + self.fluctuation


def self_consistency_terms(h: np.ndarray, z: complex, j: int) -> SelfConsistency:
    """Decompose the deviation of index j from the semicircle fixed point.

    With X the sum of the three terms, the exact identity
    ``(H - z)^{-1}(j, j) = 1 / (-z - m_N(z) - X)`` holds.
    """
    h = _check_hermitian(h)
    z = _check_upper_half(z)
    n = h.shape[0]
    if n < 2:
        raise ValueError("self-consistency terms need dimension >= 2")
    eigs = hermitian_eig(h).eigenvalues
    m_full = complex(np.mean(1.0 / (eigs - z)))
    minor = hermitian_eig(principal_minor(h, j), want_vectors=True)
    a = deleted_column(h, j)
    xi = n * np.abs(minor.eigenvectors.conj().T @ a) ** 2
    m_minor = complex(np.mean(1.0 / (minor.eigenvalues - z)))
    drift = (n - 1) / n * m_minor - m_full
    fluct = complex(np.sum((xi - 1.0) / (minor.eigenvalues - z)) / n)
    return SelfConsistency(-complex(h[j, j].real), drift, fluct)


def interlacing_check(eigs_h, eigs_b, tol: float = 1e-10) -> bool:
    """True iff the minor spectrum interlaces the parent spectrum."""
    mu = np.asarray(eigs_h, dtype=float)
    lam = np.asarray(eigs_b, dtype=float)
    if lam.size != mu.size - 1:
        raise ValueError(f"expected lengths N and N-1, got {mu.size} and {lam.size}")
    return bool(np.all(mu[:-1] <= lam + tol) and np.all(lam <= mu[1:] + tol))
