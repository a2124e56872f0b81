"""Eigenvector delocalization statistics.

A unit vector spread uniformly over N coordinates has l^p norm
``N^(-1/2 + 1/p)``; a localized one keeps its norm of order one.  The
statistic M = ||v||_p * N^(1/2 - 1/p) therefore sits near 1 for
delocalized vectors and grows toward N^(1/2 - 1/p) with localization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ensemble
from .parallel import map_indices
from .spectral import hermitian_eig

#: default distance from the spectral edge defining the bulk
EDGE_MARGIN = 0.2


def lp_norm(v, p: float) -> float:
    """l^p norm for p in (2, inf]; the regime where the statistic is informative."""
    if not (p > 2):
        raise ValueError(f"need p > 2 (or inf), got {p}")
    v = np.asarray(v)
    if math.isinf(p):
        return float(np.abs(v).max())
    return float((np.abs(v) ** p).sum() ** (1.0 / p))


def deloc_statistic(v, p: float) -> float:
    """M = ||v||_p * N^(1/2 - 1/p) for a unit vector v."""
    v = np.asarray(v)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"expected a unit vector, got ||v||_2 = {norm}")
    n = v.size
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    return lp_norm(v, p) * n ** (0.5 - inv_p)


@dataclass(frozen=True)
class DelocReport:
    """Per-eigenvector statistics plus a bulk summary."""

    eigenvalues: np.ndarray
    statistics: np.ndarray
    p: float
    bulk_mask: np.ndarray
    edge_margin: float

    @property
    def bulk_max(self) -> float:
        return float(self.statistics[self.bulk_mask].max())

    def bulk_quantiles(self, qs=(0.5, 0.9, 0.99)) -> np.ndarray:
        return np.quantile(self.statistics[self.bulk_mask], qs)


def deloc_report(decomposition, p: float = math.inf,
                 edge_margin: float = EDGE_MARGIN) -> DelocReport:
    """Statistic for every eigenvector; the bulk is |mu| <= 2 - edge_margin.

    For degenerate eigenvalues the statistics refer to whichever
    orthonormal basis the eigensolver returned.
    """
    if decomposition.eigenvectors is None:
        raise ValueError("need a decomposition with eigenvectors")
    vecs = decomposition.eigenvectors
    n = decomposition.n
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    if math.isinf(p):
        norms = np.abs(vecs).max(axis=0)
    else:
        norms = (np.abs(vecs) ** p).sum(axis=0) ** (1.0 / p)
    stats = norms * n ** (0.5 - inv_p)
    bulk = np.abs(decomposition.eigenvalues) <= 2.0 - edge_margin
    return DelocReport(decomposition.eigenvalues, stats, p, bulk, edge_margin)


@dataclass(frozen=True)
class TailCurve:
    thresholds: np.ndarray
    fractions: np.ndarray
    reps: int


def _window_max_statistic(args):
    spec, e, k_window, p, index = args
    dec = hermitian_eig(ensemble.realization(spec, index), want_vectors=True)
    half = k_window / (2 * spec.n)
    inside = np.abs(dec.eigenvalues - e) <= half
    if not inside.any():
        return None
    rep = deloc_report(dec, p=p, edge_margin=-10.0)  # keep all vectors
    return float(rep.statistics[inside].max())


def deloc_tail(spec, e: float, k_window: float, p: float, m_grid, reps: int,
               workers: int = 1) -> TailCurve:
    """Fraction of realizations with a window eigenvector of statistic >= M.

    The window is |mu - e| <= K/(2N).  Realizations whose window is empty
    never count as hits, so the curve starts below one when the window is
    small.  Nonincreasing in M by construction.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    m_grid = np.asarray(m_grid, dtype=float)
    maxima = map_indices(_window_max_statistic,
                         [(spec, e, k_window, p, k) for k in range(reps)], workers)
    fractions = np.array([
        sum(1 for m in maxima if m is not None and m >= threshold) / reps
        for threshold in m_grid
    ])
    return TailCurve(m_grid, fractions, reps)
