"""Semicircle law and density-of-states estimators at all scales.

The density is normalized to total mass one,

    rho(E) = (1/pi) sqrt(1 - E^2/4)   for |E| <= 2,

which is the boundary value Im m(E + i0)/pi of the semicircle Stieltjes
transform.  (The frequently quoted 1/(2 pi) constant normalizes the
integral to 1/2 and is inconsistent with that transform; we use the
self-consistent constant.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import ensemble
from .parallel import map_indices

WINDOW_KINDS = ("eta", "micro", "eps")


def semicircle_density(e):
    """Semicircle density with unit total mass."""
    e = np.asarray(e, dtype=float)
    out = np.zeros_like(e)
    inside = np.abs(e) < 2.0
    out[inside] = np.sqrt(1.0 - e[inside] ** 2 / 4.0) / np.pi
    return out if out.ndim else float(out)


def semicircle_cdf(e):
    """Antiderivative of the density, 0 at -2 and 1 at +2."""
    e = np.clip(np.asarray(e, dtype=float), -2.0, 2.0)
    out = 0.5 + (e * np.sqrt(4.0 - e * e) + 4.0 * np.arcsin(e / 2.0)) / (4.0 * np.pi)
    return out if out.ndim else float(out)


def semicircle_quantiles(n: int) -> np.ndarray:
    """The n points splitting the semicircle into equal-mass cells."""
    probs = (np.arange(n) + 0.5) / n
    return np.array([brentq(lambda x, p=p: semicircle_cdf(x) - p, -2.0, 2.0)
                     for p in probs])


@dataclass(frozen=True)
class EnergyWindow:
    """Interval around ``e`` at one of three scales.

    kind 'eta'   : absolute width, [e - s/2, e + s/2]
    kind 'micro' : width s/N, typically order-one eigenvalue counts
    kind 'eps'   : width s/N with s meant to vanish; same geometry as
                   'micro', kept distinct so estimates divide by s itself
    """

    e: float
    kind: str
    scale: float

    def __post_init__(self):
        if self.kind not in WINDOW_KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}; choose from {WINDOW_KINDS}")
        if self.scale <= 0:
            raise ValueError(f"window scale must be positive, got {self.scale}")

    def bounds(self, n: int) -> tuple[float, float]:
        half = self.scale / 2 if self.kind == "eta" else self.scale / (2 * n)
        return self.e - half, self.e + half


def count_eigenvalues(eigs: np.ndarray, a: float, b: float) -> int:
    """Number of eigenvalues in the closed interval [a, b]; eigs sorted."""
    if a > b:
        raise ValueError(f"empty interval: a={a} > b={b}")
    eigs = np.asarray(eigs)
    return int(np.searchsorted(eigs, b, side="right") - np.searchsorted(eigs, a, side="left"))


def dos_estimate(eigs: np.ndarray, window: EnergyWindow, n: int) -> float:
    """Eigenvalue count over N times the window length.

    For 'micro'/'eps' windows this is count/scale, the microscopic form;
    the three kinds agree whenever the scales describe the same interval.
    """
    a, b = window.bounds(n)
    return count_eigenvalues(eigs, a, b) / (n * (b - a))


@dataclass(frozen=True)
class DeviationProbability:
    probability: float
    ci_low: float
    ci_high: float
    reps: int
    delta: float


def _wilson(k: int, n: int, z: float = 1.96) -> tuple[float, float]:
    p = k / n
    center = (p + z * z / (2 * n)) / (1 + z * z / n)
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)
    return max(0.0, center - half), min(1.0, center + half)


def _dos_realization(args):
    spec, window, index = args
    eigs = np.linalg.eigvalsh(ensemble.realization(spec, index))
    return dos_estimate(eigs, window, spec.n)


def deviation_probability(spec, window: EnergyWindow, delta: float, reps: int,
                          workers: int = 1) -> DeviationProbability:
    """Empirical tail P(|dos_estimate - rho(E)| >= delta) with a Wilson CI."""
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    target = semicircle_density(window.e)
    values = map_indices(_dos_realization, [(spec, window, k) for k in range(reps)],
                         workers)
    hits = sum(abs(v - target) >= delta for v in values)
    lo, hi = _wilson(hits, reps)
    return DeviationProbability(hits / reps, lo, hi, reps, delta)


def smoothed_count(eigs: np.ndarray, e: float, kappa: float, eps: float, n: int) -> float:
    """Smoothed eigenvalue count per unit window, arctangent regularization.

    Equals (N / (pi*kappa)) times the integral of Im m(E' + i eps/N) over
    the width-kappa/N window around ``e``; as eps -> 0 it converges to the
    sharp count over kappa whenever no eigenvalue sits on the boundary.
    """
    if kappa <= 0 or eps <= 0:
        raise ValueError("kappa and eps must be positive")
    eigs = np.asarray(eigs, dtype=float)
    upper = np.arctan(n * (eigs - e + kappa / (2 * n)) / eps)
    lower = np.arctan(n * (eigs - e - kappa / (2 * n)) / eps)
    return float((upper - lower).sum() / (np.pi * kappa))


@dataclass(frozen=True)
class MonteCarloMean:
    value: float
    stderr: float
    reps: int


def _avg_dos_realization(args):
    spec, e, eps, index = args
    eigs = np.linalg.eigvalsh(ensemble.realization(spec, index))
    eta = eps / spec.n
    return float((eta / ((eigs - e) ** 2 + eta * eta)).sum() / (spec.n * np.pi))


def average_dos(spec, e: float, eps: float, reps: int, workers: int = 1) -> MonteCarloMean:
    """Monte-Carlo mean of Im m(E + i eps/N) / pi over the ensemble.

    The window parameter ``eps`` may be far below the mean eigenvalue
    spacing; only the ensemble average is expected to stabilize there,
    and for very small eps that requires a smooth entry law.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    values = np.array(map_indices(_avg_dos_realization,
                                  [(spec, e, eps, k) for k in range(reps)], workers))
    stderr = float(values.std(ddof=1) / math.sqrt(reps)) if reps > 1 else float("nan")
    return MonteCarloMean(float(values.mean()), stderr, reps)
