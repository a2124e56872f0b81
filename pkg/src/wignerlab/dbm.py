"""Dyson Brownian motion, its exact transition kernel, and entry heat flow.

Letting every matrix entry run an independent Brownian motion for time t
adds an independent GUE matrix scaled by sqrt(t); the induced eigenvalue
process has an explicit transition density built from a Vandermonde
ratio and a Gaussian determinant.  The entry-density side of the same
evolution is the heat semigroup exp(t d^2/dx^2) acting on the scalar
law, and the compensated (truncated time-reversed) density cancels the
flow to any prescribed order in t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import sample_gue
from .errors import DegeneracyError, NumericsError
from .grids import DensityGrid

#: minimum gap between transition-kernel source points
MIN_SOURCE_GAP = 1e-6


@dataclass(frozen=True)
class DbmPath:
    """Sorted spectra along one realization of the eigenvalue dynamics."""

    times: np.ndarray
    spectra: np.ndarray  # shape (len(times), n), each row sorted

    @property
    def n(self) -> int:
        return self.spectra.shape[1]


def dbm_path(h0: np.ndarray, times, rng: np.random.Generator) -> DbmPath:
    """Evolve the entries by Brownian increments, recording spectra.

    Increment k adds sqrt(t_{k+1} - t_k) times a fresh GUE draw, so the
    marginal at each recorded time matches a single-shot Gaussian
    deformation of the start matrix.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise ValueError("times must start at 0")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    h = np.array(h0, dtype=complex)
    n = h.shape[0]
    spectra = np.empty((times.size, n))
    spectra[0] = np.linalg.eigvalsh(h)
    for k in range(1, times.size):
        dt = times[k] - times[k - 1]
        h = h + math.sqrt(dt) * sample_gue(n, rng)
        spectra[k] = np.linalg.eigvalsh(h)
    return DbmPath(times, spectra)


def vandermonde(x) -> float:
    """Product of pairwise differences x_j - x_i over i < j."""
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        return 1.0
    diffs = x[None, :] - x[:, None]
    return float(np.prod(diffs[np.triu_indices(x.size, k=1)]))


def transition_density(x, y, t: float, n: int | None = None) -> float:
    """Eigenvalue transition density after a Gaussian deformation of time t.

    Evaluates the Vandermonde-ratio Gaussian-determinant formula for
    sorted destination x given sorted source y.  For n = 1 this is the
    plain heat kernel with variance t.  Source points closer than
    ``MIN_SOURCE_GAP`` make the ratio numerically meaningless; perturb
    them instead.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if t <= 0:
        raise ValueError(f"time must be positive, got {t}")
    if n is None:
        n = x.size
    if x.size != n or y.size != n:
        raise ValueError("x and y must both have length n")
    if np.any(np.diff(x) < 0) or np.any(np.diff(y) < 0):
        raise ValueError("x and y must be sorted ascending")
    if n > 1 and np.min(np.diff(y)) <= MIN_SOURCE_GAP:
        raise DegeneracyError(
            f"source spectrum has a gap below {MIN_SOURCE_GAP}; perturb it first")
    gauss = np.exp(-n * (x[:, None] - y[None, :]) ** 2 / (2.0 * t))
    det = float(np.linalg.det(gauss))
    ratio = 1.0 if n == 1 else vandermonde(x) / vandermonde(y)
    return (n / (2.0 * math.pi * t)) ** (n / 2.0) * ratio * det


def transition_density_any_order(x, y, t: float) -> float:
    """Transition density extended symmetrically to unordered destinations."""
    x = np.sort(np.asarray(x, dtype=float))
    return transition_density(x, y, t)


def heat_semigroup(grid: DensityGrid, t: float) -> DensityGrid:
    """Apply exp(t d^2/dx^2) spectrally: Gaussian smoothing of variance 2t.

    Mass is preserved exactly (the zero mode is untouched).  For
    nonnegative input the output is clipped to zero where roundoff
    produces negatives below 1e-12 of the peak; signed input (such as a
    compensated density) flows through unclipped.  Raises if the result
    leaks into the outer bins, where the periodic spectral
    representation stops being faithful.
    """
    if t <= 0:
        raise ValueError(f"time must be positive, got {t}")
    v = grid.values
    omega = 2.0 * np.pi * np.fft.rfftfreq(v.size, d=grid.dx)
    out = np.fft.irfft(np.fft.rfft(v) * np.exp(-t * omega ** 2), n=v.size)
    if np.all(v >= 0):
        floor = -1e-12 * max(out.max(), 1e-300)
        if out.min() < floor:
            raise NumericsError("heat flow produced genuinely negative density values")
        out = np.maximum(out, 0.0)
    result = DensityGrid(grid.x0, grid.dx, out)
    if not result.is_contained():
        raise NumericsError(
            "density support reached the grid edge; enlarge the grid before flowing")
    return result


def compensated_density(grid: DensityGrid, t: float, order: int) -> DensityGrid:
    """Truncated time-reversed density: sum_{k<=order} (-t L)^k h / k!.

    Computed spectrally, where L = d^2/dx^2 multiplies by -omega^2, so
    the correction multiplier is the truncated exponential of +t omega^2.
    The result may be signed but always integrates to one.  Applying the
    forward flow to it reproduces h up to O(t^(order+1)).
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    v = grid.values
    omega = 2.0 * np.pi * np.fft.rfftfreq(v.size, d=grid.dx)
    arg = t * omega ** 2
    multiplier = sum(arg ** k / math.factorial(k) for k in range(order + 1))
    out = np.fft.irfft(np.fft.rfft(v) * multiplier, n=v.size)
    if not np.all(np.isfinite(out)):
        raise NumericsError(
            "spectral derivatives blew up; the density is too rough for this order")
    return DensityGrid(grid.x0, grid.dx, out)
