"""Probability densities sampled on uniform grids.

A :class:`DensityGrid` represents a real density by its values on the
points ``x0 + i*dx``.  The mass convention throughout the package is the
plain Riemann sum ``sum(values) * dx``.  Grids back two things: custom
scalar entry laws (sampled by inverse CDF) and the entry-density heat
flow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

#: fraction of bins at each end counted as the "outer" region
EDGE_FRACTION = 0.05
#: maximum mass allowed in the outer region of a well-contained density
EDGE_MASS_TOL = 1e-8


@dataclass(frozen=True)
class DensityGrid:
    """Density values on the uniform grid ``x0 + i*dx``, ``i = 0..len-1``."""

    x0: float
    dx: float
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.dx <= 0:
            raise ConfigError(f"grid spacing must be positive, got {self.dx}")
        if self.values.ndim != 1 or self.values.size < 2:
            raise ConfigError("grid needs a 1-D array of at least 2 values")
        if not np.all(np.isfinite(self.values)):
            raise ConfigError("grid values must be finite")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.values.size)

    @property
    def mass(self) -> float:
        return float(self.values.sum() * self.dx)

    def normalized(self) -> "DensityGrid":
        """Rescale to unit mass; requires nonnegative values with positive mass."""
        if np.any(self.values < 0):
            raise ConfigError("cannot normalize a grid with negative values")
        m = self.mass
        if m <= 0:
            raise ConfigError("grid carries no mass")
        return DensityGrid(self.x0, self.dx, self.values / m)

    def mean(self) -> float:
        return float((self.x * self.values).sum() * self.dx / self.mass)

    def variance(self) -> float:
        m = self.mean()
        return float((((self.x - m) ** 2) * self.values).sum() * self.dx / self.mass)

    def edge_mass(self) -> float:
        """Mass sitting in the outer ``EDGE_FRACTION`` of bins on each side."""
        k = max(1, int(EDGE_FRACTION * self.values.size))
        return float((self.values[:k].sum() + self.values[-k:].sum()) * self.dx)

    def is_contained(self) -> bool:
        return self.edge_mass() < EDGE_MASS_TOL

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """Draw by inverse CDF with linear interpolation between bin edges."""
        if np.any(self.values < 0):
            raise ConfigError("cannot sample from a signed grid")
        edges = self.x0 + self.dx * (np.arange(self.values.size + 1) - 0.5)
        cdf = np.concatenate(([0.0], np.cumsum(self.values) * self.dx))
        total = cdf[-1]
        if total <= 0:
            raise ConfigError("grid carries no mass")
        u = rng.uniform(0.0, total, size=size)
        return np.interp(u, cdf, edges)


def grid_from_function(fn, lo: float, hi: float, n: int = 2048) -> DensityGrid:
    """Tabulate a density on [lo, hi] and normalize it to unit mass."""
    x = np.linspace(lo, hi, n)
    return DensityGrid(lo, x[1] - x[0], np.maximum(fn(x), 0.0)).normalized()


def gaussian_grid(sigma: float = 1.0, half_width: float = 10.0, n: int = 2048) -> DensityGrid:
    """Centered normal density, comfortably contained for moderate heat flow."""
    f = lambda x: np.exp(-x * x / (2 * sigma * sigma)) / (sigma * np.sqrt(2 * np.pi))
    return grid_from_function(f, -half_width, half_width, n)


def l1_distance(a: DensityGrid, b: DensityGrid) -> float:
    if a.values.size != b.values.size or a.dx != b.dx or a.x0 != b.x0:
        raise ValueError("grids must share their x-axis")
    return float(np.abs(a.values - b.values).sum() * a.dx)
