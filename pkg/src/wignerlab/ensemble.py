"""Sampling of hermitian Wigner matrices and Gaussian-divisible deformations.

A Wigner matrix here has entries ``(x + i*y)/sqrt(N)`` above the diagonal
and ``x/sqrt(N)`` on it, where the real variables are independent with
mean zero, variance ``1/2`` off the diagonal (each of the real and
imaginary parts) and variance ``1`` on it.  With Gaussian entries this is
the GUE, with matrix density proportional to ``exp(-N/2 * Tr H^2)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .grids import DensityGrid

OFFDIAG_VARIANCE = 0.5
DIAG_VARIANCE = 1.0

LAW_KINDS = ("gaussian", "rademacher", "uniform", "grid-custom")


def derive_stream(seed: int, index: int) -> np.random.Generator:
    """Independent, reproducible random stream for realization ``index``.

    Built on the counter-based Philox generator keyed by a spawned seed
    sequence, so the stream for a given (seed, index) is the same no
    matter which worker draws from it or in what order streams are
    created.
    """
    if index < 0:
        raise ValueError(f"stream index must be nonnegative, got {index}")
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class EntryLaw:
    """Scalar law family for the independent matrix entries.

    The same family feeds both positions: off-diagonal real/imaginary
    parts are scaled to variance 1/2, diagonal entries to variance 1.
    ``grid`` is required for kind ``grid-custom`` and is standardized at
    load time (shifted to mean zero, rescaled to the target variance).
    ``subgaussian_nu`` is declared metadata, not enforced numerically.
    """

    kind: str = "gaussian"
    grid: DensityGrid | None = None
    subgaussian_nu: float = 1.0

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise ConfigError(f"unknown entry law {self.kind!r}; choose from {LAW_KINDS}")
        if self.subgaussian_nu <= 0:
            raise ConfigError("subgaussian_nu must be positive")
        if self.kind == "grid-custom":
            if self.grid is None:
                raise ConfigError("grid-custom law needs a DensityGrid")
            if np.any(self.grid.values < 0):
                raise ConfigError("grid-custom law density must be nonnegative")
            g = self.grid.normalized()
            if g.variance() <= 0:
                raise ConfigError("grid-custom law density must have positive variance")
            object.__setattr__(self, "grid", g)
        elif self.grid is not None:
            raise ConfigError(f"law {self.kind!r} does not take a grid")

    def sample(self, rng: np.random.Generator, size, variance: float) -> np.ndarray:
        """Draw mean-zero variates with the requested variance."""
        s = math.sqrt(variance)
        if self.kind == "gaussian":
            return s * rng.standard_normal(size)
        if self.kind == "rademacher":
            return s * (2.0 * rng.integers(0, 2, size=size) - 1.0)
        if self.kind == "uniform":
            a = math.sqrt(3.0 * variance)
            return rng.uniform(-a, a, size=size)
        draws = self.grid.sample(rng, size)
        return (draws - self.grid.mean()) * (s / math.sqrt(self.grid.variance()))

    def sample_offdiag(self, rng, size):
        return self.sample(rng, size, OFFDIAG_VARIANCE)

    def sample_diag(self, rng, size):
        return self.sample(rng, size, DIAG_VARIANCE)


@dataclass(frozen=True)
class EnsembleSpec:
    """Dimension, entry law, Gaussian-component time and seed.

    Together with a realization index this fully determines a sampled
    matrix.  ``t > 0`` adds an independent GUE matrix scaled by sqrt(t)
    on top of the base Wigner draw, without renormalizing the variance.
    """

    n: int
    law: EntryLaw = field(default_factory=EntryLaw)
    t: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"dimension must be >= 1, got {self.n}")
        if self.t < 0:
            raise ConfigError(f"Gaussian component time must be >= 0, got {self.t}")

    def stream(self, index: int) -> np.random.Generator:
        return derive_stream(self.seed, index)

    def to_config(self) -> str:
        """Plain-text key=value section (keys: n, law, t, seed)."""
        return f"n = {self.n}\nlaw = {self.law.kind}\nt = {self.t!r}\nseed = {self.seed}\n"

    @classmethod
    def from_config(cls, text: str, grid: DensityGrid | None = None) -> "EnsembleSpec":
        fields = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith(("#", ";", "[")):
                continue
            if "=" not in line:
                raise ConfigError(f"expected key = value, got {line!r}")
            key, _, value = line.partition("=")
            fields[key.strip().lower()] = value.strip()
        try:
            n = int(fields["n"])
            law = EntryLaw(fields.get("law", "gaussian"), grid=grid)
            t = float(fields.get("t", "0"))
            seed = int(fields.get("seed", "0"))
        except KeyError as exc:
            raise ConfigError(f"missing ensemble key {exc}") from exc
        except ValueError as exc:
            raise ConfigError(f"bad ensemble value: {exc}") from exc
        return cls(n=n, law=law, t=t, seed=seed)


def _hermitian_from_parts(upper_re, upper_im, diag, n: int) -> np.ndarray:
    scale = 1.0 / math.sqrt(n)
    h = np.zeros((n, n), dtype=complex)
    iu = np.triu_indices(n, k=1)
    h[iu] = scale * (upper_re + 1j * upper_im)
    h = h + h.conj().T
    h[np.diag_indices(n)] = scale * diag
    return h


def sample_gue(n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a GUE matrix, law ``dP ~ exp(-N/2 Tr H^2) dH``."""
    if n < 1:
        raise ConfigError(f"dimension must be >= 1, got {n}")
    m = n * (n - 1) // 2
    s = math.sqrt(OFFDIAG_VARIANCE)
    return _hermitian_from_parts(
        s * rng.standard_normal(m),
        s * rng.standard_normal(m),
        rng.standard_normal(n),
        n,
    )


def sample_wigner(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw from the ensemble; with ``spec.t > 0`` returns H0 + sqrt(t)*V."""
    n = spec.n
    m = n * (n - 1) // 2
    h = _hermitian_from_parts(
        spec.law.sample_offdiag(rng, m),
        spec.law.sample_offdiag(rng, m),
        spec.law.sample_diag(rng, n),
        n,
    )
    if spec.t > 0:
        h = h + math.sqrt(spec.t) * sample_gue(n, rng)
    return h


def realization(spec: EnsembleSpec, index: int) -> np.ndarray:
    """Matrix number ``index`` of the ensemble, independent of scheduling."""
    return sample_wigner(spec, spec.stream(index))


def gue_log_density(mu, n: int | None = None) -> float:
    """Log of the unnormalized GUE joint eigenvalue density.

    ``sum_{i<j} 2 log|mu_i - mu_j| - (N/2) sum mu_j^2``; ``-inf`` when two
    coordinates coincide.  Symmetric under permutations of ``mu``.
    """
    mu = np.asarray(mu, dtype=float)
    if n is None:
        n = mu.size
    diffs = mu[:, None] - mu[None, :]
    iu = np.triu_indices(mu.size, k=1)
    gaps = np.abs(diffs[iu])
    if np.any(gaps == 0):
        return -math.inf
    return float(2.0 * np.log(gaps).sum() - 0.5 * n * (mu ** 2).sum())


def matrix_to_csv(h: np.ndarray, fileobj=None) -> str | None:
    """Row-major CSV with one ``re,im`` cell per entry (cells quoted)."""
    buf = fileobj if fileobj is not None else io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_ALL, lineterminator="\n")
    for row in np.atleast_2d(h):
        writer.writerow([f"{float(c.real)!r},{float(c.imag)!r}" for c in row])
    if fileobj is None:
        return buf.getvalue()
    return None


def matrix_from_csv(text: str) -> np.ndarray:
    rows = []
    for record in csv.reader(io.StringIO(text)):
        if not record:
            continue
        rows.append([complex(*map(float, cell.split(","))) for cell in record])
    return np.array(rows, dtype=complex)
