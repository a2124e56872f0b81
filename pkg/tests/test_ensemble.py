import math

import numpy as np
import pytest
from scipy import stats

from wignerlab.ensemble import (EnsembleSpec, EntryLaw, derive_stream,
                                gue_log_density, matrix_from_csv, matrix_to_csv,
                                realization, sample_gue, sample_wigner)
from wignerlab.errors import ConfigError
from wignerlab.grids import DensityGrid


def test_stream_determinism():
    a = derive_stream(7, 0).standard_normal(100)
    b = derive_stream(7, 0).standard_normal(100)
    assert np.array_equal(a, b)


def test_stream_distinctness():
    a = derive_stream(7, 0).standard_normal(100)
    b = derive_stream(7, 1).standard_normal(100)
    assert not np.array_equal(a, b)


def test_stream_independence_empirical():
    a = derive_stream(11, 0).standard_normal(100_000)
    b = derive_stream(11, 1).standard_normal(100_000)
    corr = np.corrcoef(a, b)[0, 1]
    assert abs(corr) < 0.02


def test_stream_negative_index_rejected():
    with pytest.raises(ValueError):
        derive_stream(7, -1)


def test_reproducibility_same_matrix():
    spec = EnsembleSpec(n=64, seed=123)
    h1 = realization(spec, 5)
    h2 = realization(spec, 5)
    assert np.array_equal(h1, h2)
    assert not np.array_equal(h1, realization(spec, 6))


@pytest.mark.parametrize("kind", ["gaussian", "rademacher", "uniform"])
def test_hermiticity_exact(kind):
    spec = EnsembleSpec(n=40, law=EntryLaw(kind), seed=2)
    h = realization(spec, 0)
    assert np.abs(h - h.conj().T).max() == 0.0
    assert np.abs(h.diagonal().imag).max() == 0.0


def _skewed_grid():
    x = np.linspace(-1.0, 3.0, 801)
    vals = np.maximum(0.0, (x + 1.0) * (3.0 - x)) * (1.0 + 0.5 * x)
    return DensityGrid(x[0], x[1] - x[0], vals)


@pytest.mark.parametrize("kind,grid", [
    ("gaussian", None),
    ("rademacher", None),
    ("uniform", None),
    ("grid-custom", _skewed_grid()),
])
def test_entry_moments(kind, grid):
    # mean 0, off-diagonal variance 1/2, diagonal variance 1, within 3 SE
    law = EntryLaw(kind, grid=grid)
    rng = derive_stream(99, 0)
    n_draws = 200_000
    off = law.sample_offdiag(rng, n_draws)
    diag = law.sample_diag(rng, n_draws)
    se_mean_off = off.std() / math.sqrt(n_draws)
    assert abs(off.mean()) < 3 * se_mean_off + 1e-12
    se_var_off = (off ** 2).std() / math.sqrt(n_draws)
    assert abs((off ** 2).mean() - 0.5) < 3 * se_var_off + 1e-12
    se_var_diag = (diag ** 2).std() / math.sqrt(n_draws)
    assert abs((diag ** 2).mean() - 1.0) < 3 * se_var_diag + 1e-12


def test_rademacher_values():
    law = EntryLaw("rademacher")
    rng = derive_stream(1, 0)
    off = law.sample_offdiag(rng, 1000)
    assert set(np.round(np.unique(off), 12)) == {round(-1 / math.sqrt(2), 12),
                                                 round(1 / math.sqrt(2), 12)}
    diag = law.sample_diag(rng, 1000)
    assert set(np.unique(diag)) == {-1.0, 1.0}


def test_scalar_variance_n1_gaussian():
    # h_11 at N=1 carries the unit-variance diagonal law directly
    law = EntryLaw("gaussian")
    rng = derive_stream(5, 0)
    draws = law.sample_diag(rng, 100_000)
    assert abs(draws.mean()) < 0.01
    assert abs(draws.var() - 1.0) < 0.02


def test_gue_n1_eigenvalue_law_standard_normal():
    rng = derive_stream(17, 0)
    vals = np.array([sample_gue(1, rng)[0, 0].real for _ in range(2000)])
    rng2 = derive_stream(17, 1)
    more = EntryLaw("gaussian").sample_diag(rng2, 100_000)
    # matrix path smoke plus the large-sample KS on the underlying law
    assert stats.kstest(more, "norm").statistic < 0.02
    assert stats.kstest(vals, "norm").statistic < 0.05


def test_gue_offdiag_second_moment():
    rng = derive_stream(23, 0)
    n = 2
    samples = np.array([sample_gue(n, rng)[0, 1] for _ in range(100_000)])
    second = (np.abs(samples) ** 2).mean()
    assert abs(second - 1.0 / n) < 0.05 / n


def test_gaussian_component_adds_variance():
    # with t > 0 the off-diagonal second moment grows to (1 + t)/N
    t = 0.7
    spec = EnsembleSpec(n=2, law=EntryLaw("gaussian"), t=t, seed=31)
    rng = derive_stream(31, 0)
    samples = np.array([sample_wigner(spec, rng)[0, 1] for _ in range(60_000)])
    second = (np.abs(samples) ** 2).mean()
    assert abs(second - (1 + t) / 2) < 0.05 * (1 + t) / 2


def test_spectrum_stays_near_support():
    # the 1/sqrt(N) scaling keeps the spectrum essentially inside [-2, 2]
    spec = EnsembleSpec(n=400, seed=41)
    top = [np.abs(np.linalg.eigvalsh(realization(spec, k))).max()
           for k in range(50)]
    assert np.mean(np.array(top) <= 2.1) >= 0.99


def test_gue_joint_density_ratio():
    # direct evaluation: 4 e^{-2} vs e^{-1/2}
    lr = gue_log_density(np.array([1.0, -1.0])) - gue_log_density(np.array([0.5, -0.5]))
    assert math.exp(lr) == pytest.approx(4 * math.exp(-2) / math.exp(-0.5), rel=1e-12)


def test_gue_joint_density_coincidence_and_symmetry():
    assert gue_log_density(np.array([0.3, 0.3])) == -math.inf
    mu = np.array([0.4, -1.2, 2.0])
    assert gue_log_density(mu) == pytest.approx(gue_log_density(mu[::-1]), rel=1e-12)


def test_gue_pair_law_matches_joint_density():
    # 2-D histogram of sorted eigenvalue pairs against the normalized density
    rng = derive_stream(57, 0)
    reps = 100_000
    mats = np.empty((reps, 2, 2), dtype=complex)
    for k in range(reps):
        mats[k] = sample_gue(2, rng)
    eigs = np.linalg.eigvalsh(mats)
    lo, hi, nb = -2.8, 2.8, 24
    h, xe, ye = np.histogram2d(eigs[:, 0], eigs[:, 1], bins=nb,
                               range=[[lo, hi], [lo, hi]])
    centers = (xe[:-1] + xe[1:]) / 2
    xg, yg = np.meshgrid(centers, centers, indexing="ij")
    dens = np.zeros_like(xg)
    ordered = xg < yg
    logd = np.array([[gue_log_density(np.array([a, b])) if a < b else -np.inf
                      for a, b in zip(row_x, row_y)]
                     for row_x, row_y in zip(xg, yg)])
    dens[ordered] = np.exp(logd[ordered])
    dens /= dens.sum()
    emp = h / h.sum()
    assert np.abs(emp - dens).sum() < 0.05


def test_gue_unitary_invariance():
    n = 50
    dft = np.exp(-2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n) / math.sqrt(n)
    rng = derive_stream(71, 0)
    plain, rotated = [], []
    for _ in range(200):
        h = sample_gue(n, rng)
        plain.append(np.linalg.eigvalsh(h))
        rotated.append(np.linalg.eigvalsh(dft @ h @ dft.conj().T))
    ks = stats.ks_2samp(np.concatenate(plain), np.concatenate(rotated)).statistic
    assert ks < 0.05


def test_entry_law_validation():
    with pytest.raises(ConfigError):
        EntryLaw("cauchy")
    with pytest.raises(ConfigError):
        EntryLaw("grid-custom")
    with pytest.raises(ConfigError):
        EntryLaw("gaussian", grid=_skewed_grid())
    bad = DensityGrid(0.0, 0.1, np.full(10, -1.0))
    with pytest.raises(ConfigError):
        EntryLaw("grid-custom", grid=bad)
    with pytest.raises(ConfigError):
        EnsembleSpec(n=0)
    with pytest.raises(ConfigError):
        EnsembleSpec(n=5, t=-1.0)


def test_spec_config_roundtrip():
    spec = EnsembleSpec(n=123, law=EntryLaw("rademacher"), t=0.25, seed=99)
    text = spec.to_config()
    back = EnsembleSpec.from_config(text)
    assert back == spec
    with pytest.raises(ConfigError):
        EnsembleSpec.from_config("law = gaussian\n")  # n missing


def test_matrix_csv_roundtrip():
    spec = EnsembleSpec(n=7, seed=3)
    h = realization(spec, 0)
    text = matrix_to_csv(h)
    assert np.allclose(matrix_from_csv(text), h, rtol=0, atol=0)
