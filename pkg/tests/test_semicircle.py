import math

import numpy as np
import pytest
from scipy import integrate

from wignerlab.ensemble import EnsembleSpec, derive_stream, realization
from wignerlab.semicircle import (EnergyWindow, average_dos, count_eigenvalues,
                                  deviation_probability, dos_estimate,
                                  semicircle_cdf, semicircle_density,
                                  semicircle_quantiles, smoothed_count)
from wignerlab.stieltjes import empirical_stieltjes, semicircle_stieltjes


def test_density_boundary_and_oracle_values():
    assert semicircle_density(2.0) == 0.0
    assert semicircle_density(-2.0) == 0.0
    assert semicircle_density(3.0) == 0.0
    # oracle: boundary value of the semicircle transform, Im m(E + i eps)/pi
    for e in (0.0, 1.0):
        oracle = semicircle_stieltjes(complex(e, 1e-9)).imag / math.pi
        assert semicircle_density(e) == pytest.approx(oracle, abs=1e-4)
    assert semicircle_density(0.0) == pytest.approx(1 / math.pi, rel=1e-12)
    assert semicircle_density(1.0) == pytest.approx(math.sqrt(3) / (2 * math.pi), rel=1e-12)


def test_density_normalization():
    mass, err = integrate.quad(semicircle_density, -2, 2, limit=200)
    assert abs(mass - 1.0) <= max(1e-8, 2 * err)


def test_density_transform_consistency_grid():
    for e in (0.0, 0.5, -0.5, 1.0, -1.0, 1.5, -1.5):
        lhs = math.pi * semicircle_density(e)
        rhs = semicircle_stieltjes(complex(e, 1e-8)).imag
        assert abs(lhs - rhs) <= 1e-4


def test_cdf_and_quantiles():
    assert semicircle_cdf(-2.0) == pytest.approx(0.0, abs=1e-14)
    assert semicircle_cdf(2.0) == pytest.approx(1.0, rel=1e-14)
    assert semicircle_cdf(0.0) == pytest.approx(0.5, rel=1e-14)
    # derivative of the cdf reproduces the density
    for e in (-1.3, 0.2, 1.7):
        num = (semicircle_cdf(e + 1e-6) - semicircle_cdf(e - 1e-6)) / 2e-6
        assert num == pytest.approx(semicircle_density(e), abs=1e-6)
    q = semicircle_quantiles(17)
    assert np.all(np.diff(q) > 0)
    for i, x in enumerate(q):
        assert semicircle_cdf(x) == pytest.approx((i + 0.5) / 17, abs=1e-10)


def test_count_examples():
    eigs = np.array([-1.0, 0.0, 1.0])
    assert count_eigenvalues(eigs, -0.5, 0.5) == 1
    assert count_eigenvalues(eigs, 0.1, 0.1) == 0
    assert count_eigenvalues(eigs, -10, 10) == 3
    # closed interval: boundary eigenvalues count once
    assert count_eigenvalues(eigs, -1.0, 0.0) == 2
    with pytest.raises(ValueError):
        count_eigenvalues(eigs, 1.0, 0.0)


def test_dos_estimate_arithmetic():
    eigs = np.array([-0.5, 0.0, 0.5])
    w = EnergyWindow(0.0, "eta", 1.2)
    assert dos_estimate(eigs, w, 3) == pytest.approx(3 / (3 * 1.2), rel=1e-12)
    # unit consistency: micro window with K/N matching the eta width
    w2 = EnergyWindow(0.0, "micro", 3 * 1.2)
    assert dos_estimate(eigs, w2, 3) == pytest.approx(dos_estimate(eigs, w, 3), rel=1e-12)
    w3 = EnergyWindow(0.0, "eps", 3 * 1.2)
    assert dos_estimate(eigs, w3, 3) == pytest.approx(dos_estimate(eigs, w, 3), rel=1e-12)


def test_window_validation():
    with pytest.raises(ValueError):
        EnergyWindow(0.0, "mesoscopic", 1.0)
    with pytest.raises(ValueError):
        EnergyWindow(0.0, "eta", 0.0)


def test_deviation_probability_limits():
    spec = EnsembleSpec(n=400, seed=11)
    window = EnergyWindow(0.0, "micro", 40.0)
    zero = deviation_probability(spec, window, 0.0, reps=12)
    assert zero.probability == 1.0
    huge = deviation_probability(spec, window, 10.0, reps=12)
    assert huge.probability == 0.0
    assert 0.0 <= huge.ci_low <= huge.ci_high <= 1.0


def test_deviation_probability_monotone_in_delta():
    spec = EnsembleSpec(n=400, seed=13)
    window = EnergyWindow(0.0, "micro", 40.0)
    # same spec and seed reproduce the same sample set per call
    probs = [deviation_probability(spec, window, d, reps=16).probability
             for d in (0.0, 0.02, 0.08, 0.3, 10.0)]
    assert all(a >= b for a, b in zip(probs, probs[1:]))


def test_deviation_probability_monotone_in_window():
    # larger microscopic windows concentrate the estimate
    spec = EnsembleSpec(n=400, seed=17)
    delta = 0.08
    small = deviation_probability(spec, EnergyWindow(0.0, "micro", 10.0), delta, reps=24)
    large = deviation_probability(spec, EnergyWindow(0.0, "micro", 120.0), delta, reps=24)
    assert large.probability <= small.probability + 1e-12


def test_smoothed_count_single_eigenvalue():
    val = smoothed_count(np.array([0.3]), 0.3, kappa=1.0, eps=1e-6, n=1)
    assert val == pytest.approx(1.0, abs=1e-5)
    far = smoothed_count(np.array([5.0]), 0.0, kappa=1.0, eps=1e-3, n=50)
    assert abs(far) < 1e-4


def test_smoothed_count_matches_sharp_count():
    rng = derive_stream(23, 0)
    eigs = np.sort(rng.standard_normal(200))
    n = 200
    kappa = 37.0  # keeps window boundaries clear of eigenvalues
    e = float(eigs[100]) + 1e-4
    sharp = count_eigenvalues(eigs, e - kappa / (2 * n), e + kappa / (2 * n))
    smooth = smoothed_count(eigs, e, kappa, eps=1e-8, n=n)
    assert smooth == pytest.approx(sharp / kappa, abs=1e-4)


def test_smoothed_count_is_stieltjes_window_integral():
    # identity: (N/(pi kappa)) integral of Im m over the window
    rng = derive_stream(29, 0)
    eigs = np.sort(rng.standard_normal(40))
    n, e, kappa, eps = 40, 0.1, 3.0, 0.7
    direct = smoothed_count(eigs, e, kappa, eps, n)
    integral, err = integrate.quad(
        lambda ep: empirical_stieltjes(eigs, complex(ep, eps / n)).imag,
        e - kappa / (2 * n), e + kappa / (2 * n), limit=400)
    assert direct == pytest.approx(n * integral / (math.pi * kappa), abs=max(1e-9, 5 * err))


def test_smoothed_count_validation():
    with pytest.raises(ValueError):
        smoothed_count(np.array([0.0]), 0.0, kappa=0.0, eps=1.0, n=1)
    with pytest.raises(ValueError):
        smoothed_count(np.array([0.0]), 0.0, kappa=1.0, eps=0.0, n=1)


def test_dos_standard_error_scaling():
    # tripling the realization count shrinks the standard error by ~sqrt(3)
    spec = EnsembleSpec(n=200, seed=37)
    window = EnergyWindow(0.0, "micro", 30.0)
    values = np.array([dos_estimate(np.linalg.eigvalsh(realization(spec, k)),
                                    window, spec.n) for k in range(90)])
    se_small = values[:30].std(ddof=1) / math.sqrt(30)
    se_large = values.std(ddof=1) / math.sqrt(90)
    assert se_small / se_large == pytest.approx(math.sqrt(3), rel=0.35)


def test_average_dos_smoke():
    # pinned large-scale version runs in acceptance
    spec = EnsembleSpec(n=150, seed=31)
    out = average_dos(spec, 0.0, eps=5.0, reps=200)
    assert out.value == pytest.approx(1 / math.pi, rel=0.10)
    assert out.stderr < 0.02
    with pytest.raises(ValueError):
        average_dos(spec, 0.0, eps=5.0, reps=0)
