#!/usr/bin/env python3
"""Unfolded two-point statistics against the sine-kernel prediction.

Compares the pair-separation histogram of unfolded GUE eigenvalues with
1 - sinc^2, and shows that an uncorrelated control ensemble stays flat.
"""

import numpy as np

from wignerlab import (EnsembleSpec, derive_stream, realization,
                       semicircle_density, sine_kernel_two_point,
                       two_point_estimate)

N, REPS, E = 500, 120, 0.0

spec = EnsembleSpec(n=N, seed=19)
samples = [np.linalg.eigvalsh(realization(spec, k)) for k in range(REPS)]
est = two_point_estimate(samples, E, N, bin_width=0.2, r_max=2.6, window=60.0)
reference = sine_kernel_two_point(est.r)

rng = derive_stream(19, 10_000)
half = 60.0 / (N * semicircle_density(E))
control = [np.sort(E + rng.uniform(-half, half, rng.poisson(120)))
           for _ in range(REPS)]
est_poisson = two_point_estimate(control, E, N, bin_width=0.2, r_max=2.6,
                                 window=60.0)

print(f"GUE N = {N}, {REPS} realizations, unfolded at E = {E}")
print(f"{'r':>5} {'R2 (GUE)':>9} {'1-sinc^2':>9} {'R2 (Poisson)':>13}")
for r, v, ref, p in zip(est.r, est.values, reference, est_poisson.values):
    print(f"{r:>5.2f} {v:>9.3f} {ref:>9.3f} {p:>13.3f}")
