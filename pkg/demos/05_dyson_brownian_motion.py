#!/usr/bin/env python3
"""Dyson Brownian motion, its exact transition kernel, and entry heat flow.

Runs an eigenvalue path, checks the two-source transition density against
sampled spectra, and measures how the compensated density cancels the
heat flow order by order.
"""

import math

import numpy as np

from wignerlab import (compensated_density, dbm_path, derive_stream,
                       gaussian_grid, heat_semigroup, l1_distance, sample_gue,
                       transition_density)

rng = derive_stream(23, 0)
h0 = sample_gue(8, rng)
path = dbm_path(h0, [0.0, 0.1, 0.3, 0.6, 1.0], rng)
print("eigenvalue path (columns = ordered eigenvalues):")
for t_val, row in zip(path.times, path.spectra):
    print(f"  t={t_val:4.2f}  " + " ".join(f"{v:7.3f}" for v in row))

print()
y = np.array([-1.0, 1.0])
t = 0.3
print(f"transition density from y = {y.tolist()} at t = {t}:")
for x in ([-1.05, 0.95], [-0.2, 0.3], [0.9, 1.1]):
    q = transition_density(np.array(x), y, t)
    print(f"  q({x}) = {q:.5f}")

reps = 20_000
draws = np.empty((reps, 2))
base = np.diag(y).astype(complex)
for k in range(reps):
    draws[k] = np.linalg.eigvalsh(base + math.sqrt(t) * sample_gue(2, rng))
print(f"  sampled gap mean {np.diff(draws, axis=1).mean():.3f}, "
      f"kernel-weighted checks live in the test suite")

print()
print("compensated heat flow, L1 recovery error |exp(tL) h_tilde - h|:")
grid = gaussian_grid(sigma=2.0, half_width=25.0, n=4096)
print(f"{'t':>6} " + " ".join(f"order {n_ord:>1}" for n_ord in (0, 1, 2)))
for t_val in (0.05, 0.1, 0.2):
    errs = [l1_distance(heat_semigroup(compensated_density(grid, t_val, n_ord),
                                       t_val), grid)
            for n_ord in (0, 1, 2)]
    print(f"{t_val:>6.2f} " + " ".join(f"{e:7.1e}" for e in errs))
