#!/usr/bin/env python3
"""Semicircle law at three window scales.

Samples one large GUE matrix and compares eigenvalue counts against the
semicircle density on macroscopic, mesoscopic and microscopic windows,
then estimates the microscopic deviation probability over an ensemble.
"""

import numpy as np

from wignerlab import (EnergyWindow, EnsembleSpec, deviation_probability,
                       dos_estimate, realization, semicircle_density)

N = 1000
SEED = 7

spec = EnsembleSpec(n=N, seed=SEED)
eigs = np.linalg.eigvalsh(realization(spec, 0))

print(f"GUE, N = {N}, one realization")
print(f"{'E':>5} {'scale':>12} {'estimate':>10} {'semicircle':>11}")
for e in (-1.0, 0.0, 1.0):
    rho = semicircle_density(e)
    for kind, scale, label in (("eta", 0.5, "eta=0.5"),
                               ("eta", 20 / np.sqrt(N) / N ** 0.0, "eta=0.63"),
                               ("micro", 60.0, "K=60")):
        window = EnergyWindow(e, kind, scale)
        est = dos_estimate(eigs, window, N)
        print(f"{e:>5.1f} {label:>12} {est:>10.4f} {rho:>11.4f}")

print()
print("Microscopic deviation probability at E = 0, K = 60:")
window = EnergyWindow(0.0, "micro", 60.0)
for delta in (0.02, 0.05, 0.10):
    out = deviation_probability(spec, window, delta, reps=40)
    print(f"  P(|dos - rho| >= {delta:.2f}) = {out.probability:.3f} "
          f"(95% CI [{out.ci_low:.3f}, {out.ci_high:.3f}])")
