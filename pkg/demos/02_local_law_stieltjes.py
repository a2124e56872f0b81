#!/usr/bin/env python3
"""Stieltjes transform against its semicircle limit, down to eta ~ 1/N.

Also decomposes the self-consistency error at a few diagonal indices into
its three terms: the diagonal entry, the minor drift, and the overlap
fluctuation.
"""

import numpy as np

from wignerlab import (EnsembleSpec, empirical_stieltjes, fixed_point_residual,
                       realization, self_consistency_terms, semicircle_stieltjes)

N = 700
spec = EnsembleSpec(n=N, seed=11)
h = realization(spec, 0)
eigs = np.linalg.eigvalsh(h)

print(f"{'E':>5} {'eta':>8} {'|m_N - m|':>10} {'residual':>10}")
for e in (0.0, 0.5, 1.0, 1.5):
    for eta in (0.5, 0.05, 20.0 / N):
        z = complex(e, eta)
        m = empirical_stieltjes(eigs, z)
        dev = abs(m - semicircle_stieltjes(z))
        res = fixed_point_residual(m, z)
        print(f"{e:>5.1f} {eta:>8.4f} {dev:>10.4f} {res:>10.4f}")

print()
print("self-consistency terms at z = 0 + 20i/N:")
z = complex(0.0, 20.0 / N)
print(f"{'j':>5} {'|h_jj|':>9} {'|drift|':>9} {'|fluct|':>9} {'|total|':>9}")
for j in (0, N // 3, 2 * N // 3):
    terms = self_consistency_terms(h, z, j)
    print(f"{j:>5} {abs(terms.hjj_term):>9.4f} {abs(terms.minor_drift):>9.4f} "
          f"{abs(terms.fluctuation):>9.4f} {abs(terms.total):>9.4f}")
