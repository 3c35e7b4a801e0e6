"""Analytic cumulants of X_t against simulation.

Simulates 10^6 paths at lambda = 2 and prints z-scores for the first four
cumulants on t = 0.5, 1, ..., 5.  Pass ``--plot`` to draw kappa_2 and kappa_3
(needs matplotlib).
"""

import sys

from gcmoments import GrowthSpec, cumulants_X
from gcmoments.montecarlo import SimConfig, compare, simulate_gc

grid = [0.5 * k for k in range(1, 11)]
est = simulate_gc(SimConfig(2.0, grid, 1_000_000, seed=1, n=4))
kappa = cumulants_X(GrowthSpec(2), 4)

for j, k in enumerate(kappa):
    rep = compare(k, grid, est.cumulants[:, j], est.cumulant_se[:, j])
    zs = " ".join(f"{r.z:+.1f}" for r in rep.rows)
    print(f"kappa_{j + 1}: max |z| = {rep.max_abs_z:.2f}   [{zs}]")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt
    import numpy as np

    fine = np.linspace(0, 5, 200)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, j in zip(axes, (1, 2)):
        ax.plot(fine, [kappa[j](t) for t in fine], label="exact")
        ax.errorbar(grid, est.cumulants[:, j], yerr=4 * est.cumulant_se[:, j], fmt="o", ms=3, label="MC, 4 SE")
        ax.set_title(f"kappa_{j + 1}(t)")
        ax.set_xlabel("t")
        ax.legend()
    fig.tight_layout()
    plt.show()
