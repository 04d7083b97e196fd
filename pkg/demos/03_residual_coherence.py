"""Finite-size floor of the qubit coherence.

The exponential dephasing cannot continue forever in a finite Hilbert
space: once the joint wavefunction is ergodic, |rho01| fluctuates around
1/sqrt(N) with N = 2 * N_d.  Doubling the detector dimension six times
traces out the scaling.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qkr_detector import SimParams, evolve, residual_level

levels = [2 ** k for k in range(7, 13)]
res = []
for n in levels:
    params = SimParams.for_levels(n, K=8.0, epsilon=0.3, delta=0.2,
                                  t_max=2000)
    traj = evolve(params, (1 / np.sqrt(5), 2 / np.sqrt(5)))
    res.append(residual_level(np.abs(traj.rho01), 500, 2000))
    print(f"N_d = {n:5d}: rho_res = {res[-1]:.5f}, "
          f"rho_res * sqrt(2 N_d) = {res[-1] * np.sqrt(2 * n):.3f}")

n_total = 2 * np.array(levels, dtype=float)
fig, ax = plt.subplots(figsize=(6, 4.5))
ax.loglog(n_total, res, "o", label=r"$\rho_{\rm res}$ (simulation)")
ax.loglog(n_total, 1 / np.sqrt(n_total), "k--", label=r"$1/\sqrt{N}$")
ax.set_xlabel(r"Hilbert-space size $N = 2 N_d$")
ax.set_ylabel(r"$\rho_{\rm res}$")
ax.legend()

os.makedirs("demos/output", exist_ok=True)
fig.tight_layout()
fig.savefig("demos/output/03_residual_coherence.png", dpi=150)
print("wrote demos/output/03_residual_coherence.png")
