"""How the decoherence rates scale with the coupling strength.

Weak coupling: both rates grow as eps^2 (golden-rule behavior of a
chaotic bath).  Strong coupling: repeated effective measurements by the
detector freeze the populations -- the quantum Zeno effect -- and the
relaxation rate comes back down roughly as delta^2/eps^2 before the
per-kick dephasing factor starts to oscillate.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qkr_detector import SimParams, sweep

QUBIT = (1 / np.sqrt(5), 2 / np.sqrt(5))

template = SimParams.for_levels(2 ** 10, K=8.0, epsilon=0.1, delta=0.1,
                                t_max=2500)
eps_values = [0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0]
rows = sweep(template, "epsilon", eps_values, QUBIT, workers=4)

print(" eps    Gamma1    Gamma2    flag")
for r in rows:
    print(f" {r.value:4.2f}  {r.gamma1:8.5f}  {r.gamma2:8.5f}  {r.flag}")

eps = np.array([r.value for r in rows])
g1 = np.array([r.gamma1 for r in rows])
g2 = np.array([r.gamma2 for r in rows])

fig, ax = plt.subplots(figsize=(6, 5))
ax.loglog(eps, g1, "o-", label=r"$\Gamma_1$")
ax.loglog(eps, g2, "s-", label=r"$\Gamma_2$")
grid = np.geomspace(0.05, 0.6, 50)
ax.loglog(grid, 0.57 * grid ** 2, "k--", label=r"$0.57\,\epsilon^2$")
grid = np.geomspace(1.0, 3.5, 50)
ax.loglog(grid, 2.7 * template.delta ** 2 / grid ** 2, "k:",
          label=r"$2.7\,\delta^2/\epsilon^2$")
ax.set_xlabel(r"$\epsilon = \epsilon_c/\hbar$")
ax.set_ylabel("rate per kick")
ax.legend()

os.makedirs("demos/output", exist_ok=True)
fig.tight_layout()
fig.savefig("demos/output/02_rate_scaling_sweep.png", dpi=150)
print("wrote demos/output/02_rate_scaling_sweep.png")
