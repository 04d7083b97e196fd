"""Dephasing at the classical rate of chaos.

When the coupling is classically strong (eps_c ~ 1) the qubit coherence
is proportional to the overlap of two detector states evolved with kick
strengths K + eps_c and K - eps_c.  Starting from a packet on the fixed
point that is stable for one branch and unstable for the other, that
overlap collapses exponentially at the classical Lyapunov rate -- the
same number the tangent map of the standard map gives.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qkr_detector import SimParams, fidelity_series, lyapunov

lam = lyapunov(4.5, 100, 10_000, seed=1)
print(f"classical Lyapunov exponent at K_eff = 4.5: {lam:.3f} "
      f"(ln(K/2) = {np.log(2.25):.3f})")

fig, ax = plt.subplots(figsize=(6.5, 5))
t = np.arange(21)
for n in (2 ** 9, 2 ** 11, 2 ** 13, 2 ** 15):
    params = SimParams(K=4.5, epsilon_c=0.8, delta=0.01,
                       hbar=2 * np.pi / n, n_levels=n, t_max=20)
    f = np.abs(fidelity_series(params, (np.pi, 0.0), 20))
    floor = 1 / np.sqrt(n)
    print(f"N_d = {n:6d}: |f| reaches its 1/sqrt(N) floor {floor:.4f} "
          f"around t = {int(np.argmax(f < 3 * floor)) or 20}")
    ax.semilogy(t, f, "o-", ms=3, lw=0.8, label=rf"$N_d = {n}$")

ax.semilogy(t[:9], np.exp(-lam * t[:9]), "k--",
            label=rf"$e^{{-\lambda t}},\ \lambda = {lam:.2f}$")
ax.set_xlabel("t (kicks)")
ax.set_ylabel("|f(t)|")
ax.set_ylim(1e-3, 1.5)
ax.legend()

os.makedirs("demos/output", exist_ok=True)
fig.tight_layout()
fig.savefig("demos/output/05_lyapunov_echo.png", dpi=150)
print("wrote demos/output/05_lyapunov_echo.png")
