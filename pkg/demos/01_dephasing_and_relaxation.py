"""Decoherence of a qubit monitored by a chaotic kicked rotator.

A spin-1/2 starts in (|0> + 2|1>)/sqrt(5) and the detector in a minimum
uncertainty packet.  The rotator is deep in its chaotic regime (K = 8),
so the conditional kick strengths K +- eps_c scramble the two detector
branches and the qubit coherence |rho01| decays exponentially down to a
finite-size fluctuation floor, while rho11 relaxes to 1/2 through damped
Rabi oscillations.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qkr_detector import SimParams, evolve, fit_damped_sine, fit_exp_decay

params = SimParams.for_levels(2 ** 13, K=8.0, epsilon=0.3, delta=0.2,
                              t_max=400)
print(f"N_d = {params.n_levels}, hbar = {params.hbar:.3e}, "
      f"eps = {params.epsilon:.2f}")

traj = evolve(params, (1 / np.sqrt(5), 2 / np.sqrt(5)))

coherence = np.abs(traj.rho01)
fit2 = fit_exp_decay(coherence)
fit1 = fit_damped_sine(traj.rho11, freq_hint=2 * params.delta)
print(f"dephasing:  Gamma2 = {fit2.rate:.4f}  (T2 = {1/fit2.rate:.1f} kicks)")
print(f"relaxation: Gamma1 = {fit1.rate:.4f}  (T1 = {1/fit1.rate:.1f} kicks),"
      f" Rabi frequency b = {fit1.frequency:.4f} ~ 2*delta = {2*params.delta}")
print(f"purity: 1.0 -> {traj.purity[-1]:.3f} (1/2 = fully decohered)")

t = traj.t
fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7))
ax1.semilogy(t, coherence, lw=0.7, label=r"$|\rho_{01}(t)|$")
ax1.semilogy(t, fit2.amplitude * np.exp(-fit2.rate * t), "k--",
             label=rf"fit: $\Gamma_2 = {fit2.rate:.3f}$")
ax1.axhline(1 / np.sqrt(2 * params.n_levels), color="gray", ls=":",
            label=r"$1/\sqrt{N}$ floor")
ax1.set_xlabel("t (kicks)")
ax1.set_ylabel(r"$|\rho_{01}|$")
ax1.legend()

model = 0.5 + fit1.amplitude * np.sin(fit1.frequency * t + fit1.phase) \
    * np.exp(-fit1.rate * t)
ax2.plot(t, traj.rho11, lw=0.7, label=r"$\rho_{11}(t)$")
ax2.plot(t, model, "k--", lw=1,
         label=rf"fit: $\Gamma_1 = {fit1.rate:.3f},\ b = {fit1.frequency:.3f}$")
ax2.axhline(0.5, color="gray", ls=":")
ax2.set_xlabel("t (kicks)")
ax2.set_ylabel(r"$\rho_{11}$")
ax2.legend()

os.makedirs("demos/output", exist_ok=True)
fig.tight_layout()
fig.savefig("demos/output/01_dephasing_and_relaxation.png", dpi=150)
print("wrote demos/output/01_dephasing_and_relaxation.png")
