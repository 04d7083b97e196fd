"""Reading the qubit off the detector's phase space.

Strong coupling (eps_c = 0.8 at K = 4.5): the packet sits on a fixed
point that stays stable for spin down (K_eff = 3.8) but turns unstable
for spin up (K_eff = 5.2), so after 20 kicks the conditional Husimi
distributions look completely different and <p^2> separates the two spin
preparations.

Weak coupling (eps_c << 1 at K = 8): the conditional distributions still
differ microscopically (chaotic hypersensitivity), but a coarse-grained
box integral W_D over many Planck cells cannot tell them apart.
"""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qkr_detector import (SimParams, conditional_component, evolve, husimi,
                          iterate_states, phase_space_participation,
                          wd_series)

os.makedirs("demos/output", exist_ok=True)

# --- strong coupling at K = 4.5: stable vs unstable conditional motion
n = 512
strong = SimParams(K=4.5, epsilon_c=0.8, delta=0.1, hbar=2 * np.pi / n,
                   n_levels=n, t_max=20)
state = None
for _, s in iterate_states(strong, (1 / np.sqrt(2), 1 / np.sqrt(2))):
    state = s

fig, axes = plt.subplots(1, 2, figsize=(9, 4))
for ax, spin, label in ((axes[0], 0, "spin up (K_eff = 5.2)"),
                        (axes[1], 1, "spin down (K_eff = 3.8)")):
    h = husimi(conditional_component(state, spin), (128, 128), strong)
    print(f"{label}: phase-space participation = "
          f"{phase_space_participation(h):.2f}")
    ax.imshow(h.values.T, origin="lower", extent=(0, 2 * np.pi, -np.pi, np.pi),
              aspect="auto", cmap="viridis")
    ax.set_title(label)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("p")
fig.tight_layout()
fig.savefig("demos/output/06a_husimi_strong_coupling.png", dpi=150)
print("wrote demos/output/06a_husimi_strong_coupling.png")

# --- the same contrast in a directly measurable number: <p^2>
up = evolve(strong, (1.0, 0.0))
down = evolve(strong, (0.0, 1.0))
print(f"<p^2> at t=20: up = {up.p2[20]:.3f}, down = {down.p2[20]:.3f}, "
      f"ratio = {up.p2[20] / down.p2[20]:.1f}")

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(up.t, up.p2, label="prepared spin up")
ax.plot(down.t, down.p2, "--", label="prepared spin down")
ax.set_xlabel("t (kicks)")
ax.set_ylabel(r"$\langle p^2 \rangle$")
ax.legend()
fig.tight_layout()
fig.savefig("demos/output/06b_p2_readout.png", dpi=150)
print("wrote demos/output/06b_p2_readout.png")

# --- weak coupling at K = 8: coarse graining hides the spin
fig, ax = plt.subplots(figsize=(6.5, 5))
for offset, (eps, delta) in zip((2.0, 1.0, 0.0),
                                ((0.4, 0.0), (0.2, 0.2), (0.4, 0.2))):
    weak = SimParams.for_levels(512, K=8.0, epsilon=eps, delta=delta,
                                t_max=20)
    t, wd_up, wd_down = wd_series(weak, (1 / np.sqrt(2), 1 / np.sqrt(2)),
                                  box_side=0.253)
    print(f"eps={eps}, delta={delta}: max |W_up - W_down| = "
          f"{np.max(np.abs(wd_up - wd_down)):.4f}")
    ax.plot(t, wd_up + offset, "r--")
    ax.plot(t, wd_down + offset, "k-",
            label=rf"$\epsilon={eps},\ \delta={delta}$ (+{offset:.0f})")
ax.set_xlabel("t (kicks)")
ax.set_ylabel(r"$W_D$ (offset for clarity)")
ax.legend()
fig.tight_layout()
fig.savefig("demos/output/06c_wd_weak_coupling.png", dpi=150)
print("wrote demos/output/06c_wd_weak_coupling.png")
