"""
Inverted oscillator: exponential escape
=======================================

On the potential hill V = -m w^2 x^2 / 2 every packet is unstable.  The
width grows like e^{w t}, so |A(t)|^2 decays exponentially with a known
prefactor: for a natural-width packet started at the top,
e^{w t} |A|^2 / 2 tends to exp(-p0^2 / (m w hbar)).  A split-operator run
on a finite grid tracks the closed form until the packet reaches the
edge, which is exactly the failure mode the propagator guards against.
"""
import math
import pathlib

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from packetlab import (
    Grid,
    GridTruncationError,
    PacketParams,
    PropagatorConfig,
    Space,
    SystemSpec,
    closed_form_autocorr,
    eval_wavefunction,
    moments,
    propagate,
    quadrature,
)

omega = 1.0
system = SystemSpec.inverted(omega)
params = PacketParams(alpha=1.0, p0=1.0)

t = np.linspace(0.0, 30.0 / omega, 400)
abs2 = np.array([closed_form_autocorr(system, params, float(u)).modulus_sq for u in t])
limit = math.exp(-params.p0**2 / (params.constants.mass * omega * params.constants.hbar))
scaled_tail = abs2[-1] * math.exp(omega * t[-1]) / 2.0
print(f"asymptotic constant exp(-p0^2 / (m w hbar)) = {limit:.6f}")
print(f"e^wt |A|^2 / 2 at w t = 30                  = {scaled_tail:.6f}")

# numerical spread vs the closed-form width until the grid gives out
grid = Grid(-60.0, 60.0, 4096, space=Space.POSITION, periodic=True)
psi0 = eval_wavefunction(system, params, Space.POSITION, grid, 0.0)
horizon = 2.2
times, spreads = [], []

def watch(u, samples):
    if len(times) % 800 == 0 or u == horizon:
        x = grid.points
        density = np.abs(samples) ** 2
        n = float(np.real(quadrature(grid, density)))
        mean = float(np.real(quadrature(grid, x * density))) / n
        spreads.append(
            math.sqrt(float(np.real(quadrature(grid, (x - mean) ** 2 * density))) / n)
        )
    times.append(u)

try:
    propagate(psi0, system, PropagatorConfig.for_horizon(horizon, 40000), callback=watch)
except GridTruncationError as err:
    print(f"grid gave out early: edge fraction {err.edge_fraction:.1e}")

sampled_t = np.asarray(times)[::800]
expected = [moments(system, params, float(u)).spread_x for u in sampled_t]
gap = max(abs(a - b) for a, b in zip(spreads, expected))
print(f"max spread gap over the run = {gap:.2e}")

fig, axes = plt.subplots(1, 2, figsize=(9.5, 3.8))
axes[0].semilogy(t * omega, abs2, lw=1.5, label="|A(t)|^2")
axes[0].semilogy(t * omega, 2.0 * limit * np.exp(-omega * t), "k--", lw=1, label="asymptote")
axes[0].set_xlabel("w t")
axes[0].legend(frameon=False)
axes[0].set_title("exponential overlap decay")

axes[1].plot(sampled_t, spreads, "o", ms=4, label="split-operator")
axes[1].plot(sampled_t, expected, lw=1.2, label="closed form")
axes[1].set_yscale("log")
axes[1].set_xlabel("t")
axes[1].set_ylabel("spread of x")
axes[1].legend(frameon=False)
axes[1].set_title("runaway spreading")

fig.tight_layout()
out = pathlib.Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=130)
print(f"wrote {out}")
