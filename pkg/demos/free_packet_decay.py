"""
Free Gaussian packet: autocorrelation decay and the speed-limit bound
=====================================================================

A minimum-uncertainty packet released with mean momentum p0 loses overlap
with its initial state for two reasons: the center runs away and the
envelope spreads.  Both effects live in the closed-form |A(t)|^2.  At late
times only the spreading survives and t*|A(t)|^2 approaches a constant
fixed by the momentum width.  At early times 1-|A|^2 grows no faster than
the energy-spread bound allows.

Run:  python demos/free_packet_decay.py
Writes free_packet_decay.png next to this script.
"""
import pathlib

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from packetlab import (
    PacketParams,
    SystemSpec,
    closed_form_autocorr,
    mandelstam_check,
    saturation_asymptote,
)

system = SystemSpec.free()
params = PacketParams(alpha=1.0, p0=1.0)
t0 = params.t0

# decay over a few natural times
t = np.linspace(0.0, 12.0 * t0, 600)
abs2 = np.array([closed_form_autocorr(system, params, float(u)).modulus_sq for u in t])

# late-time saturation of the scaled modulus
t_late = np.geomspace(10.0 * t0, 1e4 * t0, 200)
scaled = np.array(
    [
        closed_form_autocorr(system, params, float(u)).modulus_sq * u / (2.0 * t0)
        for u in t_late
    ]
)
plateau = saturation_asymptote(system, params)
print(f"saturation constant exp(-2 (alpha p0)^2) = {plateau:.6f}")
print(f"scaled modulus at t = 1e4 t0             = {scaled[-1]:.6f}")

# short-time bound from the energy spread
report = mandelstam_check(system, params)
print(f"validity horizon pi hbar / (2 dH) = {report.valid_horizon:.4f}")
print(f"worst bound margin over the horizon = {report.min_margin:.2e}")

fig, axes = plt.subplots(1, 3, figsize=(12.5, 3.6))

axes[0].plot(t / t0, abs2, lw=1.5)
axes[0].set_xlabel("t / t0")
axes[0].set_ylabel("|A(t)|^2")
axes[0].set_title("overlap decay")

axes[1].semilogx(t_late / t0, scaled, lw=1.5, label="t/(2 t0) * |A|^2")
axes[1].axhline(plateau, color="k", ls="--", lw=1, label="saturation constant")
axes[1].set_xlabel("t / t0")
axes[1].legend(frameon=False)
axes[1].set_title("late-time saturation")

axes[2].plot(report.t_grid, report.modulus_sq, lw=1.5, label="|A|^2")
axes[2].plot(report.t_grid, report.bound, "k--", lw=1, label="cos^2 bound")
axes[2].set_xlabel("t")
axes[2].legend(frameon=False)
axes[2].set_title("speed-limit bound")

fig.tight_layout()
out = pathlib.Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=130)
print(f"wrote {out}")
