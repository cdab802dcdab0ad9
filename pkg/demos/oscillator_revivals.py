"""
Harmonic oscillator: exact revivals, pulsation and the half-period mirror
=========================================================================

Two regimes of the same closed form.  A displaced packet at the natural
width (case I) traces a circle-like loop in the Argand plane and revives
exactly every period; its minimum overlap sits at half period and is set
by the displacement alone.  A centered packet with the wrong width
(case II) pulsates at twice the frequency and returns to unit modulus
already at T/2.  The mirrored overlap reaches modulus one at the half
period, which is the parity relation psi(-x, T/2) = -i psi(x, 0).
"""
import math
import pathlib

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from packetlab import (
    PacketParams,
    SystemSpec,
    closed_form_anticorr,
    closed_form_autocorr,
)

omega = 1.0
system = SystemSpec.harmonic(omega)
period = 2.0 * math.pi / omega
t = np.linspace(0.0, 2.0 * period, 801)

# case I: natural width, displaced in phase space
coherent = PacketParams(alpha=1.0, x0=1.0, p0=0.5)
A_coh = np.array([closed_form_autocorr(system, coherent, float(u)).A for u in t])
floor = math.exp(-2.0 * (coherent.x0**2 + coherent.p0**2))
print(f"case I |A(T)|^2  = {abs(A_coh[len(t) // 2])**2:.12f}")
print(f"case I minimum   = {min(abs(A_coh) ** 2):.6f}  (closed form {floor:.6f})")

# case II: centered but squeezed by a factor 2 in width
squeezed = PacketParams(alpha=2.0)
A_sq = np.array([closed_form_autocorr(system, squeezed, float(u)).A for u in t])
print(f"case II |A(T/2)| = {abs(A_sq[len(t) // 4]):.12f}")

# mirrored overlap peaks at the half period
A_bar = np.array([closed_form_anticorr(system, coherent, float(u)) for u in t])
print(f"case I |Abar(T/2)| = {abs(A_bar[len(t) // 4]):.12f}")

fig, axes = plt.subplots(1, 3, figsize=(12.5, 3.8))

axes[0].plot(t / period, np.abs(A_coh) ** 2, lw=1.5, label="case I")
axes[0].plot(t / period, np.abs(A_sq) ** 2, lw=1.5, label="case II")
axes[0].axhline(floor, color="k", lw=0.8, ls=":")
axes[0].set_xlabel("t / T")
axes[0].set_ylabel("|A|^2")
axes[0].legend(frameon=False)
axes[0].set_title("revival vs pulsation")

axes[1].plot(A_coh.real, A_coh.imag, lw=1.0)
axes[1].plot(A_sq.real, A_sq.imag, lw=1.0)
circle = np.exp(1j * np.linspace(0.0, 2.0 * math.pi, 200))
axes[1].plot(circle.real, circle.imag, "k:", lw=0.7)
axes[1].set_aspect("equal")
axes[1].set_xlabel("Re A")
axes[1].set_ylabel("Im A")
axes[1].set_title("Argand traces")

axes[2].plot(t / period, np.abs(A_coh), lw=1.5, label="|A|")
axes[2].plot(t / period, np.abs(A_bar), lw=1.5, ls="--", label="|Abar|")
axes[2].set_xlabel("t / T")
axes[2].legend(frameon=False)
axes[2].set_title("direct vs mirrored overlap")

fig.tight_layout()
out = pathlib.Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=130)
print(f"wrote {out}")
