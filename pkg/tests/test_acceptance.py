"""Acceptance gate: every shipped claim at its stated tolerance.

Each criterion is one test, so a verbose run prints one pass/fail line per
criterion.  Tolerances are the contract values, not tuned-down copies.
"""
import json
import math
import time

import numpy as np
import pytest

from packetlab.core import (
    Grid,
    PacketParams,
    Space,
    SystemSpec,
    quadrature,
)
from packetlab.analytic import (
    acceleration_modulus_sq,
    closed_form_anticorr,
    closed_form_autocorr,
    eval_wavefunction,
    free_modulus_sq,
    moments,
)
from packetlab.numeric import (
    PropagatorConfig,
    autocorr_from_spectrum,
    conjugate_grid,
    expand_in_oscillator_basis,
    overlap,
    propagate,
    to_momentum,
    to_position,
)
from packetlab.analysis import mandelstam_check, saturation_asymptote
from packetlab import cli

FREE = SystemSpec.free()


def _report(criterion, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"acceptance criterion {criterion}: {status} ({detail})")
    assert ok, f"criterion {criterion} failed: {detail}"


def _split_operator_autocorr(system, params, grid, t_max, n_samples, n_steps):
    psi0 = eval_wavefunction(system, params, Space.POSITION, grid, 0.0)
    ref = psi0.samples
    sample_every = n_steps // (n_samples - 1)
    values = np.empty(n_samples, dtype=complex)
    calls = {"n": 0}

    def watch(t, samples):
        i = calls["n"]
        calls["n"] += 1
        if i % sample_every == 0:
            values[i // sample_every] = quadrature(grid, np.conj(samples) * ref)

    propagate(
        psi0,
        system,
        PropagatorConfig.for_horizon(t_max, n_steps),
        constants=params.constants,
        callback=watch,
    )
    return values


def test_criterion_01_free_three_way_agreement():
    # analytic closed form vs quadrature overlap (both spaces) vs propagation
    started = time.perf_counter()
    grid_x = Grid(-60.0, 60.0, 4096, space=Space.POSITION, periodic=True)
    grid_p = conjugate_grid(grid_x)
    t_grid = np.linspace(0.0, 5.0, 51)
    worst = 0.0
    for p0 in (0.0, 1.0, 2.0):
        params = PacketParams(alpha=1.0, p0=p0)
        exact = np.array(
            [closed_form_autocorr(FREE, params, float(t)).A for t in t_grid]
        )
        psi0 = eval_wavefunction(FREE, params, Space.POSITION, grid_x, 0.0)
        phi0 = eval_wavefunction(FREE, params, Space.MOMENTUM, grid_p, 0.0)
        quad_x = np.array(
            [
                overlap(
                    eval_wavefunction(FREE, params, Space.POSITION, grid_x, float(t)),
                    psi0,
                )
                for t in t_grid
            ]
        )
        quad_p = np.array(
            [
                overlap(
                    eval_wavefunction(FREE, params, Space.MOMENTUM, grid_p, float(t)),
                    phi0,
                )
                for t in t_grid
            ]
        )
        split = _split_operator_autocorr(FREE, params, grid_x, 5.0, 51, 500)
        worst = max(
            worst,
            float(np.max(np.abs(quad_x - exact))),
            float(np.max(np.abs(quad_p - exact))),
            float(np.max(np.abs(split - exact))),
        )
    elapsed = time.perf_counter() - started
    _report(
        1,
        worst < 1e-6 and elapsed < 10.0,
        f"max |dA| = {worst:.3e} (tol 1e-06), runtime {elapsed:.2f}s (limit 10s)",
    )


def test_criterion_02_saturation_constant():
    worst = 0.0
    for p0 in (1.0, 2.0):
        params = PacketParams(alpha=1.0, p0=p0)
        t = 1e4 * params.t0
        tau = t / (2.0 * params.t0)
        scaled = closed_form_autocorr(FREE, params, t).modulus_sq * tau
        expected = saturation_asymptote(FREE, params)
        worst = max(worst, abs(scaled / expected - 1.0))
    _report(2, worst < 1e-3, f"max relative deviation {worst:.3e} (tol 1e-03)")


def test_criterion_03_energy_spread_bound_randomized():
    rng = np.random.default_rng(20260814)
    worst_margin = 0.0
    worst_curvature = 0.0
    for _ in range(20):
        params = PacketParams(
            alpha=float(rng.uniform(0.5, 2.0)),
            p0=float(rng.uniform(-3.0, 3.0)),
        )
        report = mandelstam_check(FREE, params)
        worst_margin = min(worst_margin, report.min_margin)
        worst_curvature = max(worst_curvature, abs(report.curvature_ratio - 1.0))
    _report(
        3,
        worst_margin >= -1e-10 and worst_curvature < 1e-4,
        f"min margin {worst_margin:.3e} (floor -1e-10), "
        f"curvature mismatch {worst_curvature:.3e} (tol 1e-04)",
    )


def test_criterion_04_substitution_identity():
    worst_sub = 0.0
    worst_limit = 0.0
    for alpha, p0, force in ((1.0, 1.0, 1.0), (0.8, -1.5, 2.0), (1.2, 0.0, 0.7)):
        params = PacketParams(alpha=alpha, p0=p0)
        accelerated = SystemSpec.uniform_acceleration(force)
        for t in np.concatenate([np.linspace(0.0, 5.0, 41), [50.0, 400.0]]):
            t = float(t)
            tau = t / (2.0 * params.t0)
            shifted = p0**2 + (force * params.t0) ** 2 * (1.0 + tau**2)
            lhs = acceleration_modulus_sq(params, force, t)
            rhs = free_modulus_sq(params, t, p0_squared=shifted)
            worst_sub = max(worst_sub, abs(lhs - rhs))
        zero_force = SystemSpec.uniform_acceleration(0.0)
        for t in np.linspace(0.0, 5.0, 21):
            t = float(t)
            delta = abs(
                closed_form_autocorr(zero_force, params, t).A
                - closed_form_autocorr(FREE, params, t).A
            )
            worst_limit = max(worst_limit, delta)
    _report(
        4,
        worst_sub < 1e-14 and worst_limit < 1e-12,
        f"substitution gap {worst_sub:.3e} (tol 1e-14), "
        f"zero-force gap {worst_limit:.3e} (tol 1e-12)",
    )


def test_criterion_05_return_time_suppression():
    params = PacketParams(alpha=1.0, p0=-1.0)
    system = SystemSpec.uniform_acceleration(1.0)
    t_ret = 2.0 * abs(params.p0) / system.force
    grid = Grid(-40.0, 40.0, 2048, space=Space.POSITION, periodic=True)
    psi0 = eval_wavefunction(system, params, Space.POSITION, grid, 0.0)
    psi_ret = eval_wavefunction(system, params, Space.POSITION, grid, t_ret)
    measured = abs(overlap(psi_ret, psi0))
    exact = abs(closed_form_autocorr(system, params, t_ret).A)
    density_overlap = float(
        np.real(quadrature(grid, np.abs(np.conj(psi_ret.samples) * psi0.samples)))
    )
    ratio = density_overlap / exact
    _report(
        5,
        abs(measured - exact) < 1e-6 and ratio > math.e,
        f"|A| gap {abs(measured - exact):.3e} (tol 1e-06), "
        f"density/|A| ratio {ratio:.2f} (must exceed e = {math.e:.2f})",
    )


def test_criterion_06_oscillator_natural_width_revivals():
    omega = 1.0
    system = SystemSpec.harmonic(omega)
    params = PacketParams(alpha=1.0, x0=1.0, p0=0.5)
    period = 2.0 * math.pi / omega
    worst_revival = max(
        abs(closed_form_autocorr(system, params, k * period).modulus_sq - 1.0)
        for k in (1, 2, 3)
    )
    expected_min = math.exp(-2.0 * (params.x0**2 + params.p0**2))
    at_half = closed_form_autocorr(system, params, 0.5 * period).modulus_sq
    dense = np.linspace(0.0, period, 2001)
    dense_min = min(
        closed_form_autocorr(system, params, float(t)).modulus_sq for t in dense
    )
    min_ok = abs(at_half - expected_min) < 1e-10 and dense_min >= at_half - 1e-12

    grid = Grid(-20.0, 20.0, 2001, space=Space.POSITION)
    psi0 = eval_wavefunction(system, params, Space.POSITION, grid, 0.0)
    expansion = expand_in_oscillator_basis(psi0, omega, 40)
    spectral_gap = max(
        abs(
            autocorr_from_spectrum(expansion, float(t))
            - closed_form_autocorr(system, params, float(t)).A
        )
        for t in np.linspace(0.0, 3.0 * period, 301)
    )
    _report(
        6,
        worst_revival < 1e-10 and min_ok and spectral_gap < 1e-8,
        f"revival gap {worst_revival:.3e} (tol 1e-10), "
        f"period minimum gap {abs(at_half - expected_min):.3e} (tol 1e-10), "
        f"spectral route gap {spectral_gap:.3e} (tol 1e-08)",
    )


def test_criterion_07_oscillator_squeezed_symmetry():
    omega = 1.0
    system = SystemSpec.harmonic(omega)
    params = PacketParams(alpha=2.0)
    partner = PacketParams(alpha=0.5)  # beta' = beta0^2 / beta swaps r -> 1/r
    t_grid = np.linspace(0.0, 4.0 * math.pi / omega, 401)
    swap_gap = max(
        abs(
            closed_form_autocorr(system, params, float(t)).A
            - closed_form_autocorr(system, partner, float(t)).A
        )
        for t in t_grid
    )
    half = math.pi / omega
    half_gap = abs(abs(closed_form_autocorr(system, params, half).A) - 1.0)
    natural = PacketParams(alpha=1.0)
    phase_gap = max(
        abs(
            closed_form_autocorr(system, natural, float(t)).A
            - np.exp(0.5j * omega * float(t))
        )
        for t in t_grid
    )
    _report(
        7,
        swap_gap < 1e-14 and half_gap < 1e-10 and phase_gap < 1e-12,
        f"r to 1/r gap {swap_gap:.3e} (tol 1e-14), "
        f"half-period modulus gap {half_gap:.3e} (tol 1e-10), "
        f"natural-width phase gap {phase_gap:.3e} (tol 1e-12)",
    )


def test_criterion_08_parity_relations_under_propagation():
    omega = 1.0
    system = SystemSpec.harmonic(omega)
    params = PacketParams(alpha=1.0, x0=1.0, p0=0.5)
    period = 2.0 * math.pi / omega
    grid = Grid(-30.0, 30.0, 1024, space=Space.POSITION, periodic=True)
    psi0 = eval_wavefunction(system, params, Space.POSITION, grid, 0.0)
    n_steps = 32000
    snapshots = {}
    calls = {"n": 0}

    def watch(t, samples):
        i = calls["n"]
        calls["n"] += 1
        if i == n_steps // 2 or i == n_steps:
            snapshots[i] = samples.copy()

    propagate(
        psi0, system, PropagatorConfig.for_horizon(period, n_steps), callback=watch
    )
    full_gap = float(np.max(np.abs(snapshots[n_steps] + psi0.samples)))
    mirrored = np.roll(snapshots[n_steps // 2][::-1], 1)
    half_gap = float(np.max(np.abs(mirrored + 1j * psi0.samples)))
    anti = abs(abs(closed_form_anticorr(system, params, 0.5 * period)) - 1.0)
    _report(
        8,
        full_gap < 1e-6 and half_gap < 1e-6 and anti < 1e-10,
        f"full-period parity gap {full_gap:.3e} (tol 1e-06), "
        f"half-period parity gap {half_gap:.3e} (tol 1e-06), "
        f"mirrored-overlap modulus gap {anti:.3e} (tol 1e-10)",
    )


def test_criterion_09_inverted_oscillator_decay_and_spreading():
    omega = 1.0
    system = SystemSpec.inverted(omega)
    params = PacketParams(alpha=1.0, p0=1.0)
    t_decay = 30.0 / omega
    scaled = 0.5 * closed_form_autocorr(system, params, t_decay).modulus_sq * math.exp(
        omega * t_decay
    )
    expected = math.exp(
        -params.p0**2 / (params.constants.mass * omega * params.constants.hbar)
    )
    decay_gap = abs(scaled / expected - 1.0)

    horizon = 2.2
    grid = Grid(-60.0, 60.0, 4096, space=Space.POSITION, periodic=True)
    psi0 = eval_wavefunction(system, params, Space.POSITION, grid, 0.0)
    final = propagate(psi0, system, PropagatorConfig.for_horizon(horizon, 40000))
    x = grid.points
    density = final.density()
    norm = float(np.real(quadrature(grid, density)))
    mean = float(np.real(quadrature(grid, x * density))) / norm
    spread = math.sqrt(float(np.real(quadrature(grid, (x - mean) ** 2 * density))) / norm)
    expected_spread = moments(system, params, horizon).spread_x
    spread_gap = abs(spread - expected_spread)
    _report(
        9,
        decay_gap < 1e-3 and spread_gap < 1e-8,
        f"scaled decay deviation {decay_gap:.3e} (tol 1e-03), "
        f"spread gap {spread_gap:.3e} (tol 1e-08)",
    )


def test_criterion_10_infrastructure(tmp_path):
    # transform round trip
    grid = Grid(-40.0, 40.0, 2048, space=Space.POSITION, periodic=True)
    params = PacketParams(alpha=0.9, x0=1.5, p0=-2.0)
    psi = eval_wavefunction(FREE, params, Space.POSITION, grid, 0.7)
    back = to_position(to_momentum(psi))
    round_trip = float(np.max(np.abs(back.samples - psi.samples)))

    # eigenbasis completeness and parity selection for an even packet
    sho = SystemSpec.harmonic(1.0)
    closed_grid = Grid(-20.0, 20.0, 2001, space=Space.POSITION)
    even = eval_wavefunction(sho, PacketParams(alpha=2.0), Space.POSITION, closed_grid, 0.0)
    expansion = expand_in_oscillator_basis(even, 1.0, 60)
    weight_gap = abs(float(expansion.weights.sum()) - 1.0)
    odd_peak = float(np.max(np.abs(expansion.coefficients[1::2])))

    # overlap-distance identity on the grid
    coherent = PacketParams(alpha=1.0, x0=1.0, p0=0.5)
    psi0 = eval_wavefunction(sho, coherent, Space.POSITION, closed_grid, 0.0)
    psi_t = eval_wavefunction(sho, coherent, Space.POSITION, closed_grid, 0.9)
    distance_sq = float(
        np.real(quadrature(closed_grid, np.abs(psi_t.samples - psi0.samples) ** 2))
    )
    identity_gap = abs(distance_sq - 2.0 * (1.0 - overlap(psi_t, psi0).real))

    # every preset passes; representative artifacts are byte-stable
    preset_codes = {}
    for name in sorted(cli._presets()):
        preset_codes[name] = cli.main(
            ["--quiet", "preset", name, "--out", str(tmp_path / "all")]
        )
    rerun_ok = True
    for name in ("free-saturation", "accel-return"):
        for out in ("x", "y"):
            assert cli.main(["--quiet", "preset", name, "--out", str(tmp_path / out)]) == 0
        for suffix in ("analytic.csv", "argand.svg"):
            a = (tmp_path / "x" / f"{name}.{suffix}").read_bytes()
            b = (tmp_path / "y" / f"{name}.{suffix}").read_bytes()
            rerun_ok = rerun_ok and a == b
        ra = json.loads((tmp_path / "x" / f"{name}.report.json").read_text())
        rb = json.loads((tmp_path / "y" / f"{name}.report.json").read_text())
        ra.pop("runtimes")
        rb.pop("runtimes")
        rerun_ok = rerun_ok and ra == rb

    presets_ok = all(code == 0 for code in preset_codes.values())
    _report(
        10,
        round_trip < 1e-12
        and weight_gap < 1e-8
        and odd_peak < 1e-12
        and identity_gap < 1e-10
        and presets_ok
        and rerun_ok,
        f"round trip {round_trip:.3e} (tol 1e-12), "
        f"weight sum gap {weight_gap:.3e} (tol 1e-08), "
        f"odd-level peak {odd_peak:.3e} (tol 1e-12), "
        f"distance identity gap {identity_gap:.3e} (tol 1e-10), "
        f"presets {'all pass' if presets_ok else preset_codes}, "
        f"artifacts {'byte-stable' if rerun_ok else 'UNSTABLE'}",
    )
