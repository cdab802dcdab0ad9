"""Scenario-driven command line front end.

Reads a declarative JSON config describing packet/system scenarios, runs the
requested analytic, split-operator and spectral pipelines on a shared time
grid, emits CSV series, an Argand SVG and a JSON comparison report, and exits
0 only when every configured check passes.

Exit codes: 0 all checks pass, 1 comparison failure, 2 config error,
3 runtime or physics error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .core import (
    ConfigurationError,
    Grid,
    NoClosedFormError,
    PacketLabError,
    PacketParams,
    PhysicalConstants,
    Space,
    SystemKind,
    SystemSpec,
    quadrature,
)
from .analytic import (
    closed_form_anticorr,
    closed_form_autocorr,
    eval_wavefunction,
    moments,
)
from .numeric import (
    PropagatorConfig,
    anticorr_from_spectrum,
    autocorr_from_spectrum,
    expand_in_oscillator_basis,
    overlap,
    propagate,
)
from .analysis import (
    AutocorrSeries,
    assemble_series,
    mandelstam_check,
    saturation_asymptote,
)

SCHEMA_VERSION = 1

METHODS = ("analytic", "split_operator", "spectral")
OUTPUTS = ("series_csv", "argand_svg", "report_json")

_AGREEMENT_TOL = {"split_operator": 1e-6, "spectral": 1e-8}
_CHECK_TOL = {
    "saturation": 1e-3,
    "bound_margin": 1e-10,
    "bound_curvature": 1e-4,
    "periodicity": 1e-10,
    "revival_min": 1e-10,
    "half_period_unity": 1e-10,
    "pulsation_symmetry": 1e-14,
    "anticorr_unity": 1e-10,
    "parity_full_period": 1e-6,
    "parity_half_period": 1e-6,
    "return_amplitude": 1e-6,
    "inverse_density_contrast": 1.0 / math.e,
    "spread_agreement": 1e-8,
}


class ConfigError(Exception):
    """Schema or validation failure; the message carries the field path."""


def _fail(path, reason):
    raise ConfigError(f"{path}: {reason}")


def _get(mapping, key, path, kind, default=None, required=False):
    if key not in mapping:
        if required:
            _fail(f"{path}.{key}", "required field is missing")
        return default
    value = mapping[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            _fail(f"{path}.{key}", "expected a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            _fail(f"{path}.{key}", "expected an integer")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            _fail(f"{path}.{key}", "expected a boolean")
        return value
    if kind is str:
        if not isinstance(value, str):
            _fail(f"{path}.{key}", "expected a string")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            _fail(f"{path}.{key}", "expected an object")
        return value
    if kind is list:
        if not isinstance(value, list):
            _fail(f"{path}.{key}", "expected an array")
        return value
    raise AssertionError(kind)


def _reject_unknown(mapping, allowed, path):
    for key in mapping:
        if key not in allowed:
            _fail(f"{path}.{key}", "unknown field")


def _default_timescale(system, params):
    if system.kind in (SystemKind.FREE, SystemKind.UNIFORM_ACCELERATION):
        return params.t0
    if system.kind is SystemKind.HARMONIC:
        return 2.0 * math.pi / system.omega
    return 1.0 / system.omega


def _build_system(resolved, path):
    kind = resolved["kind"]
    try:
        if kind == "free":
            return SystemSpec.free()
        if kind == "uniform_acceleration":
            return SystemSpec.uniform_acceleration(resolved["force"])
        if kind == "harmonic":
            return SystemSpec.harmonic(resolved["omega"])
        return SystemSpec.inverted(resolved["omega"])
    except ConfigurationError as exc:
        _fail(path, str(exc))


def _build_params(resolved, path):
    try:
        constants = PhysicalConstants(hbar=resolved["hbar"], mass=resolved["mass"])
        return PacketParams(
            alpha=resolved["alpha"],
            x0=resolved["x0"],
            p0=resolved["p0"],
            constants=constants,
        )
    except ConfigurationError as exc:
        _fail(path, str(exc))


def _resolve_system(raw, path):
    kind = _get(raw, "kind", path, str, required=True)
    if kind not in ("free", "uniform_acceleration", "harmonic", "inverted"):
        _fail(f"{path}.kind", f"unknown system kind {kind!r}")
    resolved = {"kind": kind}
    if kind == "uniform_acceleration":
        _reject_unknown(raw, {"kind", "force"}, path)
        resolved["force"] = _get(raw, "force", path, float, default=0.0)
    elif kind in ("harmonic", "inverted"):
        _reject_unknown(raw, {"kind", "omega"}, path)
        resolved["omega"] = _get(raw, "omega", path, float, required=True)
    else:
        _reject_unknown(raw, {"kind"}, path)
    return resolved


def _resolve_params(raw, path):
    _reject_unknown(raw, {"alpha", "x0", "p0", "hbar", "mass"}, path)
    return {
        "alpha": _get(raw, "alpha", path, float, required=True),
        "x0": _get(raw, "x0", path, float, default=0.0),
        "p0": _get(raw, "p0", path, float, default=0.0),
        "hbar": _get(raw, "hbar", path, float, default=1.0),
        "mass": _get(raw, "mass", path, float, default=1.0),
    }


def _resolve_checks(raw_checks, scenario, path, scale):
    resolved = []
    for i, raw in enumerate(raw_checks):
        cpath = f"{path}[{i}]"
        if not isinstance(raw, dict):
            _fail(cpath, "expected an object")
        _reject_unknown(raw, {"kind", "method", "tolerance"}, cpath)
        kind = _get(raw, "kind", cpath, str, required=True)
        if kind == "method_agreement":
            method = _get(raw, "method", cpath, str, required=True)
            if method not in ("split_operator", "spectral"):
                _fail(f"{cpath}.method", "must be a numerical method")
            if method not in scenario["methods"]:
                _fail(f"{cpath}.method", f"{method} not among the scenario methods")
            tolerance = _get(
                raw, "tolerance", cpath, float, default=_AGREEMENT_TOL[method]
            )
            resolved.append(
                {"kind": kind, "method": method, "tolerance": tolerance * scale}
            )
            continue
        if kind not in _CHECK_TOL:
            _fail(f"{cpath}.kind", f"unknown check kind {kind!r}")
        if "method" in raw:
            _fail(f"{cpath}.method", f"{kind} does not take a method")
        tolerance = _get(raw, "tolerance", cpath, float, default=_CHECK_TOL[kind])
        resolved.append({"kind": kind, "tolerance": tolerance * scale})
    return resolved


def _validate_checks(scenario, system, params, path):
    kinds = {c["kind"] for c in scenario["checks"]}
    methods = scenario["methods"]
    omega = system.omega

    def needs_analytic(kind):
        if "analytic" not in methods:
            _fail(path, f"check {kind!r} needs the analytic method")

    for check in scenario["checks"]:
        kind = check["kind"]
        if kind == "method_agreement":
            needs_analytic(kind)
        elif kind == "saturation":
            needs_analytic(kind)
            if system.kind not in (SystemKind.FREE, SystemKind.INVERTED):
                _fail(path, "saturation checks need a free or inverted system")
            try:
                saturation_asymptote(system, params)
            except PacketLabError as exc:
                _fail(path, str(exc))
        elif kind in ("bound_margin", "bound_curvature"):
            needs_analytic(kind)
            if system.kind is not SystemKind.FREE:
                _fail(path, f"{kind} checks need the free particle")
        elif kind in (
            "periodicity",
            "revival_min",
            "half_period_unity",
            "pulsation_symmetry",
        ):
            needs_analytic(kind)
            if system.kind is not SystemKind.HARMONIC:
                _fail(path, f"{kind} checks need the oscillator")
            if kind == "pulsation_symmetry" and (params.x0 or params.p0):
                _fail(path, "pulsation_symmetry needs a centered packet")
        elif kind == "anticorr_unity":
            if not scenario["anticorrelation"]:
                _fail(path, "anticorr_unity needs anticorrelation enabled")
            if "analytic" not in methods:
                if "split_operator" not in methods:
                    _fail(path, "anticorr_unity needs an analytic or grid route")
                if _sample_index(scenario, math.pi / omega) is None:
                    _fail(
                        path,
                        "anticorr_unity without the analytic method needs "
                        "t = half period on the sample grid",
                    )
        elif kind in ("parity_full_period", "parity_half_period"):
            if system.kind is not SystemKind.HARMONIC:
                _fail(path, f"{kind} checks need the oscillator")
            if "split_operator" not in methods:
                _fail(path, f"{kind} checks need the split_operator method")
            span = 2.0 * math.pi / omega
            target = span if kind == "parity_full_period" else 0.5 * span
            if _sample_index(scenario, target) is None:
                _fail(
                    path,
                    f"{kind} needs t = {target:.6g} on the sample grid; "
                    "adjust t_max or n_samples",
                )
        elif kind in ("return_amplitude", "inverse_density_contrast"):
            if system.kind is not SystemKind.UNIFORM_ACCELERATION:
                _fail(path, f"{kind} checks need uniform acceleration")
            if system.force == 0.0 or params.p0 * system.force >= 0.0:
                _fail(path, f"{kind} needs a force opposing the initial momentum")
            if 2.0 * abs(params.p0) / abs(system.force) > scenario["t_max"]:
                _fail(path, f"{kind} needs t_max to reach the return time")
        elif kind == "spread_agreement":
            if "split_operator" not in methods:
                _fail(path, "spread_agreement needs the split_operator method")
    if "periodicity" in kinds or "revival_min" in kinds:
        if scenario["t_max"] < 3.0 * 2.0 * math.pi / omega - 1e-9:
            _fail(path, "periodicity checks sample k = 1..3 periods; raise t_max")


def _sample_index(scenario, target):
    t_max = scenario["t_max"]
    n = scenario["n_samples"]
    if n < 2 or not (0.0 <= target <= t_max * (1.0 + 1e-12)):
        return None
    step = t_max / (n - 1)
    idx = int(round(target / step))
    if idx >= n or abs(idx * step - target) > 1e-9 * max(t_max, 1.0):
        return None
    return idx


def resolve_scenario(raw, path, scale=1.0):
    """Validate one scenario block and fill every default (pure; JSON-able)."""
    if not isinstance(raw, dict):
        _fail(path, "expected an object")
    allowed = {
        "name",
        "system",
        "params",
        "t_max",
        "n_samples",
        "methods",
        "grid",
        "propagator",
        "spectral",
        "anticorrelation",
        "outputs",
        "checks",
    }
    _reject_unknown(raw, allowed, path)

    name = _get(raw, "name", path, str, required=True)
    if not name or not all(c.isalnum() or c in "-_" for c in name):
        _fail(f"{path}.name", "must be non-empty and filesystem-safe ([A-Za-z0-9_-])")

    resolved = {"name": name}
    resolved["system"] = _resolve_system(
        _get(raw, "system", path, dict, required=True), f"{path}.system"
    )
    resolved["params"] = _resolve_params(
        _get(raw, "params", path, dict, required=True), f"{path}.params"
    )

    t_max = _get(raw, "t_max", path, float, required=True)
    n_samples = _get(raw, "n_samples", path, int, default=201)
    if n_samples < 1:
        _fail(f"{path}.n_samples", "must be at least 1")
    if t_max < 0.0 or (t_max == 0.0 and n_samples > 1):
        _fail(f"{path}.t_max", "must be positive (zero only with a single sample)")
    resolved["t_max"] = t_max
    resolved["n_samples"] = n_samples

    methods = _get(raw, "methods", path, list, required=True)
    if not methods:
        _fail(f"{path}.methods", "at least one method is required")
    for i, m in enumerate(methods):
        if m not in METHODS:
            _fail(f"{path}.methods[{i}]", f"unknown method {m!r}")
    if len(set(methods)) != len(methods):
        _fail(f"{path}.methods", "duplicate methods")
    resolved["methods"] = list(methods)

    system = _build_system(resolved["system"], f"{path}.system")
    params = _build_params(resolved["params"], f"{path}.params")

    if "spectral" in methods and system.kind is not SystemKind.HARMONIC:
        _fail(f"{path}.methods", "spectral method is only valid for the oscillator")
    if "split_operator" in methods and n_samples < 2:
        _fail(f"{path}.n_samples", "split_operator needs at least 2 samples")
    if "analytic" in methods:
        try:
            closed_form_autocorr(system, params, 0.0)
        except NoClosedFormError as exc:
            _fail(f"{path}.methods", f"no-closed-form: {exc}")

    grid_raw = _get(raw, "grid", path, dict, default={})
    _reject_unknown(grid_raw, {"half_width", "n_points"}, f"{path}.grid")
    half_width = _get(grid_raw, "half_width", f"{path}.grid", float, default=40.0)
    n_points = _get(grid_raw, "n_points", f"{path}.grid", int, default=2048)
    if half_width <= 0.0:
        _fail(f"{path}.grid.half_width", "must be positive")
    if n_points < 16:
        _fail(f"{path}.grid.n_points", "must be at least 16")
    resolved["grid"] = {"half_width": half_width, "n_points": n_points}

    if "split_operator" in methods:
        prop_raw = _get(raw, "propagator", path, dict, default={})
        _reject_unknown(prop_raw, {"n_steps"}, f"{path}.propagator")
        n_steps = _get(prop_raw, "n_steps", f"{path}.propagator", int, default=None)
        intervals = n_samples - 1
        if n_steps is None:
            dt_target = _default_timescale(system, params) / 2000.0
            per_interval = max(1, math.ceil(t_max / (dt_target * intervals)))
            n_steps = per_interval * intervals
        if n_steps < 1 or n_steps % intervals:
            _fail(
                f"{path}.propagator.n_steps",
                f"must be a positive multiple of n_samples - 1 = {intervals}",
            )
        resolved["propagator"] = {"n_steps": n_steps}
    elif "propagator" in raw:
        _fail(f"{path}.propagator", "only meaningful with the split_operator method")

    if "spectral" in methods:
        spec_raw = _get(raw, "spectral", path, dict, default={})
        _reject_unknown(spec_raw, {"n_max"}, f"{path}.spectral")
        n_max = _get(spec_raw, "n_max", f"{path}.spectral", int, default=64)
        if n_max < 0:
            _fail(f"{path}.spectral.n_max", "must be non-negative")
        resolved["spectral"] = {"n_max": n_max}
    elif "spectral" in raw:
        _fail(f"{path}.spectral", "only meaningful with the spectral method")

    anticorr = _get(raw, "anticorrelation", path, bool, default=False)
    if anticorr:
        if system.kind is not SystemKind.HARMONIC:
            _fail(f"{path}.anticorrelation", "mirrored overlap needs the oscillator")
        if "analytic" in methods:
            try:
                closed_form_anticorr(system, params, 0.0)
            except (NoClosedFormError, ConfigurationError) as exc:
                _fail(f"{path}.anticorrelation", f"no-closed-form: {exc}")
    resolved["anticorrelation"] = anticorr

    outputs = _get(raw, "outputs", path, list, default=list(OUTPUTS))
    for i, out in enumerate(outputs):
        if out not in OUTPUTS:
            _fail(f"{path}.outputs[{i}]", f"unknown output {out!r}")
    resolved["outputs"] = list(outputs)

    checks = _resolve_checks(
        _get(raw, "checks", path, list, default=[]), resolved, f"{path}.checks", scale
    )
    if "analytic" in methods:
        explicit = {c.get("method") for c in checks if c["kind"] == "method_agreement"}
        for method in methods:
            if method in _AGREEMENT_TOL and method not in explicit:
                checks.append(
                    {
                        "kind": "method_agreement",
                        "method": method,
                        "tolerance": _AGREEMENT_TOL[method] * scale,
                    }
                )
    resolved["checks"] = checks
    _validate_checks(resolved, system, params, f"{path}.checks")
    return resolved


def resolve_config(raw, scale=1.0):
    """Validate a parsed config and return the fully-resolved form."""
    if not isinstance(raw, dict):
        _fail("$", "config root must be an object")
    _reject_unknown(raw, {"schema_version", "scenario", "scenarios"}, "$")
    version = _get(raw, "schema_version", "$", int, required=True)
    if version != SCHEMA_VERSION:
        _fail("$.schema_version", f"unsupported version {version}")
    if ("scenario" in raw) == ("scenarios" in raw):
        _fail("$", "provide exactly one of 'scenario' or 'scenarios'")
    if "scenario" in raw:
        blocks = [(raw["scenario"], "$.scenario")]
    else:
        listed = _get(raw, "scenarios", "$", list, required=True)
        if not listed:
            _fail("$.scenarios", "must not be empty")
        blocks = [(b, f"$.scenarios[{i}]") for i, b in enumerate(listed)]
    scenarios = [resolve_scenario(block, path, scale) for block, path in blocks]
    names = [s["name"] for s in scenarios]
    if len(set(names)) != len(names):
        _fail("$.scenarios", "scenario names must be unique")
    return {"schema_version": SCHEMA_VERSION, "scenarios": scenarios}


# ---------------------------------------------------------------------------
# scenario execution


class _RunState:
    """Everything a check evaluator may need from one scenario run."""

    def __init__(self, resolved):
        self.resolved = resolved
        self.system = _build_system(resolved["system"], "$")
        self.params = _build_params(resolved["params"], "$")
        self.constants = self.params.constants
        self.t_grid = np.linspace(0.0, resolved["t_max"], resolved["n_samples"])
        self.grid = Grid(
            -resolved["grid"]["half_width"],
            resolved["grid"]["half_width"],
            resolved["grid"]["n_points"],
            space=Space.POSITION,
            periodic=True,
        )
        self.series = {}
        self.snapshots = {}
        self.runtimes = {}
        self._psi0 = None
        self._bound_report = None

    def psi0(self):
        if self._psi0 is None:
            self._psi0 = eval_wavefunction(
                self.system, self.params, Space.POSITION, self.grid, 0.0
            )
        return self._psi0

    def bound_report(self):
        if self._bound_report is None:
            self._bound_report = mandelstam_check(self.system, self.params)
        return self._bound_report

    def snapshot_indices(self):
        wanted = set()
        omega = self.system.omega
        for check in self.resolved["checks"]:
            kind = check["kind"]
            if kind == "parity_full_period":
                wanted.add(_sample_index(self.resolved, 2.0 * math.pi / omega))
            elif kind == "parity_half_period":
                wanted.add(_sample_index(self.resolved, math.pi / omega))
            elif kind == "spread_agreement":
                wanted.add(self.resolved["n_samples"] - 1)
        wanted.discard(None)
        return wanted


def _run_analytic(state):
    anticorr = None
    if state.resolved["anticorrelation"]:
        anticorr = lambda t: closed_form_anticorr(state.system, state.params, t)
    return assemble_series(
        lambda t: closed_form_autocorr(state.system, state.params, t).A,
        state.t_grid,
        anticorr_sampler=anticorr,
    )


def _run_split_operator(state):
    resolved = state.resolved
    n_samples = resolved["n_samples"]
    n_steps = resolved["propagator"]["n_steps"]
    sample_every = n_steps // (n_samples - 1)
    psi0 = state.psi0()
    ref = psi0.samples
    grid = state.grid
    want_anticorr = resolved["anticorrelation"]
    snapshot_at = state.snapshot_indices()

    values = np.empty(n_samples, dtype=complex)
    anticorr = np.empty(n_samples, dtype=complex) if want_anticorr else None
    calls = {"n": 0}

    def watch(t, samples):
        i = calls["n"]
        calls["n"] += 1
        if i % sample_every:
            return
        k = i // sample_every
        values[k] = quadrature(grid, np.conj(samples) * ref)
        if want_anticorr:
            mirrored = np.roll(samples[::-1], 1)
            anticorr[k] = quadrature(grid, np.conj(mirrored) * ref)
        if k in snapshot_at:
            state.snapshots[k] = samples.copy()

    config = PropagatorConfig.for_horizon(resolved["t_max"], n_steps)
    propagate(psi0, state.system, config, constants=state.constants, callback=watch)
    return AutocorrSeries(t=state.t_grid, values=values, anticorr=anticorr)


def _run_spectral(state):
    expansion = expand_in_oscillator_basis(
        state.psi0(),
        state.system.omega,
        state.resolved["spectral"]["n_max"],
        constants=state.constants,
    )
    anticorr = None
    if state.resolved["anticorrelation"]:
        anticorr = lambda t: anticorr_from_spectrum(expansion, t)
    return assemble_series(
        lambda t: autocorr_from_spectrum(expansion, t),
        state.t_grid,
        anticorr_sampler=anticorr,
    )


_RUNNERS = {
    "analytic": _run_analytic,
    "split_operator": _run_split_operator,
    "spectral": _run_spectral,
}


def _evaluate_check(state, check):
    """Return [(name, value)] entries; pass criterion is value <= tolerance."""
    kind = check["kind"]
    system, params = state.system, state.params
    hbar = params.constants.hbar

    if kind == "method_agreement":
        method = check["method"]
        ref = state.series["analytic"].values
        got = state.series[method].values
        return [
            (f"max_delta_A[{method}]", float(np.max(np.abs(got - ref)))),
            (
                f"max_delta_abs2[{method}]",
                float(np.max(np.abs(np.abs(got) ** 2 - np.abs(ref) ** 2))),
            ),
        ]
    if kind == "saturation":
        constant = saturation_asymptote(system, params)
        if system.kind is SystemKind.FREE:
            t_last = float(state.t_grid[-1])
            tau = t_last / (2.0 * params.t0)
            scaled = closed_form_autocorr(system, params, t_last).modulus_sq * tau
        else:
            t_eval = 30.0 / system.omega
            scaled = closed_form_autocorr(
                system, params, t_eval
            ).modulus_sq * math.exp(system.omega * t_eval)
        return [("saturation", abs(scaled / constant - 1.0))]
    if kind == "bound_margin":
        report = state.bound_report()
        return [("bound_margin", max(0.0, -report.min_margin))]
    if kind == "bound_curvature":
        report = state.bound_report()
        return [("bound_curvature", abs(report.curvature_ratio - 1.0))]
    if kind == "periodicity":
        period = 2.0 * math.pi / system.omega
        value = max(
            abs(closed_form_autocorr(system, params, k * period).modulus_sq - 1.0)
            for k in (1, 2, 3)
        )
        return [("periodicity", value)]
    if kind == "revival_min":
        beta0_sq = hbar / (params.constants.mass * system.omega)
        expected = math.exp(
            -2.0 * (params.x0**2 / beta0_sq + beta0_sq * params.p0**2 / hbar**2)
        )
        half = math.pi / system.omega
        got = closed_form_autocorr(system, params, half).modulus_sq
        return [("revival_min", abs(got - expected))]
    if kind == "half_period_unity":
        half = math.pi / system.omega
        value = abs(abs(closed_form_autocorr(system, params, half).A) - 1.0)
        return [("half_period_unity", value)]
    if kind == "pulsation_symmetry":
        beta0_sq = hbar / (params.constants.mass * system.omega)
        partner = PacketParams(
            alpha=beta0_sq / (params.beta * hbar), constants=params.constants
        )
        value = max(
            abs(
                closed_form_autocorr(system, params, float(t)).A
                - closed_form_autocorr(system, partner, float(t)).A
            )
            for t in state.t_grid
        )
        return [("pulsation_symmetry", value)]
    if kind == "anticorr_unity":
        half = math.pi / system.omega
        if "analytic" in state.series:
            value = abs(abs(closed_form_anticorr(system, params, half)) - 1.0)
        else:
            idx = _sample_index(state.resolved, half)
            value = abs(abs(state.series["split_operator"].anticorr[idx]) - 1.0)
        return [("anticorr_unity", value)]
    if kind == "parity_full_period":
        idx = _sample_index(state.resolved, 2.0 * math.pi / system.omega)
        value = float(np.max(np.abs(state.snapshots[idx] + state.psi0().samples)))
        return [("parity_full_period", value)]
    if kind == "parity_half_period":
        idx = _sample_index(state.resolved, math.pi / system.omega)
        mirrored = np.roll(state.snapshots[idx][::-1], 1)
        value = float(np.max(np.abs(mirrored + 1j * state.psi0().samples)))
        return [("parity_half_period", value)]
    if kind == "return_amplitude":
        t_ret = 2.0 * abs(params.p0) / abs(system.force)
        exact = closed_form_autocorr(system, params, t_ret).A
        psi_ret = eval_wavefunction(system, params, Space.POSITION, state.grid, t_ret)
        measured = overlap(psi_ret, state.psi0())
        return [("return_amplitude", abs(abs(measured) - abs(exact)))]
    if kind == "inverse_density_contrast":
        t_ret = 2.0 * abs(params.p0) / abs(system.force)
        psi_ret = eval_wavefunction(system, params, Space.POSITION, state.grid, t_ret)
        density_overlap = float(
            np.real(
                quadrature(
                    state.grid, np.abs(np.conj(psi_ret.samples) * state.psi0().samples)
                )
            )
        )
        amplitude = abs(closed_form_autocorr(system, params, t_ret).A)
        return [("inverse_density_contrast", amplitude / density_overlap)]
    if kind == "spread_agreement":
        idx = state.resolved["n_samples"] - 1
        samples = state.snapshots[idx]
        x = state.grid.points
        density = np.abs(samples) ** 2
        norm = float(np.real(quadrature(state.grid, density)))
        mean = float(np.real(quadrature(state.grid, x * density))) / norm
        spread = math.sqrt(
            float(np.real(quadrature(state.grid, (x - mean) ** 2 * density))) / norm
        )
        expected = moments(system, params, float(state.t_grid[idx])).spread_x
        return [("spread_agreement", abs(spread - expected))]
    raise AssertionError(kind)


# ---------------------------------------------------------------------------
# artifact writers


def _fmt(value):
    return f"{value + 0.0:.17g}"


def emit_series(series, path):
    """Write an autocorrelation series as CSV with LF endings."""
    header = "t,re_A,im_A,abs2_A,hilbert_dist"
    if series.anticorr is not None:
        header += ",re_Abar,im_Abar"
    lines = [header]
    hilbert = series.hilbert_distance_sq
    abs2 = series.modulus_sq
    for i, t in enumerate(series.t):
        a = series.values[i]
        row = [_fmt(t), _fmt(a.real), _fmt(a.imag), _fmt(abs2[i]), _fmt(hilbert[i])]
        if series.anticorr is not None:
            row += [_fmt(series.anticorr[i].real), _fmt(series.anticorr[i].imag)]
        lines.append(",".join(row))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_argand_svg(series, path):
    """Render Re A vs Im A as a minimal SVG 1.1 polyline with a unit circle."""
    size = 480
    center = size / 2.0
    scale = size / 2.0 - 40.0
    points = " ".join(
        f"{center + scale * a.real:.4f},{center - scale * a.imag:.4f}"
        for a in series.values
    )
    body = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<line x1="0" y1="{center:.1f}" x2="{size}" y2="{center:.1f}" '
        'stroke="#cccccc" stroke-width="1"/>',
        f'<line x1="{center:.1f}" y1="0" x2="{center:.1f}" y2="{size}" '
        'stroke="#cccccc" stroke-width="1"/>',
        f'<circle cx="{center:.1f}" cy="{center:.1f}" r="{scale:.1f}" '
        'fill="none" stroke="#999999" stroke-width="1"/>',
        f'<polyline points="{points}" fill="none" stroke="#1f77b4" '
        'stroke-width="1.5"/>',
        "</svg>",
    ]
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(body) + "\n")


def run_scenario(resolved, out_dir, quiet=False, stream=None):
    """Run one resolved scenario; returns (all_passed, report_path_or_None)."""
    stream = stream or sys.stdout
    state = _RunState(resolved)
    for method in resolved["methods"]:
        started = time.perf_counter()
        state.series[method] = _RUNNERS[method](state)
        state.runtimes[method] = time.perf_counter() - started

    entries = []
    for check in resolved["checks"]:
        for name, value in _evaluate_check(state, check):
            entries.append(
                {
                    "name": name,
                    "value": value,
                    "tolerance": check["tolerance"],
                    "pass": bool(value <= check["tolerance"]),
                }
            )

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = resolved["name"]
    report_path = None
    if "series_csv" in resolved["outputs"]:
        for method in resolved["methods"]:
            emit_series(state.series[method], out_dir / f"{name}.{method}.csv")
    if "argand_svg" in resolved["outputs"]:
        reference = "analytic" if "analytic" in state.series else resolved["methods"][0]
        write_argand_svg(state.series[reference], out_dir / f"{name}.argand.svg")
    if "report_json" in resolved["outputs"]:
        report = {
            "scenario": name,
            "resolved_config": {
                "schema_version": SCHEMA_VERSION,
                "scenario": resolved,
            },
            "checks": entries,
            "runtimes": state.runtimes,
        }
        report_path = out_dir / f"{name}.report.json"
        with open(report_path, "w", newline="\n") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")

    passed = all(entry["pass"] for entry in entries)
    if not quiet:
        for entry in entries:
            status = "PASS" if entry["pass"] else "FAIL"
            print(
                f"[{status}] {name}: {entry['name']} = {entry['value']:.6e} "
                f"(tolerance {entry['tolerance']:.6e})",
                file=stream,
            )
        verdict = "pass" if passed else "FAIL"
        print(f"scenario {name}: {verdict}", file=stream)
    return passed, report_path


# ---------------------------------------------------------------------------
# presets


def _presets():
    tau = 2.0 * math.pi
    return {
        "free-saturation": (
            "long-time overlap decay of a moving free packet against its "
            "saturation constant",
            {
                "name": "free-saturation",
                "system": {"kind": "free"},
                "params": {"alpha": 1.0, "p0": 1.0},
                "t_max": 1.0e4,
                "n_samples": 101,
                "methods": ["analytic"],
                "checks": [{"kind": "saturation"}],
            },
        ),
        "free-mandelstam": (
            "overlap decay of a free packet against the energy-spread bound",
            {
                "name": "free-mandelstam",
                "system": {"kind": "free"},
                "params": {"alpha": 1.0, "p0": 1.0},
                "t_max": 2.0,
                "n_samples": 201,
                "methods": ["analytic"],
                "checks": [{"kind": "bound_margin"}, {"kind": "bound_curvature"}],
            },
        ),
        "accel-return": (
            "uniformly accelerated packet thrown against the force; phase "
            "suppression at the classical return time",
            {
                "name": "accel-return",
                "system": {"kind": "uniform_acceleration", "force": 1.0},
                "params": {"alpha": 1.0, "p0": -1.0},
                "t_max": 4.0,
                "n_samples": 201,
                "methods": ["analytic", "split_operator"],
                "grid": {"half_width": 40.0, "n_points": 2048},
                "propagator": {"n_steps": 8000},
                "checks": [
                    {"kind": "return_amplitude"},
                    {"kind": "inverse_density_contrast"},
                ],
            },
        ),
        "sho-case1": (
            "natural-width oscillator packet: exact revivals and the "
            "three-method cross check",
            {
                "name": "sho-case1",
                "system": {"kind": "harmonic", "omega": 1.0},
                "params": {"alpha": 1.0, "x0": 1.0, "p0": 0.5},
                "t_max": 3.0 * tau,
                "n_samples": 241,
                "methods": ["analytic", "split_operator", "spectral"],
                "grid": {"half_width": 30.0, "n_points": 1024},
                "propagator": {"n_steps": 48000},
                "spectral": {"n_max": 40},
                "checks": [{"kind": "periodicity"}, {"kind": "revival_min"}],
            },
        ),
        "sho-case2-pulsate": (
            "centered squeezed oscillator packet: width pulsation and the "
            "r to 1/r symmetry",
            {
                "name": "sho-case2-pulsate",
                "system": {"kind": "harmonic", "omega": 1.0},
                "params": {"alpha": 2.0},
                "t_max": 2.0 * tau,
                "n_samples": 201,
                "methods": ["analytic", "spectral"],
                "grid": {"half_width": 30.0, "n_points": 1024},
                "spectral": {"n_max": 80},
                "checks": [
                    {"kind": "pulsation_symmetry"},
                    {"kind": "half_period_unity"},
                ],
            },
        ),
        "sho-anticorr": (
            "mirrored overlap of a natural-width oscillator packet and the "
            "parity relations at half and full period",
            {
                "name": "sho-anticorr",
                "system": {"kind": "harmonic", "omega": 1.0},
                "params": {"alpha": 1.0, "x0": 1.0, "p0": 0.5},
                "t_max": tau,
                "n_samples": 161,
                "methods": ["analytic", "split_operator"],
                "grid": {"half_width": 30.0, "n_points": 1024},
                "propagator": {"n_steps": 32000},
                "anticorrelation": True,
                "checks": [
                    {"kind": "anticorr_unity"},
                    {"kind": "parity_full_period"},
                    {"kind": "parity_half_period"},
                ],
            },
        ),
        "inverted-runaway": (
            "natural-width packet on the inverted oscillator: exponential "
            "overlap decay and hyperbolic spreading",
            {
                "name": "inverted-runaway",
                "system": {"kind": "inverted", "omega": 1.0},
                "params": {"alpha": 1.0, "p0": 1.0},
                "t_max": 2.2,
                "n_samples": 201,
                "methods": ["analytic", "split_operator"],
                "grid": {"half_width": 60.0, "n_points": 4096},
                "propagator": {"n_steps": 40000},
                "checks": [{"kind": "saturation"}, {"kind": "spread_agreement"}],
            },
        ),
    }


# ---------------------------------------------------------------------------
# entry point


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="packetlab",
        description="Wave-packet autocorrelation scenarios: closed forms "
        "cross-checked against grid numerics.",
    )
    parser.add_argument(
        "--tolerance-scale",
        type=float,
        default=1.0,
        help="multiply every comparison tolerance by this factor",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress check output")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenarios from a JSON config file")
    run_p.add_argument("config_path")
    run_p.add_argument("--out", default=".", help="artifact directory")
    pre_p = sub.add_parser("preset", help="run a built-in scenario")
    pre_p.add_argument("name")
    pre_p.add_argument("--out", default=".", help="artifact directory")
    sub.add_parser("list-presets", help="list built-in scenarios")
    for p in (run_p, pre_p):
        p.add_argument(
            "--tolerance-scale", type=float, default=argparse.SUPPRESS
        )
        p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    quiet = bool(args.quiet)

    if args.command == "list-presets":
        for name, (description, _) in sorted(_presets().items()):
            print(f"{name:20s} {description}")
        return 0

    if args.tolerance_scale <= 0.0 or not math.isfinite(args.tolerance_scale):
        print("config error at $.tolerance-scale: must be a positive finite number",
              file=sys.stderr)
        return 2

    if args.command == "preset":
        presets = _presets()
        if args.name not in presets:
            known = ", ".join(sorted(presets))
            print(
                f"config error at $.preset: unknown preset {args.name!r} "
                f"(known: {known})",
                file=sys.stderr,
            )
            return 2
        raw = {"schema_version": SCHEMA_VERSION, "scenario": presets[args.name][1]}
    else:
        try:
            text = Path(args.config_path).read_text()
        except OSError as exc:
            print(f"error reading config: {exc}", file=sys.stderr)
            return 3
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            print(f"config error at $: invalid JSON ({exc})", file=sys.stderr)
            return 2

    try:
        resolved = resolve_config(raw, scale=args.tolerance_scale)
    except ConfigError as exc:
        print(f"config error at {exc}", file=sys.stderr)
        return 2

    failures = []
    try:
        for scenario in resolved["scenarios"]:
            passed, report_path = run_scenario(scenario, args.out, quiet=quiet)
            if not passed:
                failures.append((scenario["name"], report_path))
    except PacketLabError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3

    if failures:
        for name, report_path in failures:
            where = f" (report: {report_path})" if report_path else ""
            print(f"comparison failure in scenario {name}{where}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
