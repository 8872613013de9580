"""Run scenarios: pick a backend, evolve every block, assemble observables."""

from __future__ import annotations

import logging

import numpy as np

from .dynamics import (
    closed_form_kind,
    evolve_analytic,
    evolve_numeric,
    exponential_envelope_ok,
)
from .errors import ConservationError, NoAnalyticBackend, ValidationFailure
from .model import Modulation, conserved_charge, instantaneous_energy
from .observables import InitialKind, ObservableSeries, observable_series
from .scenario import Backend, Scenario

log = logging.getLogger(__name__)

DRIFT_LIMIT = 1e-8

# analytic vs numeric amplitude agreement required by ``validate``
AGREEMENT_TOL = {"constant": 1e-8, "exponential": 1e-6, "weyl": 1e-8}


def analytic_kind(scenario: Scenario) -> tuple[str | None, str | None]:
    """Closed-form backend usable for this scenario and, if none, the reason."""
    kind = closed_form_kind(scenario.modulation, scenario.model.weyl_limit)
    if kind is None:
        return None, "no closed form for sinusoidal modulation outside the Weyl limit"
    if kind == "exponential":
        n_max = max(scenario.initial.blocks(scenario.model.mapping)) if scenario.initial else 0
        if not exponential_envelope_ok(n_max, scenario.coupling, scenario.modulation.zeta,
                                       scenario.t_max):
            return None, "Bessel argument or order outside the validated envelope"
    return kind, None


def select_backend(scenario: Scenario) -> tuple[str, list[str]]:
    warnings = []
    kind, reason = analytic_kind(scenario)
    if scenario.backend is Backend.NUMERIC:
        return "numeric", warnings
    if scenario.backend is Backend.ANALYTIC:
        if kind is None:
            raise NoAnalyticBackend(reason)
        return kind, warnings
    if kind is None:
        if closed_form_kind(scenario.modulation, scenario.model.weyl_limit) is not None:
            warnings.append(f"exponential closed form skipped: {reason}; using numeric backend")
            log.warning(warnings[-1])
        return "numeric", warnings
    return kind, warnings


def evolve_blocks(scenario: Scenario, backend: str):
    blocks = scenario.initial.blocks(scenario.model.mapping)
    mapping = scenario.model.mapping
    if backend == "numeric":
        return evolve_numeric(blocks, scenario.coupling, scenario.modulation,
                              scenario.integrator_settings(), mapping=mapping)
    return evolve_analytic(blocks, scenario.coupling, scenario.modulation, scenario.times,
                           mapping=mapping, weyl_limit=scenario.model.weyl_limit)


def _full_state(states, scenario):
    coefs = scenario.initial.coefficients()
    return [type(s)(s.n, c * s.a, c * s.b, s.t) for c, s in zip(coefs, states)]


def run(scenario: Scenario, check_drift: bool = True) -> ObservableSeries:
    """Simulate a scenario; metadata ends up in ``series.meta``."""
    deficit = scenario.initial.check_truncation()
    backend, warnings = select_backend(scenario)
    log.info("running with backend %s", backend)
    states = evolve_blocks(scenario, backend)
    series = observable_series(states, scenario.initial, scenario.model.mapping)

    charge = conserved_charge(_full_state(states, scenario), scenario.config)
    drift = float(np.max(np.abs(charge - charge[0])))
    norm_drift = float(np.max(np.abs(series.norm - series.norm[0])))
    ref_n = scenario.initial.n if scenario.initial.kind is InitialKind.NUMBER else 0
    series.energy_plus = np.asarray(
        instantaneous_energy(scenario.config, scenario.modulation, ref_n, series.times, +1)
    )
    coupling = scenario.coupling
    settings = scenario.integrator_settings()
    series.meta = {
        "backend": backend,
        "mapping": scenario.model.mapping.value,
        "dimension": scenario.model.dimension.value,
        "weyl_limit": scenario.model.weyl_limit,
        "modulation.kind": scenario.modulation.kind.value,
        "modulation.zeta": scenario.modulation.zeta,
        "g0": coupling.g0,
        "theta": coupling.theta,
        "xi0": coupling.xi0,
        "initial.kind": scenario.initial.kind.value,
        "blocks": len(states),
        "truncation_deficit": deficit,
        "rel_tol": settings.rel_tol,
        "abs_tol": settings.abs_tol,
        "max_step": "auto" if settings.max_step is None else settings.max_step,
        "t_max": scenario.t_max,
        "samples": scenario.samples,
        "charge_initial": float(charge[0]),
        "charge_drift": drift,
        "norm_drift": norm_drift,
        "warnings": "; ".join(warnings) if warnings else "none",
    }
    if check_drift and drift > DRIFT_LIMIT:
        raise ConservationError(f"conserved charge drifted by {drift:.3e} > {DRIFT_LIMIT:g}")
    return series


def energy_table(scenario: Scenario, n_list, times=None):
    """Rows (t, n, E+, E-) plus metadata with the constant-frequency reference."""
    config = scenario.config
    times = scenario.times if times is None else np.asarray(times, dtype=float)
    mod = scenario.modulation
    rows = []
    columns = {}
    for n in n_list:
        columns[n] = instantaneous_energy(config, mod, n, times, +1)
    for i, t in enumerate(times):
        for n in n_list:
            e = float(columns[n][i])
            rows.append((float(t), int(n), e, -e))
    meta = {
        "mapping": config.mapping.value,
        "dimension": config.dimension.value,
        "weyl_limit": config.weyl_limit,
        "modulation.kind": mod.kind.value,
        "modulation.zeta": mod.zeta,
        "xi0": config.xi0,
        "rest_energy": config.rest_energy,
    }
    for n in n_list:
        meta[f"constant_e_plus.n{n}"] = float(instantaneous_energy(config, Modulation(), n, 0.0, +1))
    return rows, meta


def validate(scenario: Scenario) -> dict:
    """Compare the analytic and numeric backends on the same scenario.

    Raises :class:`NoAnalyticBackend` when there is nothing to compare and
    :class:`ValidationFailure` (carrying the report) when a metric fails.
    """
    kind, reason = analytic_kind(scenario)
    if kind is None:
        raise NoAnalyticBackend(reason)
    scenario.initial.check_truncation()
    analytic = evolve_blocks(scenario, kind)
    numeric = evolve_blocks(scenario, "numeric")
    amp_err = 0.0
    for x, y in zip(analytic, numeric):
        amp_err = max(amp_err, float(np.max(np.abs(x.a - y.a))), float(np.max(np.abs(x.b - y.b))))
    norm_drift = max(float(np.max(np.abs(s.norm - 1.0))) for s in numeric)
    charges = conserved_charge(_full_state(numeric, scenario), scenario.config)
    charge_drift = float(np.max(np.abs(charges - charges[0])))
    limits = {
        "amplitude_error": AGREEMENT_TOL[kind],
        "norm_drift": DRIFT_LIMIT,
        "charge_drift": DRIFT_LIMIT,
    }
    values = {"amplitude_error": amp_err, "norm_drift": norm_drift, "charge_drift": charge_drift}
    failed = [k for k in limits if not values[k] <= limits[k]]
    report = {"analytic_backend": kind}
    for key in limits:
        report[key] = values[key]
        report[f"{key}.limit"] = limits[key]
    report["passed"] = not failed
    report["failed"] = ",".join(failed) if failed else "none"
    if failed:
        raise ValidationFailure(f"metrics out of tolerance: {', '.join(failed)}", report)
    return report

