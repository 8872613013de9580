"""Time evolution of the conserved 2x2 blocks.

All backends return interaction-picture amplitudes ``a`` (spin up) and ``b``
(its spin-down partner) for the initial condition ``a(0) = a0, b(0) = 0``.
Every backend is written for the JC sign; the AJC mapping flips the sign of
the coupling, which only flips the sign of ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .integrator import IntegratorSettings, integrate
from .model import CouplingParams, Mapping, Modulation, ModulationKind
from .specfun import bessel_j, log_gamma

# outside this envelope the Bessel closed form is not validated
MAX_BESSEL_ARGUMENT = 30.0
MAX_BESSEL_ORDER_IMAG = 5.0


@dataclass(frozen=True)
class SubspaceState:
    """Amplitudes of block ``n`` at time(s) ``t``.

    ``a``, ``b`` and ``t`` are scalars for a single snapshot or equally
    shaped arrays for a trajectory.
    """

    n: int
    a: complex | np.ndarray
    b: complex | np.ndarray
    t: float | np.ndarray

    @property
    def norm(self):
        return np.abs(self.a) ** 2 + np.abs(self.b) ** 2

    def __getitem__(self, i) -> "SubspaceState":
        return SubspaceState(self.n, self.a[i], self.b[i], self.t[i])


def _check_block(n: int, mapping: Mapping) -> int:
    n = int(n)
    lowest = -1 if mapping is Mapping.AJC else 0
    if n < lowest:
        raise DomainError(f"block index {n} invalid for {mapping.name}")
    return n


def _finish(n, a, b, t):
    t = np.asarray(t, dtype=float)
    if t.ndim == 0:
        return SubspaceState(n, complex(a), complex(b), float(t))
    return SubspaceState(n, np.asarray(a, dtype=complex), np.asarray(b, dtype=complex), t)


def evolve_constant(n, coupling: CouplingParams, t, a0=1.0, mapping=Mapping.JC) -> SubspaceState:
    n = _check_block(n, mapping)
    t = np.asarray(t, dtype=float)
    theta = coupling.theta
    gn = coupling.g0 * math.sqrt(n + 1)
    rabi = math.hypot(theta, gn)
    # sin(rabi t)/rabi without dividing by zero when theta = g = 0
    sinc = t * np.sinc(rabi * t / np.pi)
    a = np.exp(1j * theta * t) * a0 * (np.cos(rabi * t) - 1j * theta * sinc)
    b = mapping.sign * np.exp(-1j * theta * t) * a0 * gn * sinc
    return _finish(n, a, b, t)


def _bessel_parameters(n, coupling, zeta):
    if zeta == 0:
        raise DomainError("exponential modulation needs zeta != 0")
    eta = 0.5 - 1j * coupling.theta / zeta
    z0 = coupling.g0 * math.sqrt(n + 1) / zeta
    sech = 1.0 / math.cosh(math.pi * coupling.theta / zeta)
    return eta, z0, sech


def exponential_envelope_ok(n_max: int, coupling: CouplingParams, zeta: float, t_max: float) -> bool:
    """Whether the Bessel closed form stays inside its validated envelope."""
    if zeta == 0:
        return False
    z_peak = coupling.g0 * math.sqrt(n_max + 1) / abs(zeta) * math.exp(max(zeta * t_max, 0.0))
    return z_peak <= MAX_BESSEL_ARGUMENT and coupling.theta / abs(zeta) <= MAX_BESSEL_ORDER_IMAG


def evolve_exponential(n, coupling: CouplingParams, zeta: float, t, a0=1.0,
                       mapping=Mapping.JC) -> SubspaceState:
    """Closed form for f(t) = exp(zeta t) in terms of Bessel functions of order eta."""
    n = _check_block(n, mapping)
    t = np.asarray(t, dtype=float)
    eta, z0, sech = _bessel_parameters(n, coupling, zeta)
    if z0 == 0.0:
        return _finish(n, a0 * np.ones_like(t, dtype=complex), np.zeros_like(t, dtype=complex), t)
    theta = coupling.theta
    z = z0 * np.exp(zeta * t)
    pref = z0 * (math.pi / 2.0) * sech
    j_eta0 = bessel_j(eta, z0)
    j_meta0 = bessel_j(-eta, z0)
    za = pref * (j_eta0 * bessel_j(1.0 - eta, z) + j_meta0 * bessel_j(eta - 1.0, z))
    # both second-slot factors carry the time-dependent argument
    zb = pref * (j_eta0 * bessel_j(-eta, z) - j_meta0 * bessel_j(eta, z))
    a = a0 * np.exp(0.5 * t * (zeta + 2j * theta)) * za
    b = -mapping.sign * a0 * np.exp(0.5 * t * (zeta - 2j * theta)) * zb
    return _finish(n, a, b, t)


def asymptotic_exponential(n, coupling: CouplingParams, zeta: float, a0=1.0,
                           mapping=Mapping.JC) -> tuple[complex, complex]:
    """Limits of a(t), b(t) as t -> infinity for a decaying exponential."""
    if not zeta < 0:
        raise DomainError("asymptotic limits exist only for zeta < 0")
    n = _check_block(n, mapping)
    eta, z0, sech = _bessel_parameters(n, coupling, zeta)
    if z0 == 0.0:
        return complex(a0), 0j
    log_z0 = np.log(complex(z0))
    a_inf = (a0 * math.pi * np.exp(-eta * math.log(2.0) + eta * log_z0 - log_gamma(eta))
             * sech * bessel_j(-eta, z0))
    b_inf = (-mapping.sign * a0 * math.pi
             * np.exp((eta - 1.0) * math.log(2.0) + (1.0 - eta) * log_z0 - log_gamma(1.0 - eta))
             * sech * bessel_j(eta, z0))
    return complex(a_inf), complex(b_inf)


def coupling_integral(coupling: CouplingParams, mod: Modulation) -> Callable:
    """Return t -> integral of g(t') over [0, t]."""
    return lambda t: coupling.g0 * mod.integral(t)


def evolve_weyl(n, coupling: CouplingParams, g_integral: Callable, t, a0=1.0,
                mapping=Mapping.JC) -> SubspaceState:
    """Resonant (theta = 0) solution for an arbitrary coupling g(t)."""
    if coupling.theta != 0:
        raise DomainError("the Weyl backend requires theta = 0")
    n = _check_block(n, mapping)
    t = np.asarray(t, dtype=float)
    phase = math.sqrt(n + 1) * np.asarray(g_integral(t), dtype=float)
    a = a0 * np.cos(phase) + 0j
    b = mapping.sign * a0 * np.sin(phase) + 0j
    return _finish(n, a, b, t)


def default_max_step(coupling: CouplingParams, mod: Modulation, n_max: int, t_max: float) -> float:
    g_max = coupling.g0 * mod.max_abs(t_max)
    scale = 2.0 * coupling.theta + g_max * math.sqrt(n_max + 1)
    if scale == 0.0:
        return max(t_max, 1.0)
    return 0.1 / scale


def _interaction_rhs(ns, coupling, mod, sign):
    root = np.sqrt(np.asarray(ns, dtype=float) + 1.0)
    theta, g0 = coupling.theta, coupling.g0
    k = len(ns)

    def rhs(t, y):
        a, b = y[:k], y[k:]
        gs = sign * g0 * float(mod.value(t)) * root
        rot = complex(math.cos(2.0 * theta * t), math.sin(2.0 * theta * t))
        return np.concatenate((-gs * rot * b, gs * rot.conjugate() * a))

    return rhs


def _schrodinger_rhs(ns, coupling, mod, sign):
    root = np.sqrt(np.asarray(ns, dtype=float) + 1.0)
    theta, g0 = coupling.theta, coupling.g0
    k = len(ns)

    def rhs(t, y):
        a, b = y[:k], y[k:]
        gs = sign * g0 * float(mod.value(t)) * root
        return np.concatenate((-1j * theta * a - gs * b, 1j * theta * b + gs * a))

    return rhs


def evolve_numeric(n, coupling: CouplingParams, mod: Modulation, settings: IntegratorSettings,
                   mapping=Mapping.JC, a0=1.0, picture: str = "interaction"):
    """Integrate the first-order block equations on ``settings.output_grid``.

    ``n`` may be an int or a sequence of block indices; the blocks are
    integrated together as one system. ``picture="schrodinger"`` integrates
    the full Hamiltonian including the free rest-mass term instead.
    Returns one trajectory :class:`SubspaceState` per block.
    """
    single = np.ndim(n) == 0
    ns = [_check_block(k, mapping) for k in np.atleast_1d(n)]
    grid = np.asarray(settings.output_grid)
    if picture == "interaction":
        rhs = _interaction_rhs(ns, coupling, mod, mapping.sign)
    elif picture == "schrodinger":
        rhs = _schrodinger_rhs(ns, coupling, mod, mapping.sign)
    else:
        raise ValueError(f"unknown picture {picture!r}")
    max_step = settings.max_step
    if max_step is None:
        max_step = default_max_step(coupling, mod, max(ns), float(grid[-1]))
    y0 = np.concatenate((np.full(len(ns), complex(a0)), np.zeros(len(ns), dtype=complex)))
    ys, _ = integrate(rhs, y0, settings, max_step)
    k = len(ns)
    states = [SubspaceState(m, ys[:, i].copy(), ys[:, k + i].copy(), grid) for i, m in enumerate(ns)]
    return states[0] if single else states


def closed_form_kind(mod: Modulation, weyl_limit: bool) -> str | None:
    """Name of the analytic backend for this modulation, or None."""
    if weyl_limit:
        return "weyl"
    if mod.kind is ModulationKind.CONSTANT:
        return "constant"
    if mod.kind is ModulationKind.EXPONENTIAL:
        return "exponential"
    return None


def evolve_analytic(ns: Sequence[int], coupling: CouplingParams, mod: Modulation, t,
                    mapping=Mapping.JC, weyl_limit=False) -> list[SubspaceState]:
    kind = closed_form_kind(mod, weyl_limit)
    if kind is None:
        raise DomainError(f"no closed form for {mod.kind.value} modulation outside the Weyl limit")
    out = []
    for n in ns:
        if kind == "weyl":
            out.append(evolve_weyl(n, coupling, coupling_integral(coupling, mod), t, mapping=mapping))
        elif kind == "constant":
            out.append(evolve_constant(n, coupling, t, mapping=mapping))
        else:
            out.append(evolve_exponential(n, coupling, mod.zeta, t, mapping=mapping))
    return out
