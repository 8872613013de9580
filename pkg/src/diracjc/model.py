"""Physical parameters, frequency modulations, spectra and conserved charges.

The Dirac oscillator in (1+1) or (2+1) dimensions maps onto a
Jaynes-Cummings (JC) interaction for the positive coupling sign and onto an
anti-Jaynes-Cummings (AJC) interaction for the negative one. In both cases a
conserved charge splits the Hilbert space into 2x2 blocks. A block is
labelled by the integer ``n`` used throughout the package:

* JC:  ``n = n_r``, spanned by ``|up, n>`` and ``|down, n+1>``
* AJC: ``n = n_l - 1``, spanned by ``|up, n+1>`` and ``|down, n>``

so every block couples with strength ``g(t) * sqrt(n + 1)``. For AJC the
decoupled ``|up, n_l=0>`` state is the block ``n = -1`` (coupling zero).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


class Mapping(enum.Enum):
    JC = "jc"
    AJC = "ajc"

    @property
    def sign(self) -> int:
        """Sign of the effective coupling in the block equations."""
        return 1 if self is Mapping.JC else -1


class Dimension(enum.Enum):
    ONE_PLUS_ONE = "1+1"
    TWO_PLUS_ONE = "2+1"

    @property
    def xi_factor(self) -> int:
        # coefficient of xi under the square root of the spectrum
        return 2 if self is Dimension.ONE_PLUS_ONE else 4


class ModulationKind(enum.Enum):
    CONSTANT = "constant"
    EXPONENTIAL = "exponential"
    SINUSOIDAL = "sinusoidal"


@dataclass(frozen=True)
class ModelConfig:
    mass: float = 1.0
    light_speed: float = 1.0
    hbar: float = 1.0
    omega0: float = 1.0
    mapping: Mapping = Mapping.JC
    dimension: Dimension = Dimension.TWO_PLUS_ONE
    weyl_limit: bool = False

    def __post_init__(self):
        for name in ("mass", "light_speed", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be finite and > 0, got {value!r}")
        if not (math.isfinite(self.omega0) and self.omega0 >= 0):
            raise ConfigError(f"omega0 must be finite and >= 0, got {self.omega0!r}")
        if not isinstance(self.mapping, Mapping):
            raise ConfigError(f"mapping must be a Mapping, got {self.mapping!r}")
        if not isinstance(self.dimension, Dimension):
            raise ConfigError(f"dimension must be a Dimension, got {self.dimension!r}")

    @property
    def rest_energy(self) -> float:
        return self.mass * self.light_speed**2

    @property
    def theta(self) -> float:
        """Rest-mass frequency m c^2 / hbar, zero in the Weyl limit."""
        if self.weyl_limit:
            return 0.0
        return self.rest_energy / self.hbar

    @property
    def xi0(self) -> float:
        return self.hbar * self.omega0 / self.rest_energy


@dataclass(frozen=True)
class Modulation:
    """Time profile f(t) with omega(t) = omega0 f^2, g(t) = g0 f."""

    kind: ModulationKind = ModulationKind.CONSTANT
    zeta: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kind, ModulationKind):
            raise ConfigError(f"unknown modulation kind {self.kind!r}")
        if not math.isfinite(self.zeta):
            raise ConfigError("zeta must be finite")
        if self.kind is ModulationKind.SINUSOIDAL and self.zeta == 0:
            raise ConfigError("sinusoidal modulation requires zeta != 0")

    def value(self, t):
        return modulation_value(self, t)

    def integral(self, t):
        """Closed form of the integral of f from 0 to t."""
        t = np.asarray(t, dtype=float)
        zeta = self.zeta
        if self.kind is ModulationKind.CONSTANT:
            out = t
        elif self.kind is ModulationKind.EXPONENTIAL:
            out = t if zeta == 0 else np.expm1(zeta * t) / zeta
        else:
            # 1 - cos(x) = 2 sin^2(x/2) avoids cancellation near t = 0
            out = 2.0 * np.sin(0.5 * zeta * t) ** 2 / zeta
        return out[()] if out.ndim == 0 else out

    def max_abs(self, t_max: float) -> float:
        """Supremum of |f| on [0, t_max]."""
        if self.kind is ModulationKind.CONSTANT:
            return 1.0
        if self.kind is ModulationKind.EXPONENTIAL:
            return math.exp(max(self.zeta * t_max, 0.0))
        if abs(self.zeta) * t_max >= math.pi / 2:
            return 1.0
        return abs(math.sin(self.zeta * t_max))


@dataclass(frozen=True)
class CouplingParams:
    g0: float
    theta: float
    xi0: float

    def __post_init__(self):
        for name in ("g0", "theta", "xi0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be finite and >= 0, got {value!r}")

    def rabi_frequency(self, n) -> float:
        """Relativistic Rabi frequency for block ``n`` at constant coupling."""
        return np.sqrt(self.theta**2 + self.g0**2 * (np.asarray(n) + 1.0))


def derive_coupling(config: ModelConfig) -> CouplingParams:
    c, hbar, m, w = config.light_speed, config.hbar, config.mass, config.omega0
    if config.weyl_limit and w == 0:
        raise ConfigError("the Weyl limit needs omega0 > 0, otherwise the coupling vanishes")
    if config.dimension is Dimension.TWO_PLUS_ONE:
        g0 = 2.0 * c / hbar * math.sqrt(m * w * hbar)
    else:
        g0 = c / hbar * math.sqrt(2.0 * m * w * hbar)
    return CouplingParams(g0=g0, theta=config.theta, xi0=config.xi0)


def config_for_coupling(config: ModelConfig, g0: float) -> ModelConfig:
    """Return a copy of ``config`` whose omega0 reproduces the base coupling g0."""
    if not (math.isfinite(g0) and g0 >= 0):
        raise ConfigError(f"g0 must be finite and >= 0, got {g0!r}")
    m, c = config.mass, config.light_speed
    # g0^2 = k m omega0 c^2 / hbar with k = 4 in (2+1) and 2 in (1+1)
    k = 4.0 if config.dimension is Dimension.TWO_PLUS_ONE else 2.0
    omega0 = config.hbar * g0**2 / (k * m * c**2)
    return ModelConfig(
        mass=m,
        light_speed=c,
        hbar=config.hbar,
        omega0=omega0,
        mapping=config.mapping,
        dimension=config.dimension,
        weyl_limit=config.weyl_limit,
    )


def modulation_value(mod: Modulation, t):
    t = np.asarray(t, dtype=float)
    if mod.kind is ModulationKind.CONSTANT:
        out = np.ones_like(t)
    elif mod.kind is ModulationKind.EXPONENTIAL:
        out = np.exp(mod.zeta * t)
    else:
        out = np.sin(mod.zeta * t)
    return out[()] if out.ndim == 0 else out


def _branch_sign(branch) -> int:
    if branch in (1, "+", "plus"):
        return 1
    if branch in (-1, "-", "minus"):
        return -1
    raise ConfigError(f"branch must be +1 or -1, got {branch!r}")


def instantaneous_energy(config: ModelConfig, mod: Modulation, n, t, branch=1):
    """Instantaneous energy eigenvalue E^{+/-}(t) of the level with quanta ``n``.

    ``n`` is n_r (JC, 2+1), n_x (1+1) or n_l (AJC). For AJC the level
    n_l = 0 is the bare rest energy.
    """
    n = np.asarray(n)
    if np.any(n < 0) or not np.issubdtype(n.dtype, np.integer):
        raise ConfigError(f"n must be a non-negative integer, got {n!r}")
    sign = _branch_sign(branch)
    quanta = n + 1 if config.mapping is Mapping.JC else n
    f2 = np.asarray(modulation_value(mod, t)) ** 2
    k = config.dimension.xi_factor
    if config.weyl_limit:
        c, m, hbar = config.light_speed, config.mass, config.hbar
        out = sign * c * np.sqrt(k * m * hbar * config.omega0 * f2 * quanta)
    else:
        out = sign * config.rest_energy * np.sqrt(k * config.xi0 * f2 * quanta + 1.0)
    return out[()] if np.ndim(out) == 0 else out


def block_charge(mapping: Mapping, n) -> np.ndarray:
    """Eigenvalue of the conserved charge on block ``n``.

    JC: N - N_l + sigma_z/2 = n + 1/2.  AJC: sigma_z/2 - N_l = -(n + 1/2).
    """
    return mapping.sign * (np.asarray(n, dtype=float) + 0.5)


def conserved_charge(states, config: ModelConfig):
    """Expectation of the conserved charge (I_1, I_2 or I_2') for a full state.

    ``states`` is one block or an iterable of blocks, each exposing ``n``,
    ``a`` and ``b`` holding the actual coefficients of the full state.
    Amplitudes may be arrays over time, in which case so is the result.
    """
    if hasattr(states, "a"):
        states = [states]
    total = 0.0
    for s in states:
        weight = np.abs(s.a) ** 2 + np.abs(s.b) ** 2
        total = total + block_charge(config.mapping, s.n) * weight
    return total
