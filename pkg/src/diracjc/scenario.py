"""Scenario files: flat ``key = value`` text with dotted section keys.

Lines starting with ``#`` and blank lines are ignored. Unknown or repeated
keys are errors, so a scenario archived next to its output cannot silently
drift from what was run.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .integrator import IntegratorSettings
from .model import (
    CouplingParams,
    Dimension,
    Mapping,
    ModelConfig,
    Modulation,
    ModulationKind,
    config_for_coupling,
    derive_coupling,
)
from .observables import InitialKind, InitialState


class Backend(enum.Enum):
    AUTO = "auto"
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


_DEFAULTS = {
    "model.mass": "1",
    "model.light_speed": "1",
    "model.hbar": "1",
    "model.omega0": "1",
    "model.mapping": "jc",
    "model.dimension": "2+1",
    "model.weyl_limit": "false",
    "modulation.kind": "constant",
    "modulation.zeta": "0",
    "coupling.g0": "none",
    "initial.kind": "number",
    "initial.n": "0",
    "initial.alpha_sq": "0",
    "initial.phase": "0",
    "initial.n_max": "auto",
    "time.t_max": "30",
    "time.samples": "3001",
    "integrator.rel_tol": "1e-10",
    "integrator.abs_tol": "1e-12",
    "integrator.max_step": "auto",
    "backend": "auto",
}


def parse_kv(text: str, source: str = "<string>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def format_kv(items: dict) -> str:
    lines = []
    for key, value in items.items():
        if isinstance(value, float):
            value = format(value, ".17g")
        elif isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _float(raw: dict, key: str) -> float:
    try:
        value = float(raw[key])
    except ValueError:
        raise ConfigError(f"{key}: not a number: {raw[key]!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite")
    return value


def _int(raw: dict, key: str) -> int:
    try:
        return int(raw[key])
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {raw[key]!r}") from None


def _bool(raw: dict, key: str) -> bool:
    value = raw[key].lower()
    if value in ("true", "yes", "1", "on"):
        return True
    if value in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: not a boolean: {raw[key]!r}")


def _enum(cls, raw: dict, key: str):
    try:
        return cls(raw[key].lower())
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise ConfigError(f"{key}: expected one of {choices}, got {raw[key]!r}") from None


@dataclass(frozen=True)
class Scenario:
    model: ModelConfig
    modulation: Modulation
    initial: InitialState
    t_max: float = 30.0
    samples: int = 3001
    coupling_override: float | None = None
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float | None = None
    backend: Backend = Backend.AUTO

    def __post_init__(self):
        if not self.t_max > 0:
            raise ConfigError("time.t_max must be > 0")
        if self.samples < 2:
            raise ConfigError("time.samples must be >= 2")

    @property
    def config(self) -> ModelConfig:
        """Model configuration with the coupling override folded into omega0."""
        if self.coupling_override is None:
            return self.model
        return config_for_coupling(self.model, self.coupling_override)

    @property
    def coupling(self) -> CouplingParams:
        return derive_coupling(self.config)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    def integrator_settings(self) -> IntegratorSettings:
        return IntegratorSettings(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_step=self.max_step,
            output_grid=tuple(self.times),
        )

    @classmethod
    def from_mapping(cls, items: dict[str, str]) -> "Scenario":
        unknown = sorted(set(items) - set(_DEFAULTS))
        if unknown:
            raise ConfigError(f"unknown keys: {', '.join(unknown)}")
        raw = {**_DEFAULTS, **items}
        model = ModelConfig(
            mass=_float(raw, "model.mass"),
            light_speed=_float(raw, "model.light_speed"),
            hbar=_float(raw, "model.hbar"),
            omega0=_float(raw, "model.omega0"),
            mapping=_enum(Mapping, raw, "model.mapping"),
            dimension=_enum(Dimension, raw, "model.dimension"),
            weyl_limit=_bool(raw, "model.weyl_limit"),
        )
        kind = _enum(ModulationKind, raw, "modulation.kind")
        zeta = _float(raw, "modulation.zeta")
        if kind is ModulationKind.EXPONENTIAL and zeta == 0:
            raise ConfigError("modulation.zeta must be non-zero for exponential modulation")
        modulation = Modulation(kind, zeta)
        n_max = None if raw["initial.n_max"] == "auto" else _int(raw, "initial.n_max")
        initial = InitialState(
            kind=_enum(InitialKind, raw, "initial.kind"),
            n=_int(raw, "initial.n"),
            alpha_sq=_float(raw, "initial.alpha_sq"),
            phase=_float(raw, "initial.phase"),
            n_max=n_max,
        )
        override = None if raw["coupling.g0"].lower() == "none" else _float(raw, "coupling.g0")
        max_step = None if raw["integrator.max_step"] == "auto" else _float(raw, "integrator.max_step")
        scenario = cls(
            model=model,
            modulation=modulation,
            initial=initial,
            t_max=_float(raw, "time.t_max"),
            samples=_int(raw, "time.samples"),
            coupling_override=override,
            rel_tol=_float(raw, "integrator.rel_tol"),
            abs_tol=_float(raw, "integrator.abs_tol"),
            max_step=max_step,
            backend=_enum(Backend, raw, "backend"),
        )
        scenario.integrator_settings()  # validates tolerances
        scenario.coupling  # validates the Weyl-limit coupling
        return scenario

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> "Scenario":
        return cls.from_mapping(parse_kv(text, source))

    @classmethod
    def load(cls, path) -> "Scenario":
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario {path}: {exc}") from None
        return cls.from_text(text, str(path))
