"""Angular-momentum expectation values, spin reduced density matrix and entropy."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dynamics import SubspaceState
from .errors import ConfigError, DomainError, TruncationError
from .model import Mapping

TRUNCATION_LIMIT = 1e-12


class InitialKind(enum.Enum):
    NUMBER = "number"
    COHERENT = "coherent"


@dataclass(frozen=True)
class InitialState:
    """Orbital part of the initial product state |up> x |orbital>.

    ``n`` counts right-handed quanta for JC and left-handed quanta for AJC.
    """

    kind: InitialKind = InitialKind.NUMBER
    n: int = 0
    alpha_sq: float = 0.0
    phase: float = 0.0
    n_max: int | None = None

    def __post_init__(self):
        if not isinstance(self.kind, InitialKind):
            raise ConfigError(f"unknown initial state kind {self.kind!r}")
        if self.kind is InitialKind.NUMBER:
            if int(self.n) != self.n or self.n < 0:
                raise ConfigError(f"number state needs an integer n >= 0, got {self.n!r}")
        else:
            if not (math.isfinite(self.alpha_sq) and self.alpha_sq >= 0):
                raise ConfigError(f"alpha_sq must be finite and >= 0, got {self.alpha_sq!r}")
            if self.n_max is None:
                object.__setattr__(self, "n_max", default_n_max(self.alpha_sq))
            elif self.n_max < 0:
                raise ConfigError("n_max must be >= 0")

    @property
    def orbitals(self) -> np.ndarray:
        """Orbital quantum numbers carried by the state."""
        if self.kind is InitialKind.NUMBER:
            return np.array([self.n])
        return np.arange(self.n_max + 1)

    def weights(self) -> np.ndarray:
        if self.kind is InitialKind.NUMBER:
            return np.ones(1)
        return poisson_weights(self.alpha_sq, self.n_max)

    def coefficients(self) -> np.ndarray:
        """Complex initial amplitudes a(0) for each orbital in ``orbitals``."""
        if self.kind is InitialKind.NUMBER:
            return np.ones(1, dtype=complex)
        k = self.orbitals
        return np.sqrt(self.weights()) * np.exp(1j * self.phase * k)

    def truncation_deficit(self) -> float:
        """Poisson weight beyond n_max."""
        if self.kind is InitialKind.NUMBER:
            return 0.0
        return poisson_tail(self.alpha_sq, self.n_max)

    def check_truncation(self) -> float:
        deficit = self.truncation_deficit()
        if deficit > TRUNCATION_LIMIT:
            raise TruncationError(
                f"n_max={self.n_max} leaves Poisson weight {deficit:.3e} > {TRUNCATION_LIMIT:g}"
            )
        return deficit

    def blocks(self, mapping: Mapping) -> list[int]:
        """Block indices (see :mod:`diracjc.model`) matching ``orbitals``."""
        shift = 0 if mapping is Mapping.JC else -1
        return [int(k) + shift for k in self.orbitals]

    def mean_quanta(self) -> float:
        if self.kind is InitialKind.NUMBER:
            return float(self.n)
        return self.alpha_sq


def default_n_max(alpha_sq: float) -> int:
    return math.ceil(alpha_sq + 10.0 * math.sqrt(alpha_sq) + 20.0)


def _log_poisson(alpha_sq, k):
    k = np.asarray(k, dtype=float)
    if alpha_sq == 0.0:
        return np.where(k == 0, 0.0, -np.inf)
    lg = np.array([math.lgamma(x + 1.0) for x in np.atleast_1d(k)]).reshape(k.shape)
    return k * math.log(alpha_sq) - alpha_sq - lg


def poisson_weights(alpha_sq: float, n_max: int) -> np.ndarray:
    """e^{-|alpha|^2} |alpha|^{2n} / n! for n = 0..n_max."""
    return np.exp(_log_poisson(alpha_sq, np.arange(n_max + 1)))


def poisson_tail(alpha_sq: float, n_max: int) -> float:
    """Sum of the Poisson weights above n_max, summed directly (no 1 - sum)."""
    total = 0.0
    k = n_max + 1
    while True:
        term = float(np.exp(_log_poisson(alpha_sq, k)))
        total += term
        if term <= 1e-18 * total or term == 0.0:
            if k > alpha_sq:
                return total
        k += 1


@dataclass(frozen=True)
class SpinDensityMatrix:
    rho_uu: float | np.ndarray
    rho_dd: float | np.ndarray
    rho_ud: complex | np.ndarray

    def eigenvalues(self):
        """(mu_minus, mu_plus); mu_minus via det/mu_plus to avoid cancellation."""
        tr = self.rho_uu + self.rho_dd
        radius = np.sqrt(0.25 * (self.rho_uu - self.rho_dd) ** 2 + np.abs(self.rho_ud) ** 2)
        mu_plus = 0.5 * tr + radius
        det = self.rho_uu * self.rho_dd - np.abs(self.rho_ud) ** 2
        safe = np.where(mu_plus > 0, mu_plus, 1.0)
        mu_minus = np.where(mu_plus > 0, det / safe, 0.0)
        return mu_minus, mu_plus

    def matrix(self) -> np.ndarray:
        return np.array([[self.rho_uu, self.rho_ud], [np.conj(self.rho_ud), self.rho_dd]])


def _xlogx(mu, log):
    mu = np.asarray(mu, dtype=float)
    safe = np.where(mu > 0, mu, 1.0)
    return np.where(mu > 0, mu * log(safe), 0.0)


def von_neumann_entropy(rho: SpinDensityMatrix, base: float = 2.0):
    """Entropy -sum mu log mu of the spin reduced density matrix (bits by default)."""
    mu_minus, mu_plus = rho.eigenvalues()
    slack = 1e-12
    if np.any(mu_minus < -slack) or np.any(mu_plus > 1 + slack):
        raise DomainError("density matrix eigenvalues outside [0, 1]")
    mu_minus = np.clip(mu_minus, 0.0, 1.0)
    mu_plus = np.clip(mu_plus, 0.0, 1.0)
    out = -(_xlogx(mu_minus, np.log) + _xlogx(mu_plus, np.log)) / math.log(base)
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def _orbital_values(n, mapping: Mapping):
    """Signed orbital angular momentum of the up and down partners of block n."""
    if mapping is Mapping.JC:
        return n, n + 1
    return -(n + 1), -n


def expectations_number(state: SubspaceState, mapping: Mapping = Mapping.JC):
    """(sz, lz, jz) in units of hbar for one unit-normalised block."""
    pa = np.abs(state.a) ** 2
    pb = np.abs(state.b) ** 2
    up, down = _orbital_values(state.n, mapping)
    sz = 0.5 * (pa - pb)
    lz = up * pa + down * pb
    return sz, lz, sz + lz


def expectations_coherent(states: Sequence[SubspaceState], init: InitialState,
                          mapping: Mapping = Mapping.JC):
    """Poisson-weighted (sz, lz, jz) over unit-normalised blocks."""
    weights = init.weights()
    if len(states) != len(weights):
        raise ValueError(f"expected {len(weights)} blocks, got {len(states)}")
    if init.kind is InitialKind.COHERENT:
        init.check_truncation()
    sz = lz = 0.0
    for w, state in zip(weights, states):
        s, l, _ = expectations_number(state, mapping)
        sz = sz + w * s
        lz = lz + w * l
    return sz, lz, sz + lz


def orbital_components(states: Sequence[SubspaceState], init: InitialState, mapping: Mapping):
    """Full-state amplitudes on |up, k> and |down, k> indexed by orbital k.

    Returns ``(up, down)`` arrays of shape ``(n_orbitals + 1, ...)``.
    """
    coefs = init.coefficients()
    blocks = init.blocks(mapping)
    size = max(init.orbitals) + 2
    sample = np.asarray(states[0].a)
    up = np.zeros((size,) + sample.shape, dtype=complex)
    down = np.zeros_like(up)
    for c, n, state in zip(coefs, blocks, states):
        if state.n != n:
            raise ValueError(f"block {state.n} does not match orbital ordering (expected {n})")
        k_up, k_down = (n, n + 1) if mapping is Mapping.JC else (n + 1, n)
        up[k_up] += c * state.a
        if k_down >= 0:
            down[k_down] += c * state.b
    return up, down


def reduced_density(states: Sequence[SubspaceState], init: InitialState,
                    mapping: Mapping = Mapping.JC) -> SpinDensityMatrix:
    """Trace out the orbital degree of freedom."""
    up, down = orbital_components(states, init, mapping)
    rho_uu = np.sum(np.abs(up) ** 2, axis=0)
    rho_dd = np.sum(np.abs(down) ** 2, axis=0)
    rho_ud = np.sum(up * np.conj(down), axis=0)
    if rho_uu.ndim == 0:
        return SpinDensityMatrix(float(rho_uu), float(rho_dd), complex(rho_ud))
    return SpinDensityMatrix(rho_uu, rho_dd, rho_ud)


@dataclass
class ObservableSeries:
    times: np.ndarray
    sz: np.ndarray
    lz: np.ndarray
    jz: np.ndarray
    entropy: np.ndarray
    norm: np.ndarray
    energy_plus: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        length = len(self.times)
        for name in ("sz", "lz", "jz", "entropy", "norm"):
            if len(getattr(self, name)) != length:
                raise ValueError(f"column {name} has the wrong length")

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "t": self.times,
            "sz": self.sz,
            "lz": self.lz,
            "jz": self.jz,
            "entropy": self.entropy,
            "norm": self.norm,
        }


def observable_series(states: Sequence[SubspaceState], init: InitialState,
                      mapping: Mapping = Mapping.JC) -> ObservableSeries:
    """Assemble every observable column from block trajectories."""
    sz, lz, jz = expectations_coherent(states, init, mapping)
    rho = reduced_density(states, init, mapping)
    norm = rho.rho_uu + rho.rho_dd
    normalised = SpinDensityMatrix(rho.rho_uu / norm, rho.rho_dd / norm, rho.rho_ud / norm)
    entropy = von_neumann_entropy(normalised)
    times = np.asarray(states[0].t, dtype=float)
    return ObservableSeries(
        times=times,
        sz=np.asarray(sz, dtype=float),
        lz=np.asarray(lz, dtype=float),
        jz=np.asarray(jz, dtype=float),
        entropy=np.asarray(entropy, dtype=float),
        norm=np.asarray(norm, dtype=float),
    )
