"""Time-dependent Dirac oscillator through its Jaynes-Cummings mapping."""

from .dynamics import (
    SubspaceState,
    asymptotic_exponential,
    evolve_analytic,
    evolve_constant,
    evolve_exponential,
    evolve_numeric,
    evolve_weyl,
)
from .errors import (
    ConfigError,
    ConservationError,
    ConvergenceError,
    DiracJCError,
    DomainError,
    NoAnalyticBackend,
    SeriesConvergenceError,
    StepSizeUnderflow,
    TruncationError,
    ValidationFailure,
)
from .integrator import IntegratorSettings
from .model import (
    CouplingParams,
    Dimension,
    Mapping,
    ModelConfig,
    Modulation,
    ModulationKind,
    conserved_charge,
    derive_coupling,
    instantaneous_energy,
)
from .observables import (
    InitialKind,
    InitialState,
    ObservableSeries,
    SpinDensityMatrix,
    expectations_coherent,
    expectations_number,
    observable_series,
    reduced_density,
    von_neumann_entropy,
)
from .scenario import Backend, Scenario
from .simulate import energy_table, run, validate
from .specfun import bessel_j, gamma, log_gamma

__version__ = "0.1.0"
