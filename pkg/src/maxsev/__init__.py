"""Simulation and verification tools for max-semi-stable laws, semi-selfsimilar
extremal processes and the stationary max-AR(1) recursion."""
from .errors import (
    ConvergenceError,
    DomainError,
    InvalidLaw,
    InvalidModel,
    InvalidPeriod,
    MaxsevError,
    NonMonotoneTail,
    NonMonotoneTimes,
    NonPositive,
    PeriodMismatch,
    TooFewSamples,
    ValidationError,
)
from .law import CofactorCheck, IdentityReport, SemiStableLaw, check_max_semi_sd, check_semi_stable_identity
from .maxar import (
    InnovationLaw,
    MaxARModel,
    build_model,
    check_innovation_consistency,
    check_marginal_stationarity_empirical,
    check_max_semi_sd_equivalence,
    check_stationarity_identity,
    simulate,
)
from .periodic import FRECHET, WEIBULL, PeriodicFn, ValidationReport, validate
from .process import ExtremalProcess, SemiSSReport, check_semi_ss, check_ss, natural_scaling
from .stats import EmpiricalCDF, KSReport, ks_one_sample, ks_two_sample

__version__ = "0.1.0"
