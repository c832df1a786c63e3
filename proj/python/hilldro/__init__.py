"""Distant retrograde orbits of the planar Hill problem."""

from ._core import (
    CASE3_PERIODIC,
    CASE3_PERIODIC_T,
    TEST_CASES,
    CartesianState,
    ConvergenceError,
    DomainError,
    IntegratorConfig,
    ModelParams,
    ReducedState,
    SecularState,
    SingularityError,
    differential_correct,
    direct_correct,
    elliptic_constants,
    ellipse_frame,
    evaluate_model,
    from_reduced,
    hamiltonian,
    hamiltonian6,
    hamiltonian8,
    inverse_correct,
    libration_frequency,
    libration_period,
    lindstedt_period,
    monodromy,
    periodicity_error,
    periods6,
    propagate,
    to_reduced,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
