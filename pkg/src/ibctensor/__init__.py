"""Complexity and tractability of (anti)symmetric tensor product problems.

Submodules ``tractability``, ``weights`` and ``sobolev`` are imported explicitly.
"""

from .complexity import (
    avg_tail_error,
    info_complexity,
    initial_error,
    minimal_error,
    optimal_algorithm_plan,
    trace_bounds,
)
from .errors import (
    ComplexityOverflow,
    DegenerateProblem,
    Divergent,
    EmptyIndexSet,
    GroupTooLarge,
    IBCError,
    IndexLengthMismatch,
    InvalidTau,
    NegativeVariance,
    NotTraceClass,
    OddPExact,
    OutOfDomain,
    TrivialSpectrum,
    Undecidable,
)
from .spectrum import (
    Finite,
    Geometric,
    LogDecay,
    PowerLaw,
    Sobolev,
    ell_tau_member,
    ell_tau_norm,
    power_sum,
    spectrum_from_json,
    spt_exponent,
)
from .tensor_enum import (
    Criterion,
    EnumItem,
    Kind,
    ProblemSpec,
    SymmetrySpec,
    count_above,
    enumerate_top,
    multiplicity_factor,
    nabla_contains,
    product_eigenvalue,
    symmetrizer_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "avg_tail_error",
    "ComplexityOverflow",
    "count_above",
    "Criterion",
    "DegenerateProblem",
    "Divergent",
    "ell_tau_member",
    "ell_tau_norm",
    "EmptyIndexSet",
    "enumerate_top",
    "EnumItem",
    "Finite",
    "Geometric",
    "GroupTooLarge",
    "IBCError",
    "IndexLengthMismatch",
    "info_complexity",
    "initial_error",
    "InvalidTau",
    "Kind",
    "LogDecay",
    "minimal_error",
    "multiplicity_factor",
    "nabla_contains",
    "NegativeVariance",
    "NotTraceClass",
    "OddPExact",
    "optimal_algorithm_plan",
    "OutOfDomain",
    "power_sum",
    "PowerLaw",
    "ProblemSpec",
    "product_eigenvalue",
    "Sobolev",
    "spectrum_from_json",
    "spt_exponent",
    "symmetrizer_coefficients",
    "SymmetrySpec",
    "trace_bounds",
    "TrivialSpectrum",
    "Undecidable",
]
