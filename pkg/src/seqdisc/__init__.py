"""Sequential conclusive discrimination of binary coherent states via
atom-probe indirect measurements, with success-probability optimization."""

from .discrimination import (
    DiscriminationProblem,
    fields_baseline,
    helstrom_bound,
    overlap,
    success_probability,
    success_probability_series,
)
from .fock import FockVector, coherent, default_dim, inner, norm_sq, poisson_tail
from .jc import (
    AtomState,
    JointVector,
    ReceiverParams,
    extract_kraus,
    jc_unitary_apply,
    kraus_apply,
    pointer_state,
)
from .optimize import (
    OptimizationResult,
    OptimizerOptions,
    optimize_success,
    powell_minimize,
)

__all__ = [
    "AtomState",
    "DiscriminationProblem",
    "FockVector",
    "JointVector",
    "OptimizationResult",
    "OptimizerOptions",
    "ReceiverParams",
    "coherent",
    "default_dim",
    "extract_kraus",
    "fields_baseline",
    "helstrom_bound",
    "inner",
    "jc_unitary_apply",
    "kraus_apply",
    "norm_sq",
    "optimize_success",
    "overlap",
    "pointer_state",
    "poisson_tail",
    "powell_minimize",
    "success_probability",
    "success_probability_series",
]
