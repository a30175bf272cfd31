"""Zeros of sums of Dirichlet series in the half-plane of absolute convergence.

Euler-product and Euler-Maclaurin evaluation of L-functions, disc bounds
for combinations L(s) + L(2s) + ... + L(Ns), argument-principle zero
counting, curve geometry for zeta^k(2s) + zeta^k(3s), and a desk-scale
fixed-point twist construction.
"""
from .characters import DirichletCharacter, character_from_json, character_from_table
from .combo import ComboSpec, eval_F, eval_tail, lemma_disc_check, N2_log_bound
from .errors import (
    BoundaryZeroError,
    DomainError,
    FormulaMismatchError,
    InvariantViolation,
    LZerosError,
    NonConvergenceError,
    PartitionError,
    PrecisionError,
    ValidationError,
)
from .lfunc import (
    EvalResult,
    LFunctionSpec,
    dirichlet_spec,
    eval_L,
    eval_L_direct,
    eval_log_L,
    zeta_power_spec,
    zeta_spec,
)
from .zeros import ComboEvaluator, Rectangle, ZeroReport, hunt_zeros, newton_polish, winding_count

__version__ = "0.1.0"

__all__ = [
    "DirichletCharacter",
    "character_from_json",
    "character_from_table",
    "ComboSpec",
    "eval_F",
    "eval_tail",
    "lemma_disc_check",
    "N2_log_bound",
    "BoundaryZeroError",
    "DomainError",
    "FormulaMismatchError",
    "InvariantViolation",
    "LZerosError",
    "NonConvergenceError",
    "PartitionError",
    "PrecisionError",
    "ValidationError",
    "EvalResult",
    "LFunctionSpec",
    "dirichlet_spec",
    "eval_L",
    "eval_L_direct",
    "eval_log_L",
    "zeta_power_spec",
    "zeta_spec",
    "ComboEvaluator",
    "Rectangle",
    "ZeroReport",
    "hunt_zeros",
    "newton_polish",
    "winding_count",
]
