"""Shift spaces, sliding block codes and deciders for retracts and continuing codes."""

from .codes import CodedPair, Decision, SlidingBlockCode, apply, image, is_injective
from .constructions import (
    RecodedCode,
    SqrtPair,
    bicontinuing_recode,
    build_sofic_example,
    retract_zero_recode,
    no_retract_witness,
    repair_lift,
    sqrt_construction,
)
from .lasso import LassoPoint
from .resolving import (
    KBoundReport,
    RetractVerdict,
    check_left_retract,
    check_retract,
    is_left_eresolving,
    is_right_continuing_sft,
    is_right_eresolving,
    minimal_left_retract,
    minimal_retract,
    oracle_retract,
    verify_step_bound,
)
from .shifts import Presentation, SftSpec, from_forbidden, is_sft, language, step_of

__all__ = [
    "CodedPair", "Decision", "KBoundReport", "LassoPoint", "Presentation", "RecodedCode",
    "RetractVerdict", "SftSpec", "SlidingBlockCode", "SqrtPair", "apply", "bicontinuing_recode",
    "build_sofic_example", "check_left_retract", "check_retract", "from_forbidden", "image",
    "is_injective", "is_left_eresolving", "is_right_continuing_sft", "is_right_eresolving",
    "is_sft", "language", "minimal_left_retract", "minimal_retract", "oracle_retract",
    "retract_zero_recode", "no_retract_witness", "repair_lift", "sqrt_construction",
    "step_of", "verify_step_bound",
]
