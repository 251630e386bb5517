from .cases import REGISTRY, TOP_LEVEL
from .engine import (
    apply_case,
    dispatch_delta_case,
    embed_constructive,
    execute_reduction,
    pad_tree_to_order,
    peel_low_degree,
    select_z,
)
from .model import CaseTrace, Instance, ReductionPlan

__all__ = [
    "REGISTRY",
    "TOP_LEVEL",
    "CaseTrace",
    "Instance",
    "ReductionPlan",
    "apply_case",
    "dispatch_delta_case",
    "embed_constructive",
    "execute_reduction",
    "pad_tree_to_order",
    "peel_low_degree",
    "select_z",
]
