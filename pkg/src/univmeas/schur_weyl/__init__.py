"""Schur-Weyl decomposition of tensor powers: combinatorics, projectors, spin oracle."""

from .combinatorics import (
    CycleType,
    Partition,
    conjugacy_classes,
    cycle_type,
    hook_dim,
    hook_lengths,
    mn_character,
    partitions,
    weyl_dim,
)
from .operators import (
    MAX_N,
    IsotypicPvm,
    PermutationOperator,
    class_operators,
    commutes_with_tensor_power,
    isotypic_pvm,
    permutation_operator,
)
from .spin import coupled_multiplets, spin_coupling_pvm

__all__ = [
    "MAX_N",
    "CycleType",
    "IsotypicPvm",
    "Partition",
    "PermutationOperator",
    "class_operators",
    "commutes_with_tensor_power",
    "conjugacy_classes",
    "coupled_multiplets",
    "cycle_type",
    "hook_dim",
    "hook_lengths",
    "isotypic_pvm",
    "mn_character",
    "partitions",
    "permutation_operator",
    "spin_coupling_pvm",
    "weyl_dim",
]
