"""Exact combinatorics of stationary AF-actions of fusion categories."""

from .bratteli import (
    BratteliDiagram,
    decide_simplicity,
    diagram_for_A,
    diagram_for_BY,
    telescope,
    trace_data,
)
from .fusion import (
    FusionRing,
    StructureError,
    fusion_matrix,
    strong_generator,
    tensor_power_decomposition,
    verify_ring,
)
from .module import (
    BimoduleAction,
    ModuleData,
    hom_dimension,
    indecomposable,
    power_decomposition_defect,
    regular_module,
    verify_action,
)
from .multimatrix import (
    MultiMatrixInclusion,
    MultiMatrixShape,
    brute_force_commutant,
    by_shape,
    central_capacity,
    embedding_feasible,
    inclusion_between_levels,
    relative_commutant_shape,
)
from .pf import fp_dimension
from .stability import INCONCLUSIVE, Z_STABLE, analyze, d_stability_note

__version__ = "0.1.0"
