from .brush import BrushResult, brush_allocation, brush_number, brush_residency
from .erika import ResidencyReport, erika_residency_report
from .formulas import (
    ArgumentError,
    allocation_size_for,
    blend_count_oracle,
    closed_form_tau,
    min_additional_primaries,
    oracle_min_additional,
    tree_brush_number,
)
from .search import INF, MODES, OrientationSearch, orientation_lower_bound
from .tau import DEFAULT_MODE, Budget, TauResult, TauWitness, tau, tau_for_orientation

__all__ = [
    "ArgumentError",
    "BrushResult",
    "Budget",
    "DEFAULT_MODE",
    "INF",
    "MODES",
    "OrientationSearch",
    "ResidencyReport",
    "TauResult",
    "TauWitness",
    "allocation_size_for",
    "blend_count_oracle",
    "brush_allocation",
    "brush_number",
    "brush_residency",
    "closed_form_tau",
    "erika_residency_report",
    "min_additional_primaries",
    "oracle_min_additional",
    "orientation_lower_bound",
    "tau",
    "tau_for_orientation",
    "tree_brush_number",
]
