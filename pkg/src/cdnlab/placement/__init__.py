"""Replica-server placement algorithms."""
from cdnlab.placement.greedy import (
    ENUMERATION_CAP,
    EnumerationCapError,
    backtracking_greedy,
    brute_force_optimal,
    greedy_placement,
    transit_node_placement,
)
from cdnlab.placement.kcenter import (
    kcenter_for_diameter_result,
    min_kcenter_2approx,
    min_kcenter_count_for_diameter,
)
from cdnlab.placement.khst import (
    PartitionNode,
    PartitionTree,
    build_khst,
    check_tree,
    khst_centers_by_budget,
    khst_centers_by_diameter,
    one_center,
)
from cdnlab.placement.problem import (
    PlacementError,
    PlacementProblem,
    PlacementResult,
    max_radius,
    parse_demands,
    total_cost,
)

__all__ = [
    "ENUMERATION_CAP",
    "EnumerationCapError",
    "PartitionNode",
    "PartitionTree",
    "PlacementError",
    "PlacementProblem",
    "PlacementResult",
    "backtracking_greedy",
    "brute_force_optimal",
    "build_khst",
    "check_tree",
    "greedy_placement",
    "kcenter_for_diameter_result",
    "khst_centers_by_budget",
    "khst_centers_by_diameter",
    "max_radius",
    "min_kcenter_2approx",
    "min_kcenter_count_for_diameter",
    "one_center",
    "parse_demands",
    "total_cost",
    "transit_node_placement",
]
