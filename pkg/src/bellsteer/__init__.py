"""Bell expressions, no-signaling rewritings and steering-saturation checks."""
from .scenario import (CHSH_SCENARIO, Behavior, BellExpression, Scenario, evaluate, format_table,
                       local_bound, parse_table, swap_parties, table_from_rows)
from .nsalgebra import ns_constant_by_stencil, ns_constant_value, ns_equivalent
from .quantum import Realization, behavior_of, effective_operator, steered_state
from .ow import OWReport, ow_game_search, ow_report, solve_gamma
from .seesaw import seesaw_maximize

__all__ = [
    "CHSH_SCENARIO", "Behavior", "BellExpression", "Scenario", "evaluate", "format_table",
    "local_bound", "parse_table", "swap_parties", "table_from_rows",
    "ns_constant_by_stencil", "ns_constant_value", "ns_equivalent",
    "Realization", "behavior_of", "effective_operator", "steered_state",
    "OWReport", "ow_game_search", "ow_report", "solve_gamma", "seesaw_maximize",
]
