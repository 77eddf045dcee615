"""Action signal and node name definitions for the member pipeline."""

from enum import Enum


class PipelineNode(str, Enum):
    """
    Node names for the member pipeline graph.

    Using an enum keeps nodes, transitions and the graph definition consistent.
    """

    BUILD_SCENARIO = "build_scenario"
    SOLVE_BASELINE = "solve_baseline"
    SOLVE_MULTIPATH = "solve_multipath"
    INTEGRATE_DYNAMICS = "integrate_dynamics"
    ASSESS = "assess"


class ActionSignal(str, Enum):
    """
    Signals emitted by the nodes and consumed by the transition functions.

    Graph Flow:
    - BUILD_SCENARIO -> SCENARIO_BUILT
    - SOLVE_BASELINE -> BASELINE_SOLVED
    - SOLVE_MULTIPATH -> MULTIPATH_SOLVED
    - INTEGRATE_DYNAMICS -> DYNAMICS_INTEGRATED
    - ASSESS -> ASSESSED
    """

    SCENARIO_BUILT = "scenario_built"
    BASELINE_SOLVED = "baseline_solved"
    MULTIPATH_SOLVED = "multipath_solved"
    DYNAMICS_INTEGRATED = "dynamics_integrated"
    ASSESSED = "assessed"
