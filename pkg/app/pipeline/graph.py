"""Member pipeline graph definition using LangGraph.

Graph Flow:
    START -> build_scenario -> solve_baseline
    solve_baseline -> [solve_multipath | integrate_dynamics]
    solve_multipath -> assess
    integrate_dynamics -> assess
    assess -> END
"""

import time
from functools import wraps
from typing import Callable

from langgraph.graph import END, START, StateGraph
from langgraph.graph.state import CompiledStateGraph

from app.config import get_logger
from app.pipeline.nodes import (
    assess_node,
    build_scenario_node,
    integrate_dynamics_node,
    solve_baseline_node,
    solve_multipath_node,
)
from app.pipeline.signals import PipelineNode
from app.pipeline.state import MemberState
from app.pipeline.transitions import route_after_baseline
from app.utils import SingletonMeta

logger = get_logger(__name__)


def with_timing(
    node_func: Callable[[MemberState], dict],
) -> Callable[[MemberState], dict]:
    """
    Decorator that logs how long a node took for the current member.

    Args:
        node_func: The node function to wrap

    Returns:
        Wrapped function that logs its duration
    """

    @wraps(node_func)
    def wrapper(state: MemberState) -> dict:
        started = time.perf_counter()
        result = node_func(state)
        logger.debug(
            f"Run {state.get('run_id')}: {node_func.__name__} took "
            f"{time.perf_counter() - started:.3f}s"
        )
        return result

    return wrapper


class MemberGraph(metaclass=SingletonMeta):
    """Singleton for the compiled member pipeline."""

    def __init__(self):
        """Initialize and compile the member pipeline."""
        logger.info("Creating member pipeline graph...")
        self.graph = self._create_graph()
        logger.info("Member pipeline graph created successfully")

    def _create_graph(self) -> CompiledStateGraph:
        graph = StateGraph(MemberState)

        graph.add_node(PipelineNode.BUILD_SCENARIO, with_timing(build_scenario_node))
        graph.add_node(PipelineNode.SOLVE_BASELINE, with_timing(solve_baseline_node))
        graph.add_node(PipelineNode.SOLVE_MULTIPATH, with_timing(solve_multipath_node))
        graph.add_node(
            PipelineNode.INTEGRATE_DYNAMICS, with_timing(integrate_dynamics_node)
        )
        graph.add_node(PipelineNode.ASSESS, with_timing(assess_node))

        graph.add_edge(START, PipelineNode.BUILD_SCENARIO)
        graph.add_edge(PipelineNode.BUILD_SCENARIO, PipelineNode.SOLVE_BASELINE)

        # solve_baseline -> solve_multipath | integrate_dynamics
        graph.add_conditional_edges(
            PipelineNode.SOLVE_BASELINE,
            route_after_baseline,
            {
                PipelineNode.SOLVE_MULTIPATH: PipelineNode.SOLVE_MULTIPATH,
                PipelineNode.INTEGRATE_DYNAMICS: PipelineNode.INTEGRATE_DYNAMICS,
            },
        )

        graph.add_edge(PipelineNode.SOLVE_MULTIPATH, PipelineNode.ASSESS)
        graph.add_edge(PipelineNode.INTEGRATE_DYNAMICS, PipelineNode.ASSESS)
        graph.add_edge(PipelineNode.ASSESS, END)

        compiled = graph.compile()
        logger.info("Graph compiled successfully")
        return compiled

    def get_graph(self) -> CompiledStateGraph:
        """
        Get the compiled member pipeline.

        Returns:
            Compiled StateGraph instance
        """
        return self.graph
