"""Transition routing functions for the member pipeline."""

from typing import Literal

from app.config import get_logger
from app.pipeline.signals import PipelineNode
from app.pipeline.state import MemberState

logger = get_logger(__name__)


def route_after_baseline(
    state: MemberState,
) -> Literal[PipelineNode.SOLVE_MULTIPATH, PipelineNode.INTEGRATE_DYNAMICS]:
    """
    Route after SOLVE_BASELINE.

    Routes to:
    - SOLVE_MULTIPATH: constant traffic, the equilibrium is computed directly
    - INTEGRATE_DYNAMICS: bursty traffic, the controller is simulated

    Args:
        state: Current member state

    Returns:
        Next node name
    """
    if state["config"].traffic.variant == "constant":
        logger.debug(f"Run {state['run_id']}: routing to SOLVE_MULTIPATH")
        return PipelineNode.SOLVE_MULTIPATH

    logger.debug(f"Run {state['run_id']}: routing to INTEGRATE_DYNAMICS")
    return PipelineNode.INTEGRATE_DYNAMICS
