"""Member pipeline package: one ensemble member as a LangGraph state graph."""

from app.pipeline.graph import MemberGraph
from app.pipeline.signals import ActionSignal, PipelineNode
from app.pipeline.state import MemberState
from app.pipeline.transitions import route_after_baseline

__all__ = [
    "MemberGraph",
    "MemberState",
    "ActionSignal",
    "PipelineNode",
    "route_after_baseline",
]
