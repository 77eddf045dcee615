"""Node functions of the member pipeline.

Each node reads what it needs from the member state and returns the keys it adds.
Errors propagate to the caller, which records them against the member.
"""

from app.config import get_logger
from app.models.network import MAX_SEED
from app.pipeline.signals import ActionSignal
from app.pipeline.state import MemberState
from app.services.dynamics_service import integrate
from app.services.equilibrium_service import (
    Aggregation,
    solve_baseline,
    solve_multipath,
)
from app.services.scenario_service import build_scenario
from app.services.stability_service import assess, assess_time_varying

logger = get_logger(__name__)

AGGREGATION_BY_CONTROLLER = {
    "coupled": Aggregation.SOURCE,
    "uncoupled": Aggregation.PATH,
}


def build_scenario_node(state: MemberState) -> dict:
    cfg = state["config"]
    spec = cfg.scenario.model_copy(update={"seed": state["seed"] % MAX_SEED})
    return {
        "network": build_scenario(spec),
        "action_signal": ActionSignal.SCENARIO_BUILT.value,
    }


def solve_baseline_node(state: MemberState) -> dict:
    cfg = state["config"]
    report = solve_baseline(
        state["network"],
        cfg.solver.tolerance,
        max_iterations=cfg.solver.max_iterations,
    )
    return {"baseline": report, "action_signal": ActionSignal.BASELINE_SOLVED.value}


def solve_multipath_node(state: MemberState) -> dict:
    """
    Multipath equilibrium for the configured controller.

    The single-path controller has no multipath equilibrium of its own; its rest
    point is the baseline.
    """
    cfg = state["config"]
    variant = cfg.controller.variant
    if variant == "single_path":
        report = state["baseline"]
    else:
        report = solve_multipath(
            state["network"],
            cfg.stability.eps,
            cfg.solver.tolerance,
            aggregation=AGGREGATION_BY_CONTROLLER[variant],
            max_iterations=cfg.solver.max_iterations,
        )
    return {
        "multipath": report,
        "action_signal": ActionSignal.MULTIPATH_SOLVED.value,
    }


def integrate_dynamics_node(state: MemberState) -> dict:
    cfg = state["config"]
    trajectory = integrate(
        cfg.controller,
        state["network"],
        cfg.dynamics.horizon,
        cfg.dynamics.dt,
        cfg.dynamics.tolerance,
        traffic=cfg.traffic,
        eps=cfg.stability.eps,
        config=cfg.dynamics,
    )
    return {
        "trajectory": trajectory,
        "action_signal": ActionSignal.DYNAMICS_INTEGRATED.value,
    }


def assess_node(state: MemberState) -> dict:
    cfg = state["config"]
    network = state["network"]
    baseline = state["baseline"].allocation

    trajectory = state.get("trajectory")
    if trajectory is not None:
        report = assess_time_varying(network, baseline, trajectory, cfg.stability)
    else:
        report = assess(
            network, baseline, state["multipath"].allocation, cfg.stability
        )

    logger.info(f"Run {state['run_id']}: {report.classification.value}")
    return {"report": report, "action_signal": ActionSignal.ASSESSED.value}
