"""Member state carried through the pipeline graph."""

from typing import Optional, TypedDict

from app.models.allocation import SolverReport
from app.models.dynamics import Trajectory
from app.models.experiment import ExperimentConfig
from app.models.network import Network
from app.models.stability import StabilityReport


class MemberState(TypedDict, total=False):
    """
    State of one ensemble member.

    Graph Flow:
    - BUILD_SCENARIO: builds the network from the scenario with the member seed
    - SOLVE_BASELINE: single-path equilibrium x*
    - SOLVE_MULTIPATH: multipath equilibrium for constant traffic
    - INTEGRATE_DYNAMICS: fluid dynamics under bursty traffic
    - ASSESS: stability report
    """

    # Input data
    config: ExperimentConfig
    run_id: int
    seed: int

    # Agent control
    action_signal: str

    # Intermediate results
    network: Network
    baseline: SolverReport
    multipath: Optional[SolverReport]
    trajectory: Optional[Trajectory]

    # Output
    report: StabilityReport
