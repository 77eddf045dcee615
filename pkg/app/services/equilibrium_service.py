"""Network utility maximisation: baseline and multipath equilibria, brute-force oracle.

The solver is projected gradient ascent on path rates. Each iteration tries the
larger of the diminishing step a/(b+k) and a Barzilai-Borwein step, then backtracks
along the projection arc until the Armijo condition holds, so the objective does
not decrease beyond rounding. Convergence is measured by the natural residual
|r - P(r + grad f(r))|, which vanishes exactly at KKT points.
"""

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from app.config import get_logger, settings
from app.errors import (
    DomainError,
    Infeasible,
    InfeasibleFloor,
    InvalidSpec,
    NoConvergence,
    TooLarge,
)
from app.models.allocation import RateAllocation, SolverReport
from app.models.arrays import NetworkArrays
from app.models.network import Network
from app.services.utility_service import utility_gradients, utility_values
from app.utils.projection import CapacityProjector, FloorProjector

logger = get_logger(__name__)

BASELINE_FLOOR_FRACTION = 1e-9
ARMIJO = 1e-4
MAX_BACKTRACKS = 60
MAX_DOMAIN_HALVINGS = 200
MAX_STEP = 1e12
ROUNDING_ULPS = 8


class Aggregation(str, Enum):
    """How path rates enter the utilities."""

    SOURCE = "source"  # U_x(r_x): coupled multipath
    PATH = "path"  # U_x(r_p) per path: uncoupled multipath


@dataclass
class NetworkObjective:
    """
    Objective over the active paths of a network.

    value(r) = sum of utilities - sum_p gamma_x e_p r_p + barrier * sum_l log(c_l - load_l)

    ``value`` accepts a single point or a batch of points (last axis = active paths).
    """

    arrays: NetworkArrays
    active: np.ndarray
    aggregation: Aggregation = Aggregation.SOURCE
    barrier: float = 0.0
    weight_multipliers: Optional[np.ndarray] = None

    _weights: np.ndarray = field(init=False, repr=False)
    _routing: np.ndarray = field(init=False, repr=False)
    _membership: np.ndarray = field(init=False, repr=False)
    _owner: np.ndarray = field(init=False, repr=False)
    _energy: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        multipliers = (
            np.ones(len(self.arrays.source_ids))
            if self.weight_multipliers is None
            else np.asarray(self.weight_multipliers, dtype=float)
        )
        self._weights = self.arrays.weights * multipliers
        self._routing = self.arrays.routing[:, self.active]
        self._membership = self.arrays.membership[:, self.active]
        self._owner = self.arrays.path_source[self.active]
        self._energy = self.arrays.path_energy_weights[self.active]

    def value(self, r: np.ndarray) -> np.ndarray:
        a = self.arrays
        if self.aggregation == Aggregation.SOURCE:
            totals = r @ self._membership.T
            utility = utility_values(a.alphas, self._weights, totals).sum(axis=-1)
        else:
            owner = self._owner
            utility = utility_values(a.alphas[owner], self._weights[owner], r).sum(
                axis=-1
            )
        value = utility - r @ self._energy
        if self.barrier > 0:
            slack = a.capacities - r @ self._routing.T
            with np.errstate(divide="ignore", invalid="ignore"):
                safe = np.where(slack > 0, slack, 1.0)
                logs = np.where(slack > 0, np.log(safe), -np.inf)
            value = value + self.barrier * logs.sum(axis=-1)
        return value

    def gradient(self, r: np.ndarray) -> np.ndarray:
        a = self.arrays
        owner = self._owner
        if self.aggregation == Aggregation.SOURCE:
            argument = (self._membership @ r)[owner]
        else:
            argument = r
        grad = utility_gradients(a.alphas[owner], self._weights[owner], argument)
        grad = grad - self._energy
        if self.barrier > 0:
            slack = a.capacities - self._routing @ r
            grad = grad - self.barrier * (self._routing.T @ (1.0 / slack))
        return grad


class ProjectedGradientSolver:
    """
    Monotone projected gradient ascent over {A r <= c, r >= floor}.

    With a barrier the objective is -inf outside the open capacity polytope, so
    steps only project onto the floors and trial points outside the barrier domain
    are halved on their own budget.
    """

    def __init__(
        self,
        objective: NetworkObjective,
        floors: np.ndarray,
        tol: float,
        max_iterations: int,
        step_a: float = settings.SOLVER_STEP_A,
        step_b: float = settings.SOLVER_STEP_B,
    ):
        routing = objective.arrays.routing[:, objective.active]
        capacities = objective.arrays.capacities
        self.objective = objective
        self.floors = floors
        self.tol = tol
        self.max_iterations = max_iterations
        self.step_a = step_a
        self.step_b = step_b
        self.routing = routing
        self.capacities = capacities
        if objective.barrier > 0:
            self.step_projector = FloorProjector(floors)
            self.residual_projector = FloorProjector(floors)
        else:
            self.step_projector = CapacityProjector(routing, capacities, floors)
            self.residual_projector = CapacityProjector(routing, capacities, floors)

    def uniform_start(self) -> np.ndarray:
        """floor + equal mass: half the tightest per-path share of the remaining capacity."""
        counts = self.routing.sum(axis=1)
        used = counts > 0
        room = (self.capacities[used] - self.routing[used] @ self.floors) / counts[used]
        return self.floors + 0.5 * max(float(room.min()), 0.0)

    def residual(self, r: np.ndarray, grad: np.ndarray) -> float:
        return float(np.max(np.abs(r - self.residual_projector.project(r + grad))))

    def solve(self, start: np.ndarray) -> tuple[np.ndarray, int, float, list[float]]:
        """
        Run the ascent from a feasible start.

        Returns:
            tuple: (rates, iterations, natural residual, objective trace)
        """
        value, gradient = self.objective.value, self.objective.gradient
        r = start
        f = float(value(r))
        if not np.isfinite(f):
            raise Infeasible("objective is not finite at the start point")
        g = gradient(r)
        trace = [f]
        residual = self.residual(r, g)
        bb_step: Optional[float] = None
        k = 0

        while residual > self.tol and k < self.max_iterations:
            t = self.step_a / (self.step_b + k)
            if bb_step is not None:
                t = max(t, bb_step)

            # Below the rounding noise of f the increase cannot be measured; such
            # steps are accepted if f does not drop by more than that noise.
            noise = ROUNDING_ULPS * float(np.spacing(abs(f)))
            accepted = False
            backtracks = halvings = 0
            while backtracks < MAX_BACKTRACKS and halvings < MAX_DOMAIN_HALVINGS:
                candidate = self.step_projector.project(r + t * g)
                d = candidate - r
                f_new = float(value(candidate))
                t *= 0.5
                if not np.isfinite(f_new):
                    halvings += 1
                    continue
                gd = float(g @ d)
                if f_new >= f + max(ARMIJO * gd, 0.0) or (
                    gd <= noise and f_new >= f - noise
                ):
                    accepted = True
                    break
                backtracks += 1

            if not accepted or not np.any(d):
                logger.debug(
                    f"Ascent stalled at iteration {k} (residual {residual:.3e})"
                )
                break

            g_new = gradient(candidate)
            sy = float(d @ (g - g_new))
            bb_step = min(float(d @ d) / sy, MAX_STEP) if sy > 0 else None

            r, g, f = candidate, g_new, f_new
            trace.append(f)
            k += 1
            residual = self.residual(r, g)

        return r, k, residual, trace


def solve_baseline(
    net: Network,
    tol: Optional[float] = None,
    *,
    max_iterations: Optional[int] = None,
    barrier: float = 0.0,
    weight_multipliers: Optional[np.ndarray] = None,
) -> SolverReport:
    """
    Single-path equilibrium x*: every source confined to its primary path.

    Args:
        net: The network.
        tol: KKT residual tolerance (settings.SOLVER_TOLERANCE when omitted).
        max_iterations: Iteration cap (settings.SOLVER_MAX_ITERATIONS when omitted).
        barrier: Optional log-barrier strength; with beta > 0 the optimum is the rest
            point of the single-path fluid controller.
        weight_multipliers: Optional per-source multipliers of the utility weights.

    Returns:
        SolverReport: Allocation with zero rate on every non-primary path.

    Raises:
        NoConvergence: If the residual stays above tol.
    """
    arrays = NetworkArrays.from_network(net)
    active = arrays.primary.copy()
    floor = BASELINE_FLOOR_FRACTION * float(arrays.capacities.min())
    floors = np.full(int(active.sum()), floor)
    routing = arrays.routing[:, active]
    if np.any(routing @ floors > arrays.capacities):
        raise Infeasible("positivity floor exceeds a link capacity")

    objective = NetworkObjective(
        arrays, active, Aggregation.SOURCE, barrier, weight_multipliers
    )
    return _run(objective, floors, tol, max_iterations, mode="baseline")


def solve_multipath(
    net: Network,
    eps: float,
    tol: Optional[float] = None,
    *,
    aggregation: Aggregation = Aggregation.SOURCE,
    max_iterations: Optional[int] = None,
    barrier: float = 0.0,
    weight_multipliers: Optional[np.ndarray] = None,
) -> SolverReport:
    """
    Multipath equilibrium x^n over all paths with the floor r_p >= eps.

    Args:
        net: The network; every source needs at least two paths.
        eps: Rate floor on every path.
        tol: KKT residual tolerance.
        aggregation: SOURCE for U(r_x) (coupled), PATH for sum_p U(r_p) (uncoupled).
        max_iterations: Iteration cap.
        barrier: Optional log-barrier strength (rest point of the fluid controllers).
        weight_multipliers: Optional per-source multipliers of the utility weights.

    Returns:
        SolverReport: The multipath allocation.

    Raises:
        InvalidSpec: If a source has fewer than two paths.
        InfeasibleFloor: If the floors alone overload a link.
        NoConvergence: If the residual stays above tol.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    single = [s.id for s in net.sources if s.n_paths < 2]
    if single:
        raise InvalidSpec(f"multipath equilibrium needs >= 2 paths per source: {single}")

    arrays = NetworkArrays.from_network(net)
    active = np.ones(arrays.n_paths, dtype=bool)
    floors = np.full(arrays.n_paths, float(eps))
    floor_loads = arrays.routing @ floors
    overloaded = np.flatnonzero(floor_loads > arrays.capacities)
    if overloaded.size:
        link_id = arrays.link_ids[overloaded[0]]
        raise InfeasibleFloor(
            f"floor {eps} on {int(arrays.routing[overloaded[0]].sum())} paths exceeds "
            f"capacity of link {link_id}"
        )

    objective = NetworkObjective(
        arrays, active, Aggregation(aggregation), barrier, weight_multipliers
    )
    return _run(objective, floors, tol, max_iterations, mode="multipath")


def objective_value(
    net: Network,
    alloc: RateAllocation,
    aggregation: Aggregation = Aggregation.SOURCE,
    barrier: float = 0.0,
) -> float:
    """Objective of an allocation over all paths of the network."""
    arrays = NetworkArrays.from_network(net)
    objective = NetworkObjective(
        arrays, np.ones(arrays.n_paths, dtype=bool), Aggregation(aggregation), barrier
    )
    return float(objective.value(arrays.vector(alloc.rates)))


def brute_force_equilibrium(
    net: Network,
    grid_step: float,
    *,
    eps: float = 0.0,
    single_path: bool = False,
) -> RateAllocation:
    """
    Exhaustive grid search of the coupled objective over the capacity polytope.

    Grid values of a path are eps + k*grid_step up to the smallest capacity on the
    path. Ties keep the first point in lexicographic grid order.

    Args:
        net: Network with at most settings.BRUTE_FORCE_MAX_PATHS paths.
        grid_step: Grid spacing.
        eps: Floor of every searched path.
        single_path: Search primary paths only, other paths stay at zero.

    Returns:
        RateAllocation: Best grid point, or all zeros if no grid point is feasible
            with a finite objective.

    Raises:
        TooLarge: If the network has too many paths.
    """
    if len(net.paths) > settings.BRUTE_FORCE_MAX_PATHS:
        raise TooLarge(
            f"{len(net.paths)} paths exceed the brute-force guard of "
            f"{settings.BRUTE_FORCE_MAX_PATHS}"
        )
    if not grid_step > 0:
        raise DomainError(f"grid_step must be positive, got {grid_step}")

    arrays = NetworkArrays.from_network(net)
    mode = "baseline" if single_path else "multipath"
    active = arrays.primary.copy() if single_path else np.ones(arrays.n_paths, bool)
    routing = arrays.routing[:, active]
    objective = NetworkObjective(arrays, active, Aggregation.SOURCE)

    axes = []
    for column in routing.T:
        upper = float(arrays.capacities[column > 0].min())
        count = int(np.floor((upper - eps) / grid_step + 1e-9)) + 1 if upper >= eps else 0
        axes.append(eps + grid_step * np.arange(count))
    if any(axis.size == 0 for axis in axes):
        return RateAllocation.zeros(net, mode=mode)

    best_value, best_point = -np.inf, None
    outer, inner = axes[:-2], axes[-2:]
    inner_grid = np.stack(np.meshgrid(*inner, indexing="ij"), axis=-1).reshape(
        -1, len(inner)
    )
    for prefix in itertools.product(*outer):
        points = np.hstack(
            [np.tile(np.asarray(prefix, dtype=float), (len(inner_grid), 1)), inner_grid]
        )
        feasible = np.all(points @ routing.T <= arrays.capacities + 1e-12, axis=1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            values = np.where(feasible, objective.value(points), -np.inf)
        values = np.where(np.isnan(values), -np.inf, values)
        index = int(np.argmax(values))
        if values[index] > best_value:
            best_value, best_point = float(values[index]), points[index]

    if best_point is None:
        return RateAllocation.zeros(net, mode=mode)

    r = np.zeros(arrays.n_paths)
    r[active] = best_point
    return arrays.allocation(r, mode=mode)


def _run(
    objective: NetworkObjective,
    floors: np.ndarray,
    tol: Optional[float],
    max_iterations: Optional[int],
    mode: str,
) -> SolverReport:
    tol = settings.SOLVER_TOLERANCE if tol is None else tol
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    max_iterations = (
        settings.SOLVER_MAX_ITERATIONS if max_iterations is None else max_iterations
    )

    solver = ProjectedGradientSolver(objective, floors, tol, max_iterations)
    r_active, iterations, residual, trace = solver.solve(solver.uniform_start())

    arrays = objective.arrays
    r = np.zeros(arrays.n_paths)
    r[objective.active] = r_active
    report = SolverReport(
        allocation=arrays.allocation(r, mode=mode),
        iterations=iterations,
        kkt_residual=residual,
        converged=residual <= tol,
        objective=trace[-1],
        objective_trace=trace,
    )

    if not report.converged:
        raise NoConvergence(
            f"{mode} solve stopped after {iterations} iterations with residual "
            f"{residual:.3e} > {tol:.1e}",
            report=report,
        )

    logger.info(
        f"Solved {mode} equilibrium: {iterations} iterations, residual {residual:.2e}"
    )
    return report
