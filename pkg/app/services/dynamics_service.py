"""Fluid-model congestion controllers integrated with fixed-step RK4.

Every path follows dr_p/dt = kappa * (m_x U'(arg) - gamma_x e_p - Lambda_p), where
Lambda_p sums the prices of the links on p, m_x is the traffic multiplier of the
owning source and arg is r_x (coupled), r_p (uncoupled) or the primary rate
(single path, other paths frozen at the positivity floor).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.config import get_logger, settings
from app.errors import DomainError, NumericalBlowup
from app.models.allocation import RateAllocation
from app.models.arrays import NetworkArrays
from app.models.dynamics import ControllerKind, DynamicsConfig, Trajectory
from app.models.network import Network
from app.models.traffic import ConstantTraffic, TrafficModel
from app.services.traffic_service import burst_schedule, step_count
from app.services.utility_service import utility_gradients

logger = get_logger(__name__)


def link_prices(
    loads: np.ndarray,
    capacities: np.ndarray,
    barrier: float = settings.DYNAMICS_BARRIER,
    price_cap: float = settings.DYNAMICS_PRICE_CAP,
) -> np.ndarray:
    """
    Price of every link: capped barrier plus relative overload.

    price = beta / max(c - load, beta / price_cap) + max(0, (load - c) / c)

    The barrier part equals beta / (c - load) on the feasible interior and saturates
    at price_cap near and beyond capacity, so the price stays finite everywhere.
    """
    overload = np.maximum(0.0, (loads - capacities) / capacities)
    if barrier <= 0:
        return overload
    slack = np.maximum(capacities - loads, barrier / price_cap)
    return barrier / slack + overload


@dataclass
class FluidModel:
    """Vector field of one controller on one network."""

    arrays: NetworkArrays
    kind: ControllerKind
    barrier: float = settings.DYNAMICS_BARRIER
    price_cap: float = settings.DYNAMICS_PRICE_CAP

    def __post_init__(self):
        self.frozen = (
            ~self.arrays.primary
            if self.kind.variant == "single_path"
            else np.zeros(self.arrays.n_paths, dtype=bool)
        )
        self.energy = self.arrays.path_energy_weights

    def derivative(self, r: np.ndarray, multipliers: np.ndarray) -> np.ndarray:
        a = self.arrays
        owner = a.path_source
        if self.kind.variant == "coupled":
            argument = (a.membership @ r)[owner]
        else:
            argument = r
        marginal = utility_gradients(
            a.alphas[owner], (a.weights * multipliers)[owner], argument
        )
        prices = link_prices(a.routing @ r, a.capacities, self.barrier, self.price_cap)
        rate_of_change = self.kind.gain * (marginal - self.energy - a.routing.T @ prices)
        rate_of_change[self.frozen] = 0.0
        return rate_of_change

    def uniform_start(self, eps: float) -> np.ndarray:
        """eps + half the tightest equal share on the moving paths; frozen paths at eps/10."""
        a = self.arrays
        moving = ~self.frozen
        floors = np.where(moving, eps, eps / 10)
        routing = a.routing[:, moving]
        counts = routing.sum(axis=1)
        used = counts > 0
        room = (a.capacities[used] - (a.routing @ floors)[used]) / counts[used]
        return np.where(moving, eps + 0.5 * max(float(room.min()), 0.0), eps / 10)


def controller_vector_field(
    kind: ControllerKind,
    net: Network,
    alloc: RateAllocation,
    *,
    multipliers: Optional[np.ndarray] = None,
    barrier: float = settings.DYNAMICS_BARRIER,
    price_cap: float = settings.DYNAMICS_PRICE_CAP,
) -> dict[str, float]:
    """
    Rate derivatives of every path at an allocation.

    Args:
        kind: Controller family and gain.
        net: The network.
        alloc: Allocation with strictly positive rates.
        multipliers: Optional per-source weight multipliers (traffic modulation).
        barrier: Barrier strength beta of the link prices.
        price_cap: Ceiling of the barrier part of a price.

    Returns:
        dict[str, float]: Path id -> dr_p/dt.

    Raises:
        DomainError: If any rate is nonpositive.
    """
    arrays = NetworkArrays.from_network(net)
    r = arrays.vector(alloc.rates)
    if np.any(r <= 0):
        bad = [arrays.path_ids[i] for i in np.flatnonzero(r <= 0)[:5]]
        raise DomainError(f"vector field needs positive rates, got zero on {bad}")
    if multipliers is None:
        multipliers = np.ones(len(arrays.source_ids))
    model = FluidModel(arrays, kind, barrier, price_cap)
    derivative = model.derivative(r, np.asarray(multipliers, dtype=float))
    return {pid: float(v) for pid, v in zip(arrays.path_ids, derivative)}


def integrate(
    kind: ControllerKind,
    net: Network,
    horizon: float,
    dt: float,
    tol: float,
    *,
    traffic: Optional[TrafficModel] = None,
    eps: float = 0.01,
    config: Optional[DynamicsConfig] = None,
) -> Trajectory:
    """
    Integrate a controller from the uniform start with fixed-step RK4.

    Multipliers are held constant within a step. After every step rates are clamped
    at eps/10. Under constant multipliers the run stops early once the derivative
    norm has stayed below tol for ``config.convergence_steps`` consecutive steps;
    paths held at the floor and pushed down do not count against rest. A quiet phase
    of bursty traffic is not a rest point, so those runs always reach the horizon.
    Runs that do not converge have the trailing window after horizon/2 checked for
    oscillation.

    Args:
        kind: Controller family and gain.
        net: The network.
        horizon: Model time to integrate (s).
        dt: Step (s).
        tol: Derivative norm regarded as at rest.
        traffic: Optional traffic model; None behaves like constant traffic.
        eps: Rate floor of the start point (positivity floor is eps/10).
        config: Price, sampling and detection parameters; horizon, dt and tolerance
            in it are ignored in favour of the explicit arguments.

    Returns:
        Trajectory: Samples, final allocation and convergence flags.

    Raises:
        InvalidStep: If dt <= 0 or dt > horizon.
        NumericalBlowup: If a rate exceeds blowup_factor x total capacity.
    """
    config = config or DynamicsConfig()
    steps = step_count(horizon, dt)
    arrays = NetworkArrays.from_network(net)
    model = FluidModel(arrays, kind, config.barrier, config.price_cap)
    schedule = burst_schedule(
        traffic or ConstantTraffic(), horizon, dt, n_sources=len(arrays.source_ids)
    )

    positivity_floor = eps / 10
    steady = bool(np.all(schedule == schedule[0]))
    ceiling = config.blowup_factor * float(arrays.capacities.sum())
    r = model.uniform_start(eps)
    times, samples = [0.0], [r.copy()]
    clamp_count = 0
    at_rest = 0
    converged = False
    k = 0

    for k in range(steps):
        m = schedule[k]
        k1 = model.derivative(r, m)
        # Paths held at the floor and pushed further down count as at rest.
        drift = np.where((r <= positivity_floor) & (k1 < 0), 0.0, k1)
        if steady and np.linalg.norm(drift) < tol:
            at_rest += 1
            if at_rest >= config.convergence_steps:
                converged = True
                break
        else:
            at_rest = 0
        k2 = model.derivative(r + 0.5 * dt * k1, m)
        k3 = model.derivative(r + 0.5 * dt * k2, m)
        k4 = model.derivative(r + dt * k3, m)
        r = r + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        low = r < positivity_floor
        if low.any():
            clamp_count += int(low.sum())
            r = np.where(low, positivity_floor, r)
        if not np.all(np.isfinite(r)) or np.any(r > ceiling):
            raise NumericalBlowup(
                f"rates left the range [0, {ceiling:.3g}] at t={(k + 1) * dt:.4g}"
            )

        if (k + 1) % config.sample_every == 0:
            times.append((k + 1) * dt)
            samples.append(r.copy())

    steps_taken = k if converged else steps
    if times[-1] != steps_taken * dt:
        times.append(steps_taken * dt)
        samples.append(r.copy())

    times_array, rates_array = np.array(times), np.vstack(samples)
    oscillating = False
    if not converged:
        oscillating = _oscillates(
            times_array,
            rates_array,
            start=max(horizon / 2, times_array[-1] - config.oscillation_window),
            threshold=config.oscillation_threshold,
        )

    if clamp_count:
        logger.warning(f"Positivity floor clamped {clamp_count} path rates")
    logger.info(
        f"Integrated {kind.variant} controller: {steps_taken} steps, "
        f"converged={converged}, oscillation={oscillating}"
    )

    return Trajectory(
        dt=dt,
        sample_every=config.sample_every,
        path_ids=arrays.path_ids,
        times=times_array,
        rates=rates_array,
        final=arrays.allocation(r),
        converged=converged,
        oscillation_detected=oscillating,
        clamp_count=clamp_count,
        steps_taken=steps_taken,
    )


def _oscillates(
    times: np.ndarray, rates: np.ndarray, start: float, threshold: float
) -> bool:
    window = rates[times >= start - 1e-12]
    if len(window) < 2:
        return False
    mean = window.mean(axis=0)
    spread = window.std(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        variation = np.where(mean > 0, spread / mean, 0.0)
    return bool(np.any(variation > threshold))
