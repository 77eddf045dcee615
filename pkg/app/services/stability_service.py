"""Stability assessment: equilibrium displacement, burden displacement and verdicts."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from app.config import get_logger
from app.errors import DimensionMismatch, EmptyTrajectory
from app.models.allocation import RateAllocation
from app.models.arrays import NetworkArrays
from app.models.dynamics import Trajectory
from app.models.network import Network
from app.models.stability import (
    BurdenVector,
    Classification,
    ConstraintVerdicts,
    StabilityConfig,
    StabilityReport,
)

logger = get_logger(__name__)

SLACK = 1e-9


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """
    Euclidean distance between two equally long vectors.

    Raises:
        DimensionMismatch: If the lengths differ.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare shapes {a.shape} and {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def compute_burden(net: Network, alloc: RateAllocation) -> BurdenVector:
    """b_p = r_p x number of links on p."""
    return BurdenVector(
        burdens={path.id: alloc.rates[path.id] * path.hops for path in net.paths}
    )


def burden_bound(net: Network, cfg: StabilityConfig) -> float:
    """B_max: the configured bound or a fraction of the total capacity."""
    if cfg.burden_bound is not None:
        return cfg.burden_bound
    return cfg.burden_bound_fraction * net.total_capacity


@dataclass
class _Measurements:
    """Per-sample metrics against the baseline (one entry per row of rates)."""

    displacement: np.ndarray
    path_displacement: np.ndarray
    burden_displacement: np.ndarray
    floor_ok: np.ndarray
    capacity_ok: np.ndarray


def _measure(
    arrays: NetworkArrays, baseline: np.ndarray, rates: np.ndarray, eps: float
) -> _Measurements:
    totals_star = arrays.totals(baseline)
    totals = rates @ arrays.membership.T
    burden_star = baseline * arrays.hops
    burdens = rates * arrays.hops
    loads = rates @ arrays.routing.T
    active = rates > 0
    return _Measurements(
        displacement=np.sqrt(np.sum((totals - totals_star) ** 2, axis=1)),
        path_displacement=np.sqrt(np.sum((rates - baseline) ** 2, axis=1)),
        burden_displacement=np.sqrt(np.sum((burdens - burden_star) ** 2, axis=1)),
        floor_ok=np.all(~active | (rates >= eps - SLACK), axis=1),
        capacity_ok=np.all(loads <= arrays.capacities + SLACK, axis=1),
    )


def assess(
    net: Network,
    x_star: RateAllocation,
    x_new: RateAllocation,
    cfg: StabilityConfig,
) -> StabilityReport:
    """
    Compare a multipath allocation with the single-path baseline.

    Args:
        net: The network both allocations live on.
        x_star: Baseline equilibrium.
        x_new: Multipath allocation.
        cfg: Thresholds.

    Returns:
        StabilityReport: Displacements, verdicts and classification.

    Raises:
        AllocationMismatch: If either allocation does not cover exactly the
            network's paths.
    """
    arrays = NetworkArrays.from_network(net)
    baseline = arrays.vector(x_star.rates)
    rates = arrays.vector(x_new.rates)[None, :]
    measured = _measure(arrays, baseline, rates, cfg.eps)
    return _report(net, arrays, baseline, measured, cfg, oscillating=False)


def assess_time_varying(
    net: Network,
    baseline: RateAllocation,
    traj: Trajectory,
    cfg: StabilityConfig,
) -> StabilityReport:
    """
    Assess a trajectory by the supremum over its trailing window.

    A converged trajectory is assessed at its final state. Otherwise every sample
    with time >= t_end - cfg.window enters the supremum of displacement and burden
    displacement, and the floor and capacity verdicts must hold on all of them.
    An oscillating trajectory is always Unstable.

    Raises:
        EmptyTrajectory: If the trajectory has no samples.
        AllocationMismatch: If the trajectory was produced on another network.
    """
    if traj.n_samples == 0:
        raise EmptyTrajectory("trajectory has no samples")

    arrays = NetworkArrays.from_network(net)
    samples = traj.rates
    if tuple(traj.path_ids) != arrays.path_ids:
        arrays.vector(dict.fromkeys(traj.path_ids, 0.0))
        samples = samples[:, [traj.path_ids.index(pid) for pid in arrays.path_ids]]
    x_star = arrays.vector(baseline.rates)

    if traj.converged:
        rates = arrays.vector(traj.final.rates)[None, :]
    else:
        t_end = float(traj.times[-1])
        rates = samples[traj.times >= t_end - cfg.window - 1e-12]

    measured = _measure(arrays, x_star, rates, cfg.eps)
    return _report(
        net, arrays, x_star, measured, cfg, oscillating=traj.oscillation_detected
    )


def _report(
    net: Network,
    arrays: NetworkArrays,
    baseline: np.ndarray,
    measured: _Measurements,
    cfg: StabilityConfig,
    oscillating: bool,
) -> StabilityReport:
    b_max = burden_bound(net, cfg)
    if cfg.displacement_scale == "baseline":
        bound = cfg.displacement_tol * float(np.linalg.norm(arrays.totals(baseline)))
    else:
        bound = cfg.displacement_tol

    sup_displacement = float(measured.displacement.max())
    sup_burden = float(measured.burden_displacement.max())
    verdicts = ConstraintVerdicts(
        paths_ok=all(source.n_paths >= 2 for source in net.sources),
        floor_ok=bool(measured.floor_ok.all()),
        capacity_ok=bool(measured.capacity_ok.all()),
        burden_ok=sup_burden <= b_max,
    )
    stable = verdicts.all_ok and sup_displacement <= bound and not oscillating
    classification = Classification.STABLE if stable else Classification.UNSTABLE

    windowed = len(measured.displacement) > 1 or oscillating
    report = StabilityReport(
        displacement=sup_displacement,
        path_displacement=float(measured.path_displacement.max()),
        burden_displacement=sup_burden,
        burden_bound=b_max,
        displacement_bound=bound,
        constraint_verdicts=verdicts,
        classification=classification,
        oscillation_detected=oscillating,
        sup_displacement_over_window=sup_displacement if windowed else None,
        sup_burden_displacement_over_window=sup_burden if windowed else None,
        final_displacement=float(measured.displacement[-1]) if windowed else None,
        final_burden_displacement=(
            float(measured.burden_displacement[-1]) if windowed else None
        ),
        evaluated_samples=len(measured.displacement),
    )
    logger.debug(
        f"Assessed {net.name or 'network'}: displacement {report.displacement:.4g}, "
        f"burden {sup_burden:.4g} / {b_max:.4g}, {classification.value}"
    )
    return report
