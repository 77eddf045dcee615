"""Rate-level traffic modulation: constant demand and periodic on/off bursts."""

import math
from typing import Optional

import numpy as np

from app.errors import DomainError, InvalidStep
from app.models.traffic import ConstantTraffic, OnOffTraffic, TrafficModel

# Times closer than this to a period boundary belong to the next period.
BOUNDARY_GUARD = 1e-9


def modulation(model: TrafficModel, t: float, phase: float = 0.0) -> float:
    """
    Weight multiplier at time t.

    Args:
        model: Traffic model.
        t: Model time (s), nonnegative.
        phase: Offset (s) added to t, used to desynchronise sources.

    Returns:
        float: amplitude while ON, quiescent while OFF, 1 for constant traffic.
    """
    if t < 0:
        raise DomainError(f"time must be nonnegative, got {t}")
    if isinstance(model, ConstantTraffic):
        return 1.0
    return float(_on_off(model, np.asarray(t + phase, dtype=float)))


def source_phases(model: TrafficModel, n_sources: int) -> np.ndarray:
    """Per-source time offsets i * phase_spread * period / n_sources."""
    if isinstance(model, ConstantTraffic) or n_sources == 0:
        return np.zeros(n_sources)
    return np.arange(n_sources) * model.phase_spread * model.period / n_sources


def burst_schedule(
    model: TrafficModel, horizon: float, dt: float, n_sources: Optional[int] = None
) -> np.ndarray:
    """
    Tabulate the multipliers for every integration step.

    Args:
        model: Traffic model.
        horizon: Integrated time (s).
        dt: Step (s).
        n_sources: When given, one column per source with its phase applied.

    Returns:
        np.ndarray: Shape (steps,) or (steps, n_sources), steps = floor(horizon/dt).

    Raises:
        InvalidStep: If dt <= 0 or dt > horizon.
    """
    steps = step_count(horizon, dt)
    if n_sources is None:
        if isinstance(model, ConstantTraffic):
            return np.ones(steps)
        return _on_off(model, np.arange(steps) * dt)

    if isinstance(model, ConstantTraffic):
        return np.ones((steps, n_sources))
    times = np.arange(steps)[:, None] * dt + source_phases(model, n_sources)[None, :]
    return _on_off(model, times)


def mean_multiplier(model: TrafficModel) -> float:
    """Time average of the multiplier over one period."""
    if isinstance(model, ConstantTraffic):
        return 1.0
    return model.duty * model.amplitude + (1 - model.duty) * model.quiescent


def step_count(horizon: float, dt: float) -> int:
    if not dt > 0 or dt > horizon:
        raise InvalidStep(f"step {dt} must satisfy 0 < dt <= horizon ({horizon})")
    return int(math.floor(horizon / dt + BOUNDARY_GUARD))


def _on_off(model: OnOffTraffic, t: np.ndarray) -> np.ndarray:
    cycle = t / model.period
    fraction = np.maximum(cycle - np.floor(cycle + BOUNDARY_GUARD), 0.0)
    return np.where(
        fraction < model.duty - BOUNDARY_GUARD, model.amplitude, model.quiescent
    )
