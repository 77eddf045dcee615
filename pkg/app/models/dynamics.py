"""Controller, integration settings and trajectory models for the fluid dynamics."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import settings
from app.models.allocation import RateAllocation


class ControllerKind(BaseModel):
    """Congestion-controller family and its gain kappa."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["single_path", "uncoupled", "coupled"] = Field(
        "coupled", description="Single-path baseline, uncoupled or coupled multipath"
    )
    gain: float = Field(10.0, gt=0, description="Controller gain kappa")


class DynamicsConfig(BaseModel):
    """Integration and price parameters of a fluid-model run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    horizon: float = Field(20.0, gt=0, description="Integrated model time (s)")
    dt: float = Field(settings.DYNAMICS_DT, description="RK4 step (s)")
    tolerance: float = Field(
        1e-6, gt=0, description="Derivative norm below which a step counts as at rest"
    )
    sample_every: int = Field(10, ge=1, description="Record every n-th step")
    barrier: float = Field(
        settings.DYNAMICS_BARRIER, ge=0, description="Barrier strength beta"
    )
    price_cap: float = Field(
        settings.DYNAMICS_PRICE_CAP,
        gt=0,
        description="Ceiling of the barrier part of a link price",
    )
    oscillation_threshold: float = Field(
        settings.OSCILLATION_THRESHOLD,
        gt=0,
        description="Coefficient of variation above which a path oscillates",
    )
    oscillation_window: float = Field(
        1.0, gt=0, description="Trailing window for oscillation detection (s)"
    )
    convergence_steps: int = Field(
        settings.CONVERGENCE_STEPS,
        ge=1,
        description="Consecutive at-rest steps required for convergence",
    )
    blowup_factor: float = Field(
        settings.BLOWUP_FACTOR,
        gt=0,
        description="Rates above this multiple of total capacity abort the run",
    )


class Trajectory(BaseModel):
    """
    Sampled solution of the fluid model.

    ``times`` has one entry per recorded sample and ``rates`` one row per sample,
    columns in ``path_ids`` order.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    dt: float = Field(..., gt=0, description="Integration step (s)")
    sample_every: int = Field(1, ge=1, description="Steps between samples")
    path_ids: tuple[str, ...] = Field(..., description="Column order of rates")
    times: np.ndarray = Field(..., description="Sample times (s)")
    rates: np.ndarray = Field(..., description="Sampled rates (samples x paths)")
    final: RateAllocation = Field(..., description="State after the last step")
    converged: bool = Field(False, description="Derivative stayed below tolerance")
    oscillation_detected: bool = Field(
        False, description="Trailing-window variation exceeded the threshold"
    )
    clamp_count: int = Field(0, ge=0, description="Positivity clamps applied")
    steps_taken: int = Field(0, ge=0, description="RK4 steps performed")

    @model_validator(mode="after")
    def validate_shape(self) -> "Trajectory":
        if self.rates.ndim != 2 or self.rates.shape != (
            len(self.times),
            len(self.path_ids),
        ):
            raise ValueError("rates must have shape (samples, paths)")
        if self.converged and self.oscillation_detected:
            raise ValueError("a trajectory cannot both converge and oscillate")
        return self

    @property
    def n_samples(self) -> int:
        return len(self.times)

    def sample_allocation(self, index: int) -> RateAllocation:
        """Rebuild the RateAllocation of the index-th sample."""
        row = self.rates[index]
        return RateAllocation(
            rates={pid: float(v) for pid, v in zip(self.path_ids, row)}
        )

    def samples(self) -> list[tuple[float, RateAllocation]]:
        return [
            (float(t), self.sample_allocation(i)) for i, t in enumerate(self.times)
        ]
