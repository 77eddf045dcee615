"""Stability assessment configuration and reports."""

from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class Classification(str, Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"


class StabilityConfig(BaseModel):
    """Thresholds of the stability programme."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eps: float = Field(0.01, gt=0, description="Rate floor epsilon on active paths")
    burden_bound: Optional[float] = Field(
        None, gt=0, description="Explicit burden bound B_max"
    )
    burden_bound_fraction: float = Field(
        0.5,
        gt=0,
        description="B_max as a fraction of total capacity when burden_bound is unset",
    )
    displacement_tol: float = Field(
        1.0, ge=0, description="Largest displacement still classified as stable"
    )
    displacement_scale: Literal["baseline", "absolute"] = Field(
        "baseline",
        description="'baseline': displacement_tol is relative to |x*|",
    )
    window: float = Field(
        1.0, gt=0, description="Trailing window for the burst-episode supremum (s)"
    )


class BurdenVector(BaseModel):
    """Per-path burden b_p = r_p x hop count."""

    model_config = ConfigDict(frozen=True)

    burdens: dict[str, float] = Field(..., description="Path id -> burden")

    @property
    def total(self) -> float:
        return float(sum(self.burdens.values()))


class ConstraintVerdicts(BaseModel):
    paths_ok: bool = Field(..., description="Every source has at least two paths")
    floor_ok: bool = Field(..., description="Active paths carry at least eps")
    capacity_ok: bool = Field(..., description="Every link load within capacity")
    burden_ok: bool = Field(..., description="Burden displacement within B_max")

    @property
    def all_ok(self) -> bool:
        return self.paths_ok and self.floor_ok and self.capacity_ok and self.burden_ok


class StabilityReport(BaseModel):
    """
    Displacements, constraint verdicts and the resulting classification.

    For a windowed assessment the displacement fields hold the supremum over the
    window, the values the verdicts were decided on; the last sample is kept in the
    final_* fields.
    """

    displacement: float = Field(..., ge=0, description="|x_new - x*| on source totals")
    path_displacement: float = Field(
        ..., ge=0, description="|x_new - x*| on per-path rates"
    )
    burden_displacement: float = Field(..., ge=0, description="|b* - b_new|")
    burden_bound: float = Field(..., gt=0, description="B_max used for burden_ok")
    displacement_bound: float = Field(
        ..., ge=0, description="Absolute displacement bound used for classification"
    )
    constraint_verdicts: ConstraintVerdicts
    classification: Classification
    oscillation_detected: bool = Field(False)
    sup_displacement_over_window: Optional[float] = Field(
        None, description="Supremum of displacement over the trailing window"
    )
    sup_burden_displacement_over_window: Optional[float] = Field(
        None, description="Supremum of burden displacement over the trailing window"
    )
    final_displacement: Optional[float] = Field(
        None, description="Displacement of the last windowed sample"
    )
    final_burden_displacement: Optional[float] = Field(
        None, description="Burden displacement of the last windowed sample"
    )
    evaluated_samples: int = Field(1, ge=0, description="Samples entering the report")
