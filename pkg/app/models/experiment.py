from datetime import datetime
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.config import settings
from app.models.dynamics import ControllerKind, DynamicsConfig
from app.models.network import MAX_SEED, ScenarioSpec
from app.models.stability import StabilityConfig, StabilityReport
from app.models.traffic import ConstantTraffic, TrafficModel


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tolerance: float = Field(
        settings.SOLVER_TOLERANCE, gt=0, description="KKT residual tolerance"
    )
    max_iterations: int = Field(
        settings.SOLVER_MAX_ITERATIONS, ge=1, description="Iteration cap"
    )


class ExperimentConfig(BaseModel):
    """One experiment document; mirrors the JSON configuration field for field."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field("experiment", description="Label carried into reports")
    scenario: ScenarioSpec = Field(..., description="Scenario family and parameters")
    controller: ControllerKind = Field(default_factory=ControllerKind)
    traffic: TrafficModel = Field(default_factory=ConstantTraffic)
    stability: StabilityConfig = Field(default_factory=StabilityConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    dynamics: DynamicsConfig = Field(default_factory=DynamicsConfig)
    ensemble_size: int = Field(1, ge=1, description="Number of ensemble members")
    seed: int = Field(0, ge=0, lt=MAX_SEED, description="Seed of member 0")


class DisplacementStats(BaseModel):
    min: float
    median: float
    max: float


class RunRecord(BaseModel):
    """Result of one ensemble member: a report, or the error that stopped it."""

    run_id: int = Field(..., ge=0)
    seed: int = Field(..., ge=0)
    scenario: str = Field(..., description="Scenario variant")
    controller: str = Field(..., description="Controller variant")
    report: Optional[StabilityReport] = None
    error: Optional[str] = Field(None, description="'<ErrorType>: message' on failure")

    @property
    def stable(self) -> bool:
        return self.report is not None and self.report.classification == "Stable"


class EnsembleSummary(BaseModel):
    name: str = Field("experiment")
    runs: list[RunRecord] = Field(default_factory=list)
    fraction_stable: float = Field(0.0, ge=0, le=1)
    failures: int = Field(0, ge=0)
    displacement_stats: Optional[DisplacementStats] = None


class ExperimentStatus(str, Enum):
    IN_PROGRESS = "in_progress"
    COMPLETED = "completed"
    FAILED = "failed"


class ExperimentStatusResponse(BaseModel):
    id: str = Field(..., description="Unique identifier for the submitted experiment")
    status: ExperimentStatus = Field(..., description="Current status")


class ExperimentResponse(BaseModel):
    id: Optional[str] = Field(None, description="Unique identifier for the experiment")
    status: Optional[ExperimentStatus] = Field(None, description="Current status")
    success: bool = Field(True, description="Whether the experiment ran to completion")
    message: str = Field("", description="Human readable status or failure reason")
    summary: Optional[EnsembleSummary] = Field(None, description="Ensemble results")


class ExperimentInfo:
    """Holds experiment execution state and metadata."""

    def __init__(self, experiment_id: str, status: ExperimentStatus):
        self.experiment_id = experiment_id
        self.status = status
        self.response: Optional[ExperimentResponse] = None
        self.updated_at = datetime.now()
        self.created_at = datetime.now()

    def update_status(
        self, status: ExperimentStatus, response: Optional[ExperimentResponse] = None
    ):
        self.status = status
        if response:
            self.response = response
        self.updated_at = datetime.now()
