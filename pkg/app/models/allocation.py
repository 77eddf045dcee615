"""Rate allocations and solver reports."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.models.network import Network


class RateAllocation(BaseModel):
    """Per-path rates r_p; per-source totals r_x are derived from the network."""

    model_config = ConfigDict(frozen=True)

    rates: dict[str, float] = Field(..., description="Path id -> rate (Mbit/s)")
    mode: Literal["baseline", "multipath"] = Field(
        "multipath", description="Equilibrium family the allocation belongs to"
    )

    @field_validator("rates")
    @classmethod
    def validate_nonnegative(cls, v: dict[str, float]) -> dict[str, float]:
        negative = [pid for pid, rate in v.items() if rate < 0]
        if negative:
            raise ValueError(f"negative rates on paths {negative[:5]}")
        return v

    def source_total(self, net: Network, source_id: str) -> float:
        return float(sum(self.rates[pid] for pid in net.source(source_id).path_ids))

    def source_totals(self, net: Network) -> dict[str, float]:
        return {sid: self.source_total(net, sid) for sid in net.source_ids}

    @classmethod
    def zeros(cls, net: Network, mode: str = "multipath") -> "RateAllocation":
        return cls(rates={pid: 0.0 for pid in net.path_ids}, mode=mode)


class SolverReport(BaseModel):
    """Outcome of an equilibrium solve."""

    allocation: RateAllocation = Field(..., description="Rates at the last iterate")
    iterations: int = Field(..., ge=0, description="Iterations performed")
    kkt_residual: float = Field(
        ..., ge=0, description="Natural residual |r - P(r + grad f(r))| (max norm)"
    )
    converged: bool = Field(..., description="Residual reached the tolerance")
    objective: float = Field(..., description="Objective value at the last iterate")
    objective_trace: list[float] = Field(
        default_factory=list, description="Objective value after every iteration"
    )
