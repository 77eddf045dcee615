"""Traffic activity models modulating source utility weights over time."""

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field


class ConstantTraffic(BaseModel):
    """Steady demand: every multiplier is exactly 1."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["constant"] = "constant"


class OnOffTraffic(BaseModel):
    """Periodic rate-level bursts: ``amplitude`` while ON, ``quiescent`` while OFF."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["on_off"] = "on_off"
    period: float = Field(0.5, gt=0, description="Burst period (s)")
    duty: float = Field(0.2, gt=0, lt=1, description="Fraction of the period spent ON")
    amplitude: float = Field(5.0, ge=1, description="Weight multiplier while ON")
    quiescent: float = Field(
        0.1, ge=0, lt=1, description="Weight multiplier while OFF"
    )
    phase_spread: float = Field(
        0.0,
        ge=0,
        lt=1,
        description="Fraction of a period by which consecutive sources are offset",
    )


TrafficModel = Annotated[
    Union[ConstantTraffic, OnOffTraffic], Field(discriminator="variant")
]
