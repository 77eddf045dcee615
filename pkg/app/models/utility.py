"""Alpha-fair utility specification with an optional linear energy penalty."""

from pydantic import BaseModel, ConfigDict, Field


class UtilitySpec(BaseModel):
    """
    Parameters of a source's utility U(x) = w·x^(1-alpha)/(1-alpha) (w·log x at alpha=1).

    The energy term subtracts energy_weight·e, where e is the energy rate of the
    source's paths.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(
        1.0,
        gt=0,
        description="Alpha-fairness parameter (1 = proportional fair, 2 = TCP-like)",
    )
    weight: float = Field(1.0, gt=0, description="Utility weight w")
    energy_weight: float = Field(
        0.0,
        ge=0,
        description="Energy weight gamma; 0 disables the energy penalty",
    )

    @property
    def is_logarithmic(self) -> bool:
        return self.alpha == 1.0
