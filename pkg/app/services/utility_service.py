"""Alpha-fair utility values and derivatives, scalar and vectorised."""

import numpy as np

from app.errors import DomainError
from app.models.utility import UtilitySpec


def utility_value(spec: UtilitySpec, x: float) -> float:
    """
    Evaluate w*log(x) (alpha = 1) or w*x^(1-alpha)/(1-alpha).

    Args:
        spec: Utility parameters.
        x: Throughput, strictly positive.

    Returns:
        float: The utility.

    Raises:
        DomainError: If x <= 0.
    """
    _check_positive(x)
    return float(utility_values(spec.alpha, spec.weight, np.float64(x)))


def utility_energy_value(spec: UtilitySpec, x: float, e: float) -> float:
    """
    Energy-penalised utility U(x) - gamma*e.

    Raises:
        DomainError: If x <= 0 or e < 0.
    """
    if e < 0:
        raise DomainError(f"energy rate must be nonnegative, got {e}")
    return utility_value(spec, x) - spec.energy_weight * e


def utility_gradient(spec: UtilitySpec, x: float) -> float:
    """
    Exact derivative w*x^(-alpha).

    Raises:
        DomainError: If x <= 0.
    """
    _check_positive(x)
    return float(utility_gradients(spec.alpha, spec.weight, np.float64(x)))


def utility_values(alpha, weight, x) -> np.ndarray:
    """
    Element-wise alpha-fair utility; alpha, weight and x broadcast together.

    Nonpositive x yields -inf when alpha >= 1 and the finite limit otherwise, which
    lets grid searches rank infeasible-at-zero points without raising.
    """
    alpha = np.asarray(alpha, dtype=float)
    weight = np.asarray(weight, dtype=float)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_branch = np.log(np.where(x > 0, x, 0.0))
        one_minus = np.where(alpha == 1.0, 1.0, 1.0 - alpha)
        power_branch = np.where(x > 0, x, 0.0) ** one_minus / one_minus
        power_branch = np.where((x <= 0) & (alpha > 1.0), -np.inf, power_branch)
        return weight * np.where(alpha == 1.0, log_branch, power_branch)


def utility_gradients(alpha, weight, x) -> np.ndarray:
    """Element-wise w*x^(-alpha) for x > 0."""
    return np.asarray(weight, dtype=float) * np.asarray(x, dtype=float) ** (
        -np.asarray(alpha, dtype=float)
    )


def _check_positive(x: float):
    if not x > 0:
        raise DomainError(f"throughput must be positive, got {x}")
