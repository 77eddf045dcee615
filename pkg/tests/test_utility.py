import numpy as np
import pytest

from app.errors import DomainError
from app.models.utility import UtilitySpec
from app.services.utility_service import (
    utility_energy_value,
    utility_gradient,
    utility_value,
)


@pytest.mark.parametrize(
    "alpha, weight, x, expected",
    [
        (1.0, 1.0, 1.0, 0.0),
        (2.0, 1.0, 2.0, -0.5),
        (0.5, 1.0, 4.0, 4.0),
        (1.0, 3.0, np.e, 3.0),
    ],
)
def test_utility_value_closed_forms(alpha, weight, x, expected):
    assert utility_value(UtilitySpec(alpha=alpha, weight=weight), x) == pytest.approx(
        expected, abs=1e-12
    )


@pytest.mark.parametrize(
    "alpha, weight, x, expected",
    [
        (1.0, 1.0, 2.0, 0.5),
        (2.0, 3.0, 1.0, 3.0),
        (0.5, 2.0, 4.0, 1.0),
    ],
)
def test_utility_gradient_closed_forms(alpha, weight, x, expected):
    spec = UtilitySpec(alpha=alpha, weight=weight)
    assert utility_gradient(spec, x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_nonpositive_throughput_rejected(x):
    with pytest.raises(DomainError):
        utility_value(UtilitySpec(), x)
    with pytest.raises(DomainError):
        utility_gradient(UtilitySpec(), x)


def test_energy_value_without_energy_weight_is_plain_utility():
    spec = UtilitySpec(alpha=2.0, weight=1.5)
    for x, e in [(0.3, 0.0), (2.0, 5.0), (17.0, 1e3)]:
        assert utility_energy_value(spec, x, e) == utility_value(spec, x)


def test_energy_value_closed_form():
    spec = UtilitySpec(alpha=1.0, weight=1.0, energy_weight=0.5)
    assert utility_energy_value(spec, 1.0, 2.0) == pytest.approx(-1.0)


def test_negative_energy_rejected():
    with pytest.raises(DomainError):
        utility_energy_value(UtilitySpec(energy_weight=0.1), 1.0, -0.1)


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(0)
    for x in np.logspace(-2, 3, 26):
        alpha = float(rng.uniform(0.2, 3.0))
        spec = UtilitySpec(alpha=alpha, weight=float(rng.uniform(0.1, 10.0)))
        h = 1e-5 * x
        numeric = (utility_value(spec, x + h) - utility_value(spec, x - h)) / (2 * h)
        assert utility_gradient(spec, x) == pytest.approx(numeric, rel=1e-6)


def test_energy_utility_is_concave_on_random_triples():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        spec = UtilitySpec(
            alpha=float(rng.uniform(0.2, 3.0)),
            weight=float(rng.uniform(0.1, 10.0)),
            energy_weight=float(rng.uniform(0.0, 1.0)),
        )
        x1, x2 = rng.uniform(0.01, 100.0, size=2)
        e1, e2 = rng.uniform(0.0, 10.0, size=2)
        mid = utility_energy_value(spec, (x1 + x2) / 2, (e1 + e2) / 2)
        ends = (utility_energy_value(spec, x1, e1) + utility_energy_value(spec, x2, e2))
        assert mid >= ends / 2 - 1e-9 * max(1.0, abs(mid))


def test_utility_is_strictly_increasing():
    for alpha in (0.5, 1.0, 2.0):
        spec = UtilitySpec(alpha=alpha)
        values = [utility_value(spec, x) for x in np.linspace(0.1, 50.0, 200)]
        assert all(b > a for a, b in zip(values, values[1:]))


def test_spec_rejects_nonpositive_alpha():
    with pytest.raises(ValueError):
        UtilitySpec(alpha=0.0)
