import numpy as np
import pytest
from pydantic import ValidationError

from app.errors import DomainError, InvalidStep
from app.models.traffic import ConstantTraffic, OnOffTraffic
from app.services.traffic_service import (
    burst_schedule,
    mean_multiplier,
    modulation,
    source_phases,
    step_count,
)

BURSTY = OnOffTraffic(period=1.0, duty=0.3, amplitude=4.0, quiescent=0.1)


class TestModulation:
    def test_constant_is_one(self):
        assert modulation(ConstantTraffic(), 17.3) == 1.0

    @pytest.mark.parametrize(
        "t, expected", [(0.0, 4.0), (0.2, 4.0), (0.9, 0.1), (1.2, 4.0), (2.5, 0.1)]
    )
    def test_on_off(self, t, expected):
        assert modulation(BURSTY, t) == expected

    def test_period_boundary_starts_a_new_burst(self):
        assert modulation(BURSTY, 1.0) == 4.0
        assert modulation(BURSTY, 3.0) == 4.0

    def test_duty_boundary_is_off(self):
        assert modulation(BURSTY, 0.3) == 0.1

    def test_phase_shifts_the_burst(self):
        assert modulation(BURSTY, 0.9, phase=0.2) == 4.0

    def test_negative_time_rejected(self):
        with pytest.raises(DomainError):
            modulation(BURSTY, -0.1)


class TestBurstSchedule:
    def test_constant_schedule(self):
        np.testing.assert_array_equal(
            burst_schedule(ConstantTraffic(), 1.0, 0.1), np.ones(10)
        )

    def test_blocks_of_on_and_off(self):
        model = OnOffTraffic(period=1.0, duty=0.5, amplitude=4.0, quiescent=0.1)
        schedule = burst_schedule(model, 2.0, 0.1)
        block = [4.0] * 5 + [0.1] * 5
        np.testing.assert_array_equal(schedule, block * 2)

    def test_period_average(self):
        schedule = burst_schedule(BURSTY, 1.0, 1e-3)
        assert len(schedule) == 1000
        assert schedule.mean() == pytest.approx(mean_multiplier(BURSTY), abs=1e-12)

    def test_mean_multiplier_formula(self):
        assert mean_multiplier(BURSTY) == pytest.approx(0.3 * 4.0 + 0.7 * 0.1)
        assert mean_multiplier(ConstantTraffic()) == 1.0

    def test_per_source_columns_are_synchronised_by_default(self):
        schedule = burst_schedule(BURSTY, 1.0, 0.01, n_sources=3)
        assert schedule.shape == (100, 3)
        assert np.all(schedule == schedule[:, :1])

    def test_phase_spread_offsets_sources(self):
        model = BURSTY.model_copy(update={"phase_spread": 0.5})
        np.testing.assert_allclose(source_phases(model, 2), [0.0, 0.25])
        schedule = burst_schedule(model, 1.0, 0.01, n_sources=2)
        assert not np.array_equal(schedule[:, 0], schedule[:, 1])

    @pytest.mark.parametrize("dt, horizon", [(0.0, 1.0), (-0.1, 1.0), (2.0, 1.0)])
    def test_invalid_step(self, dt, horizon):
        with pytest.raises(InvalidStep):
            burst_schedule(BURSTY, horizon, dt)

    def test_step_count_tolerates_rounding(self):
        assert step_count(0.3, 0.1) == 3


@pytest.mark.parametrize(
    "fields",
    [
        {"duty": 0.0},
        {"duty": 1.0},
        {"period": 0.0},
        {"amplitude": 0.5},
    ],
)
def test_invalid_on_off_models(fields):
    with pytest.raises(ValidationError):
        OnOffTraffic(**fields)
