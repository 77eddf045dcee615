import numpy as np
import pytest

from app.errors import ConfigError
from app.models.experiment import ExperimentStatus
from app.services.experiment_service import (
    ExperimentService,
    member_trajectory,
    resolve_seed,
)
from app.services.report_service import parse_config


@pytest.fixture
def service():
    return ExperimentService()


def test_service_is_a_singleton(service):
    assert ExperimentService() is service


def test_reset_builds_a_fresh_service(service):
    ExperimentService.reset_instance()
    fresh = ExperimentService()
    assert fresh is not service
    assert ExperimentService() is fresh


def test_threaded_run_matches_sequential(service, small_config):
    sequential = service.run_experiment(small_config, workers=1)
    threaded = service.run_experiment(small_config, workers=3)
    assert threaded == sequential


def test_one_failing_member_does_not_affect_the_others(service, small_config):
    cfg = parse_config(small_config)
    good = service.run_member(cfg, 1, cfg.seed)
    bad_cfg = cfg.model_copy(
        update={"stability": cfg.stability.model_copy(update={"eps": 100.0})}
    )
    bad = service.run_member(bad_cfg, 0, cfg.seed)
    assert bad.report is None
    assert bad.error.startswith("InfeasibleFloor")
    assert service.run_member(cfg, 1, cfg.seed) == good


def test_invalid_document_raises_config_error(service):
    with pytest.raises(ConfigError):
        service.run_experiment({"scenario": {"variant": "internet", "n_sources": 0}})


class TestResolveSeed:
    def test_precedence(self, small_config, monkeypatch):
        cfg = parse_config(small_config)
        assert resolve_seed(cfg) == 11
        monkeypatch.setenv("MPTCP_LAB_SEED", "23")
        assert resolve_seed(cfg) == 23
        assert resolve_seed(cfg, 5) == 5

    def test_bad_environment_seed(self, small_config, monkeypatch):
        monkeypatch.setenv("MPTCP_LAB_SEED", "eleven")
        with pytest.raises(ConfigError):
            resolve_seed(parse_config(small_config))


class TestTracking:
    def test_sync_processing_records_the_response(self, service, small_config):
        response = service.process_experiment_sync(parse_config(small_config))
        info = service.get_experiment(response.id)
        assert info.status == ExperimentStatus.COMPLETED
        assert info.response == response
        assert response.message == "3 runs, 0 failed"

    def test_unknown_experiment(self, service):
        assert service.get_experiment("missing") is None


def test_member_trajectory_rejects_run_ids_outside_the_ensemble(small_config):
    with pytest.raises(ValueError):
        member_trajectory(parse_config(small_config), run_id=3)


def test_member_trajectory_uses_the_member_seed(small_config):
    small_config["dynamics"] = {"horizon": 0.1, "sample_every": 20}
    cfg = parse_config(small_config)
    second = member_trajectory(cfg, run_id=1)
    shifted = member_trajectory(cfg, run_id=0, seed=cfg.seed + 1)
    assert second.steps_taken == 100
    assert second.path_ids == shifted.path_ids
    assert np.array_equal(second.rates, shifted.rates)
