"""
Preset ensembles.

The full 20-member runs are slow (``pytest -m slow``); three-member ensembles with
a shorter horizon pin the same verdicts in the regular suite.
"""

import pytest

from app.config.presets import preset
from app.models.experiment import ExperimentConfig
from app.models.stability import Classification
from app.services.experiment_service import run_experiment


def _reduced(name: str, **dynamics) -> ExperimentConfig:
    cfg = preset(name)
    update = {"ensemble_size": 3}
    if dynamics:
        update["dynamics"] = cfg.dynamics.model_copy(update=dynamics)
    return cfg.model_copy(update=update)


@pytest.mark.parametrize("name", ["internet", "wireless"])
def test_reduced_smooth_ensembles_are_stable(name):
    summary = run_experiment(_reduced(name))
    assert summary.failures == 0
    assert [run.report.classification for run in summary.runs] == [
        Classification.STABLE
    ] * 3


def test_reduced_bursty_datacenter_fails_on_burden():
    summary = run_experiment(_reduced("datacenter", horizon=2.0))
    assert summary.failures == 0
    assert summary.fraction_stable == 0.0
    for run in summary.runs:
        report = run.report
        assert not report.constraint_verdicts.burden_ok
        assert report.burden_displacement > report.burden_bound


@pytest.mark.slow
@pytest.mark.parametrize("name", ["internet", "wireless"])
def test_smooth_scenarios_are_mostly_stable(name):
    summary = run_experiment(preset(name))
    assert len(summary.runs) == 20
    assert summary.failures == 0
    assert summary.fraction_stable >= 0.9


@pytest.mark.slow
def test_bursty_datacenter_is_mostly_unstable():
    summary = run_experiment(preset("datacenter"))
    assert len(summary.runs) == 20
    assert summary.failures == 0
    assert summary.fraction_stable <= 0.2

    unstable = [run.report for run in summary.runs if not run.stable]
    burden_failures = sum(
        not report.constraint_verdicts.burden_ok for report in unstable
    )
    assert burden_failures > len(unstable) / 2


@pytest.mark.slow
def test_ensembles_are_reproducible():
    cfg = preset("wireless").model_copy(update={"ensemble_size": 4})
    assert run_experiment(cfg, seed=3) == run_experiment(cfg, seed=3)
