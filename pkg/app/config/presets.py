"""Calibrated experiment presets for the three scenario families.

The thresholds are calibration choices: smooth Internet and wireless runs stay
within the displacement and burden bounds, while synchronised datacenter bursts
push shared links into overload and trip the burden bound.
"""

from typing import Callable

from app.errors import UnknownPreset
from app.models.dynamics import ControllerKind, DynamicsConfig
from app.models.experiment import ExperimentConfig
from app.models.network import DatacenterScenario, InternetScenario, WirelessScenario
from app.models.stability import StabilityConfig
from app.models.traffic import ConstantTraffic, OnOffTraffic
from app.models.utility import UtilitySpec


def internet_preset() -> ExperimentConfig:
    return ExperimentConfig(
        name="internet",
        scenario=InternetScenario(
            n_sources=10,
            n_links=12,
            paths_per_source=2,
            capacity_min=10.0,
            capacity_max=40.0,
            max_path_length=3,
            utility=UtilitySpec(alpha=1.0, weight=1.0),
        ),
        controller=ControllerKind(variant="coupled", gain=50.0),
        traffic=ConstantTraffic(),
        stability=StabilityConfig(eps=0.01, displacement_tol=2.0, window=1.0),
        dynamics=DynamicsConfig(horizon=30.0, dt=1e-3, sample_every=10),
        ensemble_size=20,
        seed=0,
    )


def datacenter_preset() -> ExperimentConfig:
    return ExperimentConfig(
        name="datacenter",
        scenario=DatacenterScenario(
            pods=4, link_capacity=1.0, utility=UtilitySpec(alpha=1.0, weight=30.0)
        ),
        controller=ControllerKind(variant="coupled", gain=50.0),
        traffic=OnOffTraffic(period=0.5, duty=0.2, amplitude=5.0, quiescent=0.1),
        stability=StabilityConfig(eps=0.01, displacement_tol=1.0, window=1.0),
        dynamics=DynamicsConfig(
            horizon=5.0, dt=1e-3, sample_every=5, oscillation_window=1.0
        ),
        ensemble_size=20,
        seed=0,
    )


def wireless_preset() -> ExperimentConfig:
    return ExperimentConfig(
        name="wireless",
        scenario=WirelessScenario(
            n_devices=4,
            interfaces_per_device=2,
            interface_capacity=(10.0, 5.0),
            energy_cost=(0.1, 0.4),
            energy_weight=0.2,
            utility=UtilitySpec(alpha=1.0, weight=1.0),
        ),
        controller=ControllerKind(variant="coupled", gain=50.0),
        traffic=ConstantTraffic(),
        stability=StabilityConfig(eps=0.01, displacement_tol=1.0, window=1.0),
        dynamics=DynamicsConfig(horizon=30.0, dt=1e-3, sample_every=10),
        ensemble_size=20,
        seed=0,
    )


PRESETS: dict[str, Callable[[], ExperimentConfig]] = {
    "internet": internet_preset,
    "datacenter": datacenter_preset,
    "wireless": wireless_preset,
}


def preset(name: str) -> ExperimentConfig:
    """
    Calibrated default configuration of a scenario class.

    Raises:
        UnknownPreset: If no preset has that name.
    """
    try:
        return PRESETS[name.strip().lower()]()
    except KeyError:
        raise UnknownPreset(
            f"unknown preset '{name}', expected one of {sorted(PRESETS)}"
        ) from None
