import pytest

from app.config.presets import PRESETS, preset
from app.errors import ConfigError, UnknownPreset
from app.services.scenario_service import build_scenario


def test_internet_uses_constant_traffic():
    cfg = preset("internet")
    assert cfg.scenario.variant == "internet"
    assert cfg.traffic.variant == "constant"
    assert cfg.scenario.paths_per_source >= 2


def test_datacenter_uses_bursty_traffic():
    cfg = preset("datacenter")
    assert cfg.scenario.variant == "datacenter"
    assert cfg.traffic.variant == "on_off"
    assert cfg.traffic.amplitude > 1


def test_wireless_devices_have_several_interfaces_and_an_energy_price():
    cfg = preset("wireless")
    assert cfg.scenario.interfaces_per_device >= 2
    assert cfg.scenario.energy_weight > 0


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_builds(name):
    cfg = preset(name)
    net = build_scenario(cfg.scenario)
    assert all(source.n_paths >= 2 for source in net.sources)
    assert cfg.ensemble_size >= 20


def test_names_are_case_insensitive():
    assert preset(" Wireless ") == preset("wireless")


def test_unknown_preset():
    with pytest.raises(UnknownPreset) as excinfo:
        preset("satellite")
    assert isinstance(excinfo.value, ConfigError)
    assert "internet" in str(excinfo.value)
