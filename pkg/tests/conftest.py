import pytest

from app.models.network import Network
from app.services.scenario_service import build_network


def single_link(capacity: float, weights: tuple[float, ...]) -> Network:
    """One link shared by single-path log-utility sources with the given weights."""
    return build_network(
        links=[{"id": "l0", "capacity": capacity}],
        sources=[
            {
                "id": f"s{i}",
                "path_ids": [f"s{i}/p0"],
                "primary_path_id": f"s{i}/p0",
                "utility": {"weight": w},
            }
            for i, w in enumerate(weights)
        ],
        paths=[
            {"id": f"s{i}/p0", "source_id": f"s{i}", "link_ids": ["l0"]}
            for i in range(len(weights))
        ],
    )


def disjoint_links(*capacities: float) -> Network:
    """One log-utility source with one single-link path per capacity."""
    path_ids = [f"s0/p{j}" for j in range(len(capacities))]
    return build_network(
        links=[{"id": f"l{j}", "capacity": c} for j, c in enumerate(capacities)],
        sources=[{"id": "s0", "path_ids": path_ids, "primary_path_id": path_ids[0]}],
        paths=[
            {"id": pid, "source_id": "s0", "link_ids": [f"l{j}"]}
            for j, pid in enumerate(path_ids)
        ],
    )


@pytest.fixture
def shared_link() -> Network:
    """Two single-path sources on one link of capacity 10."""
    return single_link(10.0, (1.0, 1.0))


@pytest.fixture
def pooled() -> Network:
    """One source over two disjoint links with capacities 4 and 6."""
    return disjoint_links(4.0, 6.0)


@pytest.fixture
def three_hop() -> Network:
    """Two sources, each a 3-link primary path and a 1-link alternative."""
    return build_network(
        links=[
            {"id": "a", "capacity": 10.0},
            {"id": "b", "capacity": 10.0},
            {"id": "c", "capacity": 10.0},
            {"id": "x", "capacity": 5.0},
            {"id": "y", "capacity": 5.0},
        ],
        sources=[
            {"id": "s0", "path_ids": ["s0/p0", "s0/p1"], "primary_path_id": "s0/p0"},
            {"id": "s1", "path_ids": ["s1/p0", "s1/p1"], "primary_path_id": "s1/p0"},
        ],
        paths=[
            {"id": "s0/p0", "source_id": "s0", "link_ids": ["a", "b", "c"]},
            {"id": "s0/p1", "source_id": "s0", "link_ids": ["x"]},
            {"id": "s1/p0", "source_id": "s1", "link_ids": ["a", "b", "c"]},
            {"id": "s1/p1", "source_id": "s1", "link_ids": ["y"]},
        ],
    )


@pytest.fixture(autouse=True)
def clear_seed_override(monkeypatch):
    monkeypatch.delenv("MPTCP_LAB_SEED", raising=False)
    monkeypatch.delenv("API_KEY", raising=False)


@pytest.fixture
def small_config() -> dict:
    """A quick constant-traffic Internet experiment with three members."""
    return {
        "name": "small",
        "scenario": {
            "variant": "internet",
            "n_sources": 3,
            "n_links": 4,
            "paths_per_source": 2,
            "max_path_length": 2,
        },
        "stability": {"displacement_tol": 2.0},
        "ensemble_size": 3,
        "seed": 11,
    }
