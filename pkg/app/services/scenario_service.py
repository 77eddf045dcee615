"""Scenario generators for the Internet, datacenter and wireless families.

Every generator is a pure function of its specification (seed included): the same
spec always yields the same ids, capacities and adjacency.
"""

from typing import Mapping, Sequence, Union

import numpy as np
from pydantic import ValidationError

from app.config import get_logger
from app.errors import InvalidSpec
from app.models.allocation import RateAllocation
from app.models.network import (
    DatacenterScenario,
    InternetScenario,
    Link,
    Network,
    Path,
    ScenarioSpec,
    Source,
    WirelessScenario,
    reference_problems,
)
from app.models.utility import UtilitySpec

logger = get_logger(__name__)

INTERFACE_TAGS = ("wifi", "cellular")


def build_scenario(spec: ScenarioSpec) -> Network:
    """
    Build the network described by a scenario specification.

    Args:
        spec: Internet, datacenter or wireless scenario.

    Returns:
        Network: A validated, immutable network.

    Raises:
        InvalidSpec: If a count is zero, the fat-tree arity is odd or too small, or
            the requested paths cannot be made disjoint.
    """
    check_scenario(spec)

    if isinstance(spec, InternetScenario):
        net = _build_internet(spec)
    elif isinstance(spec, DatacenterScenario):
        net = _build_datacenter(spec)
    elif isinstance(spec, WirelessScenario):
        net = _build_wireless(spec)
    else:
        raise InvalidSpec(f"unknown scenario type: {type(spec).__name__}")

    validate_network(net)
    logger.info(
        f"Built {spec.variant} scenario (seed {spec.seed}): {len(net.links)} links, "
        f"{len(net.sources)} sources, {len(net.paths)} paths"
    )
    return net


def check_scenario(spec: ScenarioSpec):
    """
    Check the invariants of a scenario specification.

    Raises:
        InvalidSpec: On the first violated invariant.
    """
    if isinstance(spec, InternetScenario):
        for field in ("n_sources", "n_links", "paths_per_source", "max_path_length"):
            if getattr(spec, field) <= 0:
                raise InvalidSpec(f"{field} must be positive")
        if spec.paths_per_source < 2:
            raise InvalidSpec("paths_per_source must be at least 2")
        if spec.capacity_min > spec.capacity_max:
            raise InvalidSpec("capacity_min exceeds capacity_max")
        if spec.n_links < spec.paths_per_source:
            raise InvalidSpec(
                f"{spec.paths_per_source} paths with distinct first links need at "
                f"least as many links, got {spec.n_links}"
            )
    elif isinstance(spec, DatacenterScenario):
        if spec.pods <= 0:
            raise InvalidSpec("pods must be positive")
        if spec.pods % 2:
            raise InvalidSpec(f"fat-tree arity must be even, got {spec.pods}")
        if spec.pods < 4:
            raise InvalidSpec("fat-tree arity 2 gives a single path per host")
    elif isinstance(spec, WirelessScenario):
        if spec.n_devices <= 0:
            raise InvalidSpec("n_devices must be positive")
        if spec.interfaces_per_device < 2:
            raise InvalidSpec("interfaces_per_device must be at least 2")
        capacities = _per_interface(spec.interface_capacity, spec, "interface_capacity")
        costs = _per_interface(spec.energy_cost, spec, "energy_cost")
        if min(capacities) <= 0:
            raise InvalidSpec("interface capacities must be positive")
        if min(costs) < 0:
            raise InvalidSpec("energy costs must be nonnegative")


def validate_network(net: Network):
    """
    Re-run the referential integrity checks on a network.

    Raises:
        InvalidSpec: Listing every problem found.
    """
    problems = reference_problems(net.links, net.sources, net.paths)
    if problems:
        raise InvalidSpec("; ".join(problems))


def paths_through_link(net: Network, link_id: str) -> frozenset[str]:
    """
    Paths whose link sequence contains the given link.

    Raises:
        UnknownLink: If the link is not part of the network.
    """
    net.link(link_id)
    return frozenset(path.id for path in net.paths if link_id in path.link_ids)


def link_loads(net: Network, alloc: RateAllocation) -> dict[str, float]:
    """Per-link load: sum of the rates of the paths crossing each link."""
    loads = {link_id: 0.0 for link_id in net.link_ids}
    for path in net.paths:
        rate = alloc.rates[path.id]
        for link_id in path.link_ids:
            loads[link_id] += rate
    return loads


def build_network(
    links: Sequence[Mapping], sources: Sequence[Mapping], paths: Sequence[Mapping]
) -> Network:
    """
    Build a hand-written network from plain mappings.

    Raises:
        InvalidSpec: If the mappings do not form a valid network.
    """
    try:
        return Network(
            links=tuple(Link(**link) for link in links),
            sources=tuple(Source(**source) for source in sources),
            paths=tuple(Path(**path) for path in paths),
        )
    except ValidationError as e:
        raise InvalidSpec(str(e)) from e


def _build_internet(spec: InternetScenario) -> Network:
    rng = np.random.default_rng(spec.seed)
    capacities = rng.uniform(spec.capacity_min, spec.capacity_max, size=spec.n_links)
    links = tuple(
        Link(id=f"link-{i}", capacity=float(c), tag="wan")
        for i, c in enumerate(capacities)
    )

    sources: list[Source] = []
    paths: list[Path] = []
    for s in range(spec.n_sources):
        source_id = f"src-{s}"
        first_links = rng.choice(spec.n_links, size=spec.paths_per_source, replace=False)
        path_ids = []
        for j, first in enumerate(first_links):
            length = int(rng.integers(1, spec.max_path_length + 1))
            length = min(length, spec.n_links)
            others = np.delete(np.arange(spec.n_links), first)
            tail = rng.choice(others, size=length - 1, replace=False)
            path_id = f"{source_id}/path-{j}"
            paths.append(
                Path(
                    id=path_id,
                    source_id=source_id,
                    link_ids=tuple(f"link-{int(i)}" for i in (first, *tail)),
                )
            )
            path_ids.append(path_id)
        sources.append(
            Source(
                id=source_id,
                path_ids=tuple(path_ids),
                primary_path_id=path_ids[0],
                utility=spec.utility,
            )
        )

    return Network(
        name="internet", links=links, sources=tuple(sources), paths=tuple(paths)
    )


def _build_datacenter(spec: DatacenterScenario) -> Network:
    k = spec.pods
    half = k // 2
    rng = np.random.default_rng(spec.seed)
    links: list[Link] = []

    def add_link(a: str, b: str, tag: str) -> str:
        link_id = f"{a}~{b}"
        capacity = _jittered(spec.link_capacity, spec.capacity_jitter, rng)
        links.append(Link(id=link_id, capacity=capacity, tag=tag, endpoints=(a, b)))
        return link_id

    # Switch fabric: edge-agg full mesh inside a pod, agg a of every pod reaches
    # cores a*half .. a*half + half - 1.
    for pod in range(k):
        for e in range(half):
            for a in range(half):
                add_link(f"edge-{pod}-{e}", f"agg-{pod}-{a}", "aggregation")
        for a in range(half):
            for j in range(half):
                add_link(f"agg-{pod}-{a}", f"core-{a * half + j}", "core")

    sources: list[Source] = []
    paths: list[Path] = []
    for pod in range(k):
        for h in range(half * half):
            host = f"host-{pod}-{h}"
            source_id = host
            path_ids = []
            core_column = h // half
            for e in range(half):
                a = (e + h) % half
                host_link = add_link(host, f"edge-{pod}-{e}", "tor")
                path_id = f"{host}/path-{e}"
                paths.append(
                    Path(
                        id=path_id,
                        source_id=source_id,
                        link_ids=(
                            host_link,
                            f"edge-{pod}-{e}~agg-{pod}-{a}",
                            f"agg-{pod}-{a}~core-{a * half + core_column}",
                        ),
                    )
                )
                path_ids.append(path_id)
            sources.append(
                Source(
                    id=source_id,
                    path_ids=tuple(path_ids),
                    primary_path_id=path_ids[0],
                    utility=spec.utility,
                )
            )

    return Network(
        name="datacenter",
        links=tuple(links),
        sources=tuple(sources),
        paths=tuple(paths),
    )


def _build_wireless(spec: WirelessScenario) -> Network:
    capacities = _per_interface(spec.interface_capacity, spec, "interface_capacity")
    rng = np.random.default_rng(spec.seed)
    costs = _per_interface(spec.energy_cost, spec, "energy_cost")
    utility = UtilitySpec(
        alpha=spec.utility.alpha,
        weight=spec.utility.weight,
        energy_weight=spec.energy_weight,
    )

    links: list[Link] = []
    sources: list[Source] = []
    paths: list[Path] = []
    for d in range(spec.n_devices):
        device = f"dev-{d}"
        path_ids = []
        for j in range(spec.interfaces_per_device):
            tag = INTERFACE_TAGS[j] if j < len(INTERFACE_TAGS) else f"radio{j}"
            link_id = f"{device}/if-{j}"
            links.append(
                Link(
                    id=link_id,
                    capacity=_jittered(capacities[j], spec.capacity_jitter, rng),
                    tag=tag,
                    endpoints=(device, f"ap-{tag}"),
                )
            )
            path_id = f"{device}/path-{j}"
            paths.append(
                Path(
                    id=path_id,
                    source_id=device,
                    link_ids=(link_id,),
                    energy_cost=costs[j],
                )
            )
            path_ids.append(path_id)
        sources.append(
            Source(
                id=device,
                path_ids=tuple(path_ids),
                primary_path_id=path_ids[0],
                utility=utility,
            )
        )

    return Network(
        name="wireless", links=tuple(links), sources=tuple(sources), paths=tuple(paths)
    )


def _per_interface(
    value: Union[float, tuple[float, ...]], spec: WirelessScenario, field: str
) -> list[float]:
    if isinstance(value, (int, float)):
        return [float(value)] * spec.interfaces_per_device
    if len(value) != spec.interfaces_per_device:
        raise InvalidSpec(
            f"{field} lists {len(value)} values for "
            f"{spec.interfaces_per_device} interfaces"
        )
    return [float(v) for v in value]


def _jittered(capacity: float, jitter: float, rng: np.random.Generator) -> float:
    """capacity times a seeded factor drawn from U[1 - jitter, 1 + jitter]."""
    if jitter == 0:
        return float(capacity)
    return float(capacity * rng.uniform(1.0 - jitter, 1.0 + jitter))
