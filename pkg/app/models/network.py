"""Topology data model: links, paths, sources, networks and scenario specifications."""

from typing import Annotated, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    field_validator,
    model_validator,
)

from app.errors import UnknownLink
from app.models.utility import UtilitySpec

MAX_SEED = 2**64


class Link(BaseModel):
    """A capacitated link; capacity is in Mbit/s."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(..., min_length=1, description="Link identifier, unique per network")
    capacity: float = Field(..., gt=0, description="Link capacity (Mbit/s)")
    tag: str = Field("", description="Free-form label, e.g. 'core', 'tor', 'wifi'")
    endpoints: Optional[tuple[str, str]] = Field(
        None, description="Node ids joined by the link, when the topology has nodes"
    )


class Path(BaseModel):
    """An ordered, loop-free sequence of links owned by one source."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(..., min_length=1, description="Path identifier")
    source_id: str = Field(..., description="Owning source")
    link_ids: tuple[str, ...] = Field(
        ..., min_length=1, description="Links traversed, in order"
    )
    energy_cost: float = Field(
        0.0, ge=0, description="Energy per unit rate (J per Mbit)"
    )

    @field_validator("link_ids")
    @classmethod
    def validate_no_repeated_link(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        if len(set(v)) != len(v):
            raise ValueError(f"path repeats a link: {list(v)}")
        return v

    @property
    def hops(self) -> int:
        return len(self.link_ids)


class Source(BaseModel):
    """A traffic source owning one or more paths."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(..., min_length=1, description="Source identifier")
    path_ids: tuple[str, ...] = Field(
        ..., min_length=1, description="Paths owned by the source"
    )
    primary_path_id: str = Field(
        ..., description="Path used by the single-path baseline"
    )
    utility: UtilitySpec = Field(
        default_factory=UtilitySpec, description="Utility of the source"
    )

    @model_validator(mode="after")
    def validate_primary(self) -> "Source":
        if self.primary_path_id not in self.path_ids:
            raise ValueError(
                f"primary path {self.primary_path_id} is not among the paths of "
                f"source {self.id}"
            )
        if len(set(self.path_ids)) != len(self.path_ids):
            raise ValueError(f"source {self.id} lists a path twice")
        return self

    @property
    def n_paths(self) -> int:
        return len(self.path_ids)


def reference_problems(
    links: tuple[Link, ...], sources: tuple[Source, ...], paths: tuple[Path, ...]
) -> list[str]:
    """
    Collect referential-integrity problems of a would-be network.

    Args:
        links: Candidate links.
        sources: Candidate sources.
        paths: Candidate paths.

    Returns:
        list[str]: Human readable problems; empty when the structure is sound.
    """
    problems: list[str] = []

    if not links:
        problems.append("network has no links")
    if not sources:
        problems.append("network has no sources")

    for kind, items in (("link", links), ("source", sources), ("path", paths)):
        ids = [item.id for item in items]
        if len(set(ids)) != len(ids):
            problems.append(f"duplicate {kind} ids")

    link_ids = {link.id for link in links}
    source_by_id = {source.id: source for source in sources}
    owner_of: dict[str, str] = {}

    for source in sources:
        for path_id in source.path_ids:
            if path_id in owner_of:
                problems.append(f"path {path_id} is owned by more than one source")
            owner_of[path_id] = source.id

    for path in paths:
        missing = [lid for lid in path.link_ids if lid not in link_ids]
        if missing:
            problems.append(f"path {path.id} references unknown links {missing}")
        if path.source_id not in source_by_id:
            problems.append(f"path {path.id} references unknown source {path.source_id}")
        elif owner_of.get(path.id) != path.source_id:
            problems.append(
                f"path {path.id} is not listed by its source {path.source_id}"
            )

    path_ids = {path.id for path in paths}
    for path_id in owner_of:
        if path_id not in path_ids:
            problems.append(f"source {owner_of[path_id]} lists unknown path {path_id}")

    return problems


class Network(BaseModel):
    """
    Immutable container of links, sources and paths.

    Tuples keep the generation order, which fixes the ordering of every vector
    derived from the network.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field("", description="Scenario label")
    links: tuple[Link, ...] = Field(..., description="Links of the network")
    sources: tuple[Source, ...] = Field(..., description="Sources of the network")
    paths: tuple[Path, ...] = Field(..., description="Paths of the network")

    _link_index: dict[str, Link] = PrivateAttr(default_factory=dict)
    _path_index: dict[str, Path] = PrivateAttr(default_factory=dict)
    _source_index: dict[str, Source] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def validate_references(self) -> "Network":
        problems = reference_problems(self.links, self.sources, self.paths)
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def model_post_init(self, __context) -> None:
        self._link_index = {link.id: link for link in self.links}
        self._path_index = {path.id: path for path in self.paths}
        self._source_index = {source.id: source for source in self.sources}

    def link(self, link_id: str) -> Link:
        try:
            return self._link_index[link_id]
        except KeyError:
            raise UnknownLink(f"unknown link: {link_id}") from None

    def path(self, path_id: str) -> Path:
        return self._path_index[path_id]

    def source(self, source_id: str) -> Source:
        return self._source_index[source_id]

    @property
    def link_ids(self) -> tuple[str, ...]:
        return tuple(link.id for link in self.links)

    @property
    def path_ids(self) -> tuple[str, ...]:
        return tuple(path.id for path in self.paths)

    @property
    def source_ids(self) -> tuple[str, ...]:
        return tuple(source.id for source in self.sources)

    @property
    def total_capacity(self) -> float:
        return float(sum(link.capacity for link in self.links))

    def paths_of(self, source_id: str) -> tuple[Path, ...]:
        return tuple(self._path_index[pid] for pid in self.source(source_id).path_ids)


# Scenario specifications. Counts are checked by build_scenario so that a zero count
# surfaces as InvalidSpec rather than a pydantic error.


class InternetScenario(BaseModel):
    """Random source/link assignment with short random paths."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["internet"] = "internet"
    n_sources: int = Field(10, ge=0, description="Number of sources")
    n_links: int = Field(12, ge=0, description="Number of links")
    paths_per_source: int = Field(2, ge=0, description="Paths per source (>= 2)")
    capacity_min: float = Field(10.0, gt=0, description="Smallest link capacity")
    capacity_max: float = Field(40.0, gt=0, description="Largest link capacity")
    max_path_length: int = Field(3, ge=0, description="Longest path, in links")
    utility: UtilitySpec = Field(default_factory=UtilitySpec)
    seed: int = Field(0, ge=0, lt=MAX_SEED, description="Generator seed")


class DatacenterScenario(BaseModel):
    """k-ary three-layer fat-tree with multi-homed hosts."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["datacenter"] = "datacenter"
    pods: int = Field(4, ge=0, description="Fat-tree arity k (even, >= 4)")
    link_capacity: float = Field(10.0, gt=0, description="Capacity of every link")
    capacity_jitter: float = Field(
        0.1,
        ge=0,
        lt=1,
        description="Seeded relative spread of link capacities around link_capacity",
    )
    utility: UtilitySpec = Field(default_factory=UtilitySpec)
    seed: int = Field(0, ge=0, lt=MAX_SEED, description="Generator seed")


class WirelessScenario(BaseModel):
    """Devices with several radio interfaces, each a dedicated single-link path."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["wireless"] = "wireless"
    n_devices: int = Field(4, ge=0, description="Number of devices (sources)")
    interfaces_per_device: int = Field(2, ge=0, description="Interfaces per device")
    interface_capacity: Union[float, tuple[float, ...]] = Field(
        (10.0, 5.0), description="Capacity per interface, scalar or one per interface"
    )
    energy_cost: Union[float, tuple[float, ...]] = Field(
        (0.1, 0.4), description="Energy cost per interface, scalar or one per interface"
    )
    energy_weight: float = Field(0.2, ge=0, description="Energy weight gamma")
    capacity_jitter: float = Field(
        0.1,
        ge=0,
        lt=1,
        description="Seeded relative spread of every interface capacity",
    )
    utility: UtilitySpec = Field(default_factory=UtilitySpec)
    seed: int = Field(0, ge=0, lt=MAX_SEED, description="Generator seed")


ScenarioSpec = Annotated[
    Union[InternetScenario, DatacenterScenario, WirelessScenario],
    Field(discriminator="variant"),
]
