"""Dense numpy view of a Network used by the solvers and the fluid dynamics."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

import numpy as np

from app.errors import AllocationMismatch

if TYPE_CHECKING:
    from app.models.allocation import RateAllocation
    from app.models.network import Network


@dataclass(frozen=True, eq=False)
class NetworkArrays:
    """
    Incidence matrices and per-path / per-source parameters in network order.

    Attributes:
        path_ids: Path ids, column order of ``routing`` and ``membership``.
        link_ids: Link ids, row order of ``routing``.
        source_ids: Source ids, row order of ``membership``.
        routing: Link-path incidence A (links x paths), A[l, p] = 1 iff l in p.
        membership: Source-path incidence (sources x paths).
        path_source: Index of the owning source for every path.
        capacities: Link capacities.
        hops: Number of links on every path.
        energy_costs: Energy cost per unit rate of every path.
        primary: Boolean mask of primary paths.
        alphas, weights, energy_weights: Utility parameters per source.
    """

    path_ids: tuple[str, ...]
    link_ids: tuple[str, ...]
    source_ids: tuple[str, ...]
    routing: np.ndarray
    membership: np.ndarray
    path_source: np.ndarray
    capacities: np.ndarray
    hops: np.ndarray
    energy_costs: np.ndarray
    primary: np.ndarray
    alphas: np.ndarray
    weights: np.ndarray
    energy_weights: np.ndarray

    @classmethod
    def from_network(cls, net: "Network") -> "NetworkArrays":
        link_pos = {link_id: i for i, link_id in enumerate(net.link_ids)}
        source_pos = {source_id: i for i, source_id in enumerate(net.source_ids)}
        primaries = {source.primary_path_id for source in net.sources}

        n_links, n_paths, n_sources = len(net.links), len(net.paths), len(net.sources)
        routing = np.zeros((n_links, n_paths))
        membership = np.zeros((n_sources, n_paths))
        path_source = np.zeros(n_paths, dtype=int)

        for j, path in enumerate(net.paths):
            for link_id in path.link_ids:
                routing[link_pos[link_id], j] = 1.0
            path_source[j] = source_pos[path.source_id]
            membership[path_source[j], j] = 1.0

        return cls(
            path_ids=net.path_ids,
            link_ids=net.link_ids,
            source_ids=net.source_ids,
            routing=routing,
            membership=membership,
            path_source=path_source,
            capacities=np.array([link.capacity for link in net.links], dtype=float),
            hops=np.array([path.hops for path in net.paths], dtype=float),
            energy_costs=np.array([p.energy_cost for p in net.paths], dtype=float),
            primary=np.array([p.id in primaries for p in net.paths], dtype=bool),
            alphas=np.array([s.utility.alpha for s in net.sources], dtype=float),
            weights=np.array([s.utility.weight for s in net.sources], dtype=float),
            energy_weights=np.array(
                [s.utility.energy_weight for s in net.sources], dtype=float
            ),
        )

    @property
    def n_paths(self) -> int:
        return len(self.path_ids)

    @property
    def path_energy_weights(self) -> np.ndarray:
        """gamma of the owning source times the path's energy cost."""
        return self.energy_weights[self.path_source] * self.energy_costs

    def vector(self, rates: Mapping[str, float]) -> np.ndarray:
        """
        Convert a path-id keyed mapping into a vector in path order.

        Raises:
            AllocationMismatch: If the keys differ from the network's path ids.
        """
        if set(rates) != set(self.path_ids):
            raise AllocationMismatch(
                "allocation paths do not match the network paths: "
                f"{sorted(set(rates) ^ set(self.path_ids))[:5]}"
            )
        return np.array([rates[pid] for pid in self.path_ids], dtype=float)

    def allocation(self, r: np.ndarray, mode: str = "multipath") -> "RateAllocation":
        from app.models.allocation import RateAllocation

        return RateAllocation(
            rates={pid: float(v) for pid, v in zip(self.path_ids, r)}, mode=mode
        )

    def loads(self, r: np.ndarray) -> np.ndarray:
        return self.routing @ r

    def totals(self, r: np.ndarray) -> np.ndarray:
        return self.membership @ r
