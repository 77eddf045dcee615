"""Euclidean projections onto the rate floors and the capacity polytope."""

import numpy as np
from scipy.optimize import minimize

from app.config import get_logger

logger = get_logger(__name__)

POLISH_ITERATIONS = 25
EXACT_ULPS = 64


class FloorProjector:
    """Projects points onto the box {r : r >= floor}."""

    def __init__(self, floors: np.ndarray):
        self.floors = np.asarray(floors, dtype=float)

    def project(self, z: np.ndarray) -> np.ndarray:
        return np.maximum(z, self.floors)


class CapacityProjector:
    """
    Projects points onto {r : A r <= c, r >= floor} through the dual problem.

    For multipliers lam >= 0 the inner minimiser is r(lam) = max(floor, z - A^T lam)
    and the dual gradient is A r(lam) - c. L-BFGS-B maximises the dual far enough to
    identify the binding links and the paths held at their floor; a primal-dual
    active-set iteration then solves the KKT system on those sets exactly, so the
    projection is accurate to rounding. Multipliers are kept between calls as a
    warm start, and a final repair step absorbs the last rounding overshoot.
    """

    def __init__(self, routing: np.ndarray, capacities: np.ndarray, floors: np.ndarray):
        used = routing.any(axis=1)
        self.routing = routing[used]
        self.capacities = capacities[used]
        self.floors = np.asarray(floors, dtype=float)
        self.floor_loads = self.routing @ self.floors
        self._lam = np.zeros(len(self.capacities))
        self._scale = float(max(self.capacities.max(initial=1.0), 1.0))
        self._exact = EXACT_ULPS * float(np.finfo(float).eps) * self._scale

    def project(self, z: np.ndarray) -> np.ndarray:
        """
        Nearest feasible point to z.

        Args:
            z: Unconstrained point, one entry per path.

        Returns:
            np.ndarray: The projection of z.
        """
        clipped = np.maximum(z, self.floors)
        if np.all(self.routing @ clipped <= self.capacities):
            return clipped

        lam = self._polish(z, self._dual_ascent(z))
        self._lam = lam
        return self._repair(self._primal(z, lam))

    def kkt_error(self, z: np.ndarray, lam: np.ndarray) -> float:
        """
        Largest |min(lam_l, c_l - load_l)| at r(lam).

        Zero exactly when r(lam) is the projection of z.
        """
        slack = self.capacities - self.routing @ self._primal(z, lam)
        return float(np.max(np.abs(np.minimum(lam, slack)), initial=0.0))

    def _primal(self, z: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return np.maximum(self.floors, z - self.routing.T @ lam)

    def _dual_ascent(self, z: np.ndarray) -> np.ndarray:
        routing, capacities, floors = self.routing, self.capacities, self.floors

        def negative_dual(lam: np.ndarray) -> tuple[float, np.ndarray]:
            r = np.maximum(floors, z - routing.T @ lam)
            excess = routing @ r - capacities
            value = 0.5 * np.dot(r - z, r - z) + np.dot(lam, excess)
            return -value, -excess

        result = minimize(
            negative_dual,
            self._lam,
            jac=True,
            method="L-BFGS-B",
            bounds=[(0.0, None)] * len(capacities),
            options={"maxiter": 500, "ftol": 1e-16, "gtol": 1e-12 * self._scale},
        )
        if not result.success:
            logger.debug(f"Projection dual stopped early: {result.message}")
        return np.maximum(result.x, 0.0)

    def _polish(self, z: np.ndarray, lam: np.ndarray) -> np.ndarray:
        """
        Primal-dual active-set refinement of the multipliers.

        With F the paths above their floor and S the links treated as binding, the
        KKT conditions reduce to the linear system A_SF A_SF^T lam_S = A_S r_0 - c_S,
        where r_0 is z on F and the floor elsewhere. Each pass solves it, drops links
        whose multiplier comes out negative and adds links the new point overloads.
        The multipliers with the smallest KKT error seen are returned.
        """
        routing, floors = self.routing, self.floors
        best, best_error = lam, self.kkt_error(z, lam)
        seen: set[bytes] = set()

        for _ in range(POLISH_ITERATIONS):
            if best_error <= self._exact:
                break
            r = self._primal(z, lam)
            free = z - routing.T @ lam > floors
            binding = (lam > 0) | (routing @ r > self.capacities)
            sets = np.concatenate([free, binding]).tobytes()
            if not free.any() or not binding.any() or sets in seen:
                break
            seen.add(sets)

            rows = routing[binding][:, free]
            anchored = np.where(free, z, floors)
            rhs = routing[binding] @ anchored - self.capacities[binding]
            solution = np.linalg.lstsq(rows @ rows.T, rhs, rcond=None)[0]

            candidate = np.zeros_like(lam)
            candidate[binding] = np.maximum(solution, 0.0)
            if np.array_equal(candidate, lam):
                break
            lam = candidate
            error = self.kkt_error(z, lam)
            if error < best_error:
                best, best_error = lam, error

        if best_error > self._exact:
            logger.debug(f"Projection polish left KKT error {best_error:.3e}")
        return best

    def _repair(self, r: np.ndarray) -> np.ndarray:
        loads = self.routing @ r
        over = loads > self.capacities
        if not over.any():
            return r

        excess = r - self.floors
        movable = self.routing[over] @ excess
        with np.errstate(divide="ignore", invalid="ignore"):
            link_factor = np.where(
                movable > 0,
                (self.capacities[over] - self.floor_loads[over]) / movable,
                1.0,
            )
        link_factor = np.clip(link_factor, 0.0, 1.0)

        # A path is shrunk by the tightest overloaded link it crosses.
        crossing = self.routing[over].astype(bool)
        path_factor = np.ones_like(r)
        for factor, mask in zip(link_factor, crossing):
            path_factor[mask] = np.minimum(path_factor[mask], factor)

        logger.debug(f"Projection repair touched {int(over.sum())} links")
        return self.floors + path_factor * excess
