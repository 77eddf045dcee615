import numpy as np
import pytest

from app.config.presets import preset
from app.errors import AllocationMismatch, DimensionMismatch, EmptyTrajectory
from app.models.allocation import RateAllocation
from app.models.dynamics import ControllerKind, DynamicsConfig, Trajectory
from app.models.network import DatacenterScenario
from app.models.stability import Classification, StabilityConfig
from app.services.dynamics_service import integrate
from app.services.equilibrium_service import solve_baseline
from app.services.scenario_service import build_scenario, link_loads
from app.services.stability_service import (
    assess,
    assess_time_varying,
    burden_bound,
    compute_burden,
    euclidean_distance,
)
from tests.conftest import disjoint_links

CONFIG = StabilityConfig()


class TestEuclideanDistance:
    def test_identity(self):
        assert euclidean_distance([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_pythagorean_triple(self):
        assert euclidean_distance([3.0, 0.0], [0.0, 4.0]) == pytest.approx(5.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            euclidean_distance([1.0], [1.0, 2.0])

    def test_metric_properties_on_random_vectors(self):
        rng = np.random.default_rng(5)
        for _ in range(10_000):
            n = int(rng.integers(1, 6))
            a, b, c = rng.normal(scale=10.0, size=(3, n))
            ab = euclidean_distance(a, b)
            assert ab == euclidean_distance(b, a)
            assert ab <= euclidean_distance(a, c) + euclidean_distance(c, b) + 1e-12
            assert euclidean_distance(a, a) == 0.0
            assert (ab == 0.0) == bool(np.all(a == b))


class TestBurden:
    def test_rate_times_hops(self, three_hop):
        alloc = RateAllocation(
            rates={"s0/p0": 2.0, "s0/p1": 1.0, "s1/p0": 0.0, "s1/p1": 0.0}
        )
        burdens = compute_burden(three_hop, alloc).burdens
        assert burdens["s0/p0"] == 6.0
        assert burdens["s0/p1"] == 1.0

    def test_zero_allocation_has_zero_burden(self, three_hop):
        burden = compute_burden(three_hop, RateAllocation.zeros(three_hop))
        assert all(b == 0.0 for b in burden.burdens.values())
        assert burden.total == 0.0

    def test_total_burden_equals_total_link_load(self):
        net = build_scenario(DatacenterScenario(pods=4))
        rng = np.random.default_rng(3)
        alloc = RateAllocation(
            rates={pid: float(rng.uniform(0, 2)) for pid in net.path_ids}
        )
        total_load = sum(link_loads(net, alloc).values())
        assert compute_burden(net, alloc).total == pytest.approx(total_load, rel=1e-12)

    def test_default_bound_is_half_the_capacity(self, three_hop):
        assert burden_bound(three_hop, CONFIG) == pytest.approx(0.5 * 40.0)
        explicit = StabilityConfig(burden_bound=3.0)
        assert burden_bound(three_hop, explicit) == 3.0


class TestAssess:
    @pytest.fixture
    def baseline(self, pooled):
        return RateAllocation(rates={"s0/p0": 4.0, "s0/p1": 0.0}, mode="baseline")

    def test_identical_allocations_are_stable(self, pooled, baseline):
        report = assess(pooled, baseline, baseline, CONFIG)
        assert report.displacement == 0.0
        assert report.burden_displacement == 0.0
        assert report.constraint_verdicts.all_ok
        assert report.classification == Classification.STABLE

    def test_overloaded_link_is_unstable(self, pooled, baseline):
        overloaded = RateAllocation(rates={"s0/p0": 4.4, "s0/p1": 0.0})
        report = assess(pooled, baseline, overloaded, CONFIG)
        assert not report.constraint_verdicts.capacity_ok
        assert report.classification == Classification.UNSTABLE

    def test_path_below_floor_is_unstable(self, pooled, baseline):
        starved = RateAllocation(rates={"s0/p0": 4.0, "s0/p1": 0.001})
        report = assess(pooled, baseline, starved, CONFIG)
        assert not report.constraint_verdicts.floor_ok
        assert report.classification == Classification.UNSTABLE

    def test_single_path_network_fails_paths_check(self, shared_link):
        alloc = RateAllocation(rates={"s0/p0": 5.0, "s1/p0": 5.0})
        report = assess(shared_link, alloc, alloc, CONFIG)
        assert not report.constraint_verdicts.paths_ok
        assert report.classification == Classification.UNSTABLE

    def test_displacement_uses_source_totals(self, pooled, baseline):
        pooled_alloc = RateAllocation(rates={"s0/p0": 4.0, "s0/p1": 6.0})
        report = assess(pooled, baseline, pooled_alloc, CONFIG)
        assert report.displacement == pytest.approx(6.0)
        assert report.path_displacement == pytest.approx(6.0)
        assert report.burden_displacement == pytest.approx(6.0)

    def test_displacement_bound_is_relative_to_baseline(self, pooled, baseline):
        pooled_alloc = RateAllocation(rates={"s0/p0": 4.0, "s0/p1": 6.0})
        relative = assess(pooled, baseline, pooled_alloc, CONFIG)
        assert relative.displacement_bound == pytest.approx(4.0)
        assert relative.classification == Classification.UNSTABLE

        generous = StabilityConfig(displacement_tol=2.0, burden_bound=10.0)
        assert assess(pooled, baseline, pooled_alloc, generous).classification == (
            Classification.STABLE
        )

        absolute = StabilityConfig(
            displacement_tol=10.0, displacement_scale="absolute", burden_bound=10.0
        )
        report = assess(pooled, baseline, pooled_alloc, absolute)
        assert report.displacement_bound == 10.0
        assert report.classification == Classification.STABLE

    def test_burden_bound_trips(self, pooled, baseline):
        pooled_alloc = RateAllocation(rates={"s0/p0": 4.0, "s0/p1": 6.0})
        tight = StabilityConfig(burden_bound=1.0, displacement_tol=10.0)
        report = assess(pooled, baseline, pooled_alloc, tight)
        assert not report.constraint_verdicts.burden_ok
        assert report.classification == Classification.UNSTABLE

    def test_relaxing_thresholds_never_breaks_a_verdict(self, pooled, baseline):
        rng = np.random.default_rng(9)
        for _ in range(200):
            alloc = RateAllocation(
                rates={"s0/p0": float(rng.uniform(0, 5)), "s0/p1": float(rng.uniform(0, 7))}
            )
            strict = StabilityConfig(eps=0.5, burden_bound=2.0)
            relaxed = StabilityConfig(eps=0.05, burden_bound=8.0)
            before = assess(pooled, baseline, alloc, strict).constraint_verdicts
            after = assess(pooled, baseline, alloc, relaxed).constraint_verdicts
            for name in ("paths_ok", "floor_ok", "capacity_ok", "burden_ok"):
                assert getattr(after, name) or not getattr(before, name)

    def test_allocation_from_another_network(self, pooled, three_hop, baseline):
        alien = RateAllocation.zeros(three_hop)
        with pytest.raises(AllocationMismatch):
            assess(pooled, baseline, alien, CONFIG)


def _trajectory(rates: list[list[float]], dt: float = 0.5, **flags) -> Trajectory:
    rates_array = np.array(rates)
    return Trajectory(
        dt=dt,
        path_ids=("s0/p0", "s0/p1"),
        times=dt * np.arange(len(rates)),
        rates=rates_array,
        final=RateAllocation(rates={"s0/p0": rates[-1][0], "s0/p1": rates[-1][1]}),
        **flags,
    )


class TestAssessTimeVarying:
    @pytest.fixture
    def baseline(self, pooled):
        return RateAllocation(rates={"s0/p0": 4.0, "s0/p1": 0.0}, mode="baseline")

    def test_converged_trajectory_reduces_to_assess(self, pooled, baseline):
        traj = _trajectory([[1.0, 1.0], [3.9, 5.9]], converged=True)
        over_time = assess_time_varying(pooled, baseline, traj, CONFIG)
        at_rest = assess(pooled, baseline, traj.final, CONFIG)
        assert over_time.classification == at_rest.classification
        assert over_time.constraint_verdicts == at_rest.constraint_verdicts
        assert over_time.displacement == pytest.approx(at_rest.displacement)

    def test_converged_dynamics_match_static_assessment(self):
        net = disjoint_links(5.0, 5.0)
        config = DynamicsConfig(convergence_steps=50)
        traj = integrate(ControllerKind(), net, 50.0, 1e-3, 1e-3, config=config)
        assert traj.converged
        baseline = solve_baseline(net).allocation
        stability = StabilityConfig(displacement_tol=2.0)
        over_time = assess_time_varying(net, baseline, traj, stability)
        at_rest = assess(net, baseline, traj.final, stability)
        assert over_time == at_rest

    def test_bursty_datacenter_is_judged_over_its_bursts(self):
        cfg = preset("datacenter")
        net = build_scenario(cfg.scenario)
        traj = integrate(
            cfg.controller,
            net,
            cfg.dynamics.horizon,
            cfg.dynamics.dt,
            cfg.dynamics.tolerance,
            traffic=cfg.traffic,
            eps=cfg.stability.eps,
            config=cfg.dynamics,
        )
        assert not traj.converged
        assert traj.steps_taken == 5000

        baseline = solve_baseline(net, cfg.solver.tolerance).allocation
        report = assess_time_varying(net, baseline, traj, cfg.stability)
        assert not report.constraint_verdicts.burden_ok
        assert not report.constraint_verdicts.capacity_ok
        assert report.burden_displacement > report.burden_bound
        assert report.classification == Classification.UNSTABLE

    def test_oscillation_is_always_unstable(self, pooled, baseline):
        traj = _trajectory([[4.0, 0.0], [4.0, 0.0]], oscillation_detected=True)
        report = assess_time_varying(pooled, baseline, traj, CONFIG)
        assert report.oscillation_detected
        assert report.classification == Classification.UNSTABLE

    def test_supremum_over_trailing_window(self, pooled, baseline):
        traj = _trajectory([[4.0, 0.0], [4.0, 6.0], [4.0, 3.0], [4.0, 1.0]])
        report = assess_time_varying(
            pooled, baseline, traj, StabilityConfig(window=1.0)
        )
        assert report.evaluated_samples == 3
        assert report.sup_displacement_over_window == pytest.approx(6.0)
        assert report.displacement == pytest.approx(6.0)
        assert report.final_displacement == pytest.approx(1.0)
        assert report.burden_displacement == pytest.approx(6.0)
        assert report.final_burden_displacement == pytest.approx(1.0)

    def test_window_excludes_early_samples(self, pooled, baseline):
        traj = _trajectory([[4.0, 6.0], [4.0, 1.0], [4.0, 1.0], [4.0, 1.0]])
        report = assess_time_varying(
            pooled, baseline, traj, StabilityConfig(window=1.0)
        )
        assert report.sup_displacement_over_window == pytest.approx(1.0)

    def test_overload_inside_window_is_unstable(self, pooled, baseline):
        traj = _trajectory([[4.0, 1.0], [4.0, 7.0], [4.0, 1.0]])
        report = assess_time_varying(pooled, baseline, traj, CONFIG)
        assert not report.constraint_verdicts.capacity_ok

    def test_column_order_is_taken_from_the_trajectory(self, pooled, baseline):
        traj = Trajectory(
            dt=0.5,
            path_ids=("s0/p1", "s0/p0"),
            times=np.array([0.0, 0.5]),
            rates=np.array([[0.0, 4.0], [1.0, 4.0]]),
            final=RateAllocation(rates={"s0/p0": 4.0, "s0/p1": 1.0}),
        )
        report = assess_time_varying(pooled, baseline, traj, CONFIG)
        assert report.displacement == pytest.approx(1.0)

    def test_empty_trajectory(self, pooled, baseline):
        traj = Trajectory(
            dt=0.5,
            path_ids=("s0/p0", "s0/p1"),
            times=np.zeros(0),
            rates=np.zeros((0, 2)),
            final=baseline,
        )
        with pytest.raises(EmptyTrajectory):
            assess_time_varying(pooled, baseline, traj, CONFIG)
