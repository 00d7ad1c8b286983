import math

import numpy as np
import pytest

from setmember.core.errors import EmptySet, InvalidConfig, InvalidGeometry
from setmember.schemas.config import CampaignArm, CampaignConfig, ScenarioConfig
from setmember.services.estimation import (
    DistanceToReferenceSet,
    EstimatorState,
    MeasuredSet,
    Mode,
    run_until,
)
from setmember.services.geometry import Ball
from setmember.services.harness import (
    ReferenceSet,
    distance_to_reference,
    reference_set,
    run_campaign,
    run_seed,
    summarize,
    summary_rows,
)
from setmember.services.regression import SensorModel, generate_scenario
from tests.conftest import enumerated_strip_projection

INCREMENTAL_ARMS = [
    CampaignArm(label="incremental-nstep", mode="incremental-nstep"),
    CampaignArm(label="incremental-1step", mode="incremental-1step"),
]


def reference_with(strips):
    """ReferenceSet over one sensor per (regressor, bound, value) triple, each measured once."""
    sensors = [SensorModel(np.array(regressor, dtype=float), bound) for regressor, bound, _ in strips]
    ref = ReferenceSet(sensors)
    ref.update(
        [
            MeasuredSet(node=i, instant=1, region=sensor.strip(value))
            for i, (sensor, (_, _, value)) in enumerate(zip(sensors, strips))
        ]
    )
    return ref


class TestReferenceSet:
    def test_inside_is_zero(self):
        ref = reference_with([([1.0, 0.0], 0.5, 0.5), ([0.0, 1.0], 0.5, 0.5)])
        assert distance_to_reference([0.3, 0.9], ref) == 0.0

    def test_single_strip_matches_slab_distance(self, rng):
        sensor = SensorModel(np.array([0.6, 0.8]), 0.1)
        ref = ReferenceSet([sensor])
        strip = sensor.strip(1.0)
        ref.update([MeasuredSet(0, 1, strip)])
        for p in rng.uniform(-3, 3, size=(50, 2)):
            assert distance_to_reference(p, ref) == pytest.approx(strip.distance(p), abs=1e-9)

    def test_box_corner(self):
        ref = reference_with([([1.0, 0.0], 0.5, 0.5), ([0.0, 1.0], 0.5, 0.5)])
        assert distance_to_reference([2.0, 2.0], ref) == pytest.approx(math.sqrt(2.0), abs=1e-6)

    def test_lower_bound_never_exceeds_exact_distance(self, rng):
        ref = reference_with(
            [([1.0, 0.0], 0.5, 0.5), ([1.0, 1.0], 0.4, 1.5), ([0.2, 1.0], 0.3, 0.6)]
        )
        points = rng.uniform(-4, 4, size=(200, 2))
        exact = ref.distances(points)
        assert np.all(ref.lower_bounds(points) <= exact + 1e-6)

    def test_within(self):
        ref = reference_with([([1.0, 0.0], 0.5, 0.5), ([0.0, 1.0], 0.5, 0.5)])
        assert ref.within(np.array([[0.5, 0.5], [1.0005, 0.2]]), 1e-3)
        assert not ref.within(np.array([[0.5, 0.5], [1.002, 0.5]]), 1e-3)

    def test_repeated_measurements_shrink_strips(self):
        sensor = SensorModel(np.array([1.0, 0.0]), 0.1)
        ref = ReferenceSet([sensor])
        ref.update([MeasuredSet(0, 1, sensor.strip(1.0))])
        ref.update([MeasuredSet(0, 2, sensor.strip(1.05))])
        assert ref.lower[0] == pytest.approx(0.95)
        assert ref.upper[0] == pytest.approx(1.1)

    def test_empty_reference(self):
        sensor = SensorModel(np.array([1.0]), 0.1)
        ref = ReferenceSet([sensor])
        ref.update([MeasuredSet(0, 1, sensor.strip(0.0)), MeasuredSet(0, 2, sensor.strip(1.0))])
        assert ref.is_empty
        with pytest.raises(EmptySet):
            distance_to_reference([0.0], ref)

    def test_only_strips_are_tracked(self):
        ref = ReferenceSet([SensorModel(np.array([1.0, 0.0]), 0.1)])
        with pytest.raises(InvalidGeometry):
            ref.update([MeasuredSet(0, 1, Ball(np.zeros(2), 1.0))])

    def test_misaligned_strip_rejected(self):
        ref = ReferenceSet([SensorModel(np.array([1.0, 0.0]), 0.1)])
        other = SensorModel(np.array([0.0, 1.0]), 0.1)
        with pytest.raises(InvalidGeometry):
            ref.update([MeasuredSet(0, 1, other.strip(0.0))])

    def test_tolerance_override_leaves_reference_untouched(self):
        ref = reference_with([([1.0, 0.0], 0.5, 0.5), ([0.0, 1.0], 0.5, 0.5)])
        ref.solver = "dykstra"
        distance = distance_to_reference([2.0, 2.0], ref, tol=1e-3)
        assert distance == pytest.approx(math.sqrt(2.0), abs=1e-3)
        assert ref.tol == 1e-6

    def test_solvers_agree_on_a_polygon(self, rng):
        ref = reference_with(
            [([1.0, 0.0], 0.5, 0.5), ([1.0, 1.0], 0.4, 1.5), ([0.2, 1.0], 0.3, 0.6)]
        )
        points = rng.uniform(-4, 4, size=(30, 2))
        exact = ref.distances(points)
        ref.solver = "dykstra"
        np.testing.assert_allclose(ref.distances(points), exact, atol=1e-5)

    @pytest.mark.parametrize("seed", range(8))
    def test_regression_reference_matches_enumeration(self, seed):
        scenario = generate_scenario(5, 7, seed)
        ref = ReferenceSet.for_scenario(scenario)
        for k in range(1, 301):
            ref.update(scenario.measured_sets(k))
        rng = np.random.default_rng(seed)
        points = scenario.theta_star + rng.normal(scale=0.01, size=(4, 5))
        for p in points:
            oracle = enumerated_strip_projection(ref.directions, ref.lower, ref.upper, p)
            expected = float(np.linalg.norm(p - oracle))
            assert distance_to_reference(p, ref) == pytest.approx(expected, abs=1e-8)

    @pytest.mark.parametrize("seed", [6, 9])
    def test_stopped_cycle_runs_are_within_delta(self, seed):
        scenario = generate_scenario(5, 7, seed)
        state = EstimatorState.create(Mode.INCREMENTAL_NSTEP, scenario.initial_estimates)
        ref = ReferenceSet.for_scenario(scenario)
        trajectory = run_until(
            state, scenario, DistanceToReferenceSet(1e-3), 20_000, reference=ref
        )
        assert trajectory.status == "stopped"
        for x in trajectory.final_estimates:
            oracle = enumerated_strip_projection(ref.directions, ref.lower, ref.upper, x)
            assert np.linalg.norm(x - oracle) <= 1e-3

    def test_asymptotic_reference_is_the_true_parameter(self, rng):
        scenario = generate_scenario(5, 7, 2)
        ref = reference_set("asymptotic", scenario)
        np.testing.assert_allclose(ref.lower, ref.upper)
        for p in scenario.theta_star + rng.normal(size=(5, 5)):
            assert distance_to_reference(p, ref) == pytest.approx(
                float(np.linalg.norm(p - scenario.theta_star)), abs=1e-8
            )

    def test_asymptotic_reference_ignores_measurements(self):
        scenario = generate_scenario(3, 4, 5)
        ref = ReferenceSet.asymptotic(scenario)
        lower = ref.lower.copy()
        ref.update(scenario.measured_sets(1))
        np.testing.assert_array_equal(ref.lower, lower)
        assert ref.kind == "asymptotic"

    def test_asymptotic_reference_widens_with_the_assumed_bound(self):
        cfg = ScenarioConfig(dim=2, nodes=3, seed=4, assumed_noise_scale=2.0)
        scenario = generate_scenario(2, 3, 4, cfg)
        ref = ReferenceSet.asymptotic(scenario)
        bounds = np.array([sensor.noise_bound for sensor in scenario.sensors])
        np.testing.assert_allclose(ref.upper - ref.lower, 2.0 * bounds)
        assert distance_to_reference(scenario.theta_star, ref) == 0.0

    def test_asymptotic_reference_rejects_underestimated_bounds(self):
        cfg = ScenarioConfig(dim=2, nodes=3, seed=4, assumed_noise_scale=0.5)
        with pytest.raises(InvalidConfig):
            ReferenceSet.asymptotic(generate_scenario(2, 3, 4, cfg))


def small_campaign(**overrides):
    document = dict(
        dim=2,
        nodes=[3],
        runs_per_n=2,
        delta=1e-3,
        max_steps=50_000,
        seed=5,
        scenario=ScenarioConfig(dim=2),
    )
    document.update(overrides)
    return CampaignConfig(**document)


class TestCampaign:
    def test_run_seeds(self):
        assert run_seed(0, 7, 1) == run_seed(0, 7, 1)
        assert len({run_seed(0, 7, r) for r in range(20)}) == 20
        assert run_seed(0, 7, 0) != run_seed(0, 20, 0)

    def test_deterministic(self):
        cfg = small_campaign(runs_per_n=1)
        assert run_campaign(cfg).records == run_campaign(cfg).records

    def test_worker_processes_do_not_change_results(self):
        cfg = small_campaign()
        assert run_campaign(cfg, workers=2).records == run_campaign(cfg, workers=1).records

    def test_records_cover_every_cell(self):
        result = run_campaign(small_campaign())
        assert len(result.records) == 4 * 2
        assert [r.arm for r in result.records[::2]] == [
            "incremental-nstep",
            "complete",
            "ring",
            "incremental-1step",
        ]
        for record in result.records:
            assert record.status == "converged"
            assert record.iterations >= 1

    def test_arms_share_scenarios(self):
        result = run_campaign(small_campaign())
        for run in range(2):
            seeds = {r.seed for r in result.records if r.run == run}
            assert len(seeds) == 1

    @pytest.mark.parametrize("N", [7, 10, 20])
    def test_onestep_takes_n_times_the_cycles(self, N):
        cfg = small_campaign(
            dim=3,
            nodes=[N],
            max_steps=500_000,
            arms=INCREMENTAL_ARMS,
            scenario=ScenarioConfig(dim=3),
        )
        result = run_campaign(cfg)
        cycles = result.cell("incremental-nstep", N)
        onestep = result.cell("incremental-1step", N)
        for c, o in zip(cycles, onestep):
            assert c.status == o.status == "converged"
            assert c.seed == o.seed
            assert o.iterations == N * c.iterations

    def test_instant_cap_is_censored(self):
        result = run_campaign(small_campaign(max_steps=1))
        rows = {row.mode: row for row in summarize(result)}
        onestep = rows["incremental-1step"]
        assert onestep.censored == onestep.failures == 2
        assert onestep.mean is None and onestep.std is None
        for row in rows.values():
            assert row.failures == row.censored

    def test_empty_sets_are_recorded(self):
        cfg = small_campaign(
            reference="current", scenario=ScenarioConfig(dim=2, assumed_noise_scale=0.0)
        )
        result = run_campaign(cfg)
        assert all(r.status == "empty-set" for r in result.records)
        for record in result.cell("incremental-nstep", 3):
            assert record.iterations == 2
            assert record.error["node"] == 0
        rows = summarize(result)
        assert all(row.failures == row.runs == 2 and row.censored == 0 for row in rows)

    def test_asymptotic_reference_needs_honest_bounds(self):
        cfg = small_campaign(scenario=ScenarioConfig(dim=2, assumed_noise_scale=0.5))
        with pytest.raises(InvalidConfig):
            run_campaign(cfg)

    @pytest.mark.parametrize("reference", ["current", "asymptotic"])
    def test_both_references_converge(self, reference):
        result = run_campaign(small_campaign(reference=reference))
        assert all(record.status == "converged" for record in result.records)

    def test_asymptotic_runs_never_stop_earlier(self):
        current = run_campaign(small_campaign(reference="current", arms=INCREMENTAL_ARMS[:1]))
        asymptotic = run_campaign(small_campaign(arms=INCREMENTAL_ARMS[:1]))
        for c, a in zip(current.records, asymptotic.records):
            assert a.iterations >= c.iterations


class TestSummary:
    def test_rows_cover_arms_and_sizes(self):
        result = run_campaign(small_campaign(nodes=[3, 4], runs_per_n=1))
        rows = summarize(result)
        assert [(row.mode, row.N) for row in rows] == sorted(
            (arm, N)
            for arm in ("incremental-nstep", "complete", "ring", "incremental-1step")
            for N in (3, 4)
        )
        for row in rows:
            assert row.std == 0.0
            assert row.mean >= 1 and row.mean == int(row.mean)

    def test_csv_rows(self):
        result = run_campaign(small_campaign(max_steps=1, runs_per_n=1))
        body = summary_rows(summarize(result))
        assert all(len(line) == 6 for line in body)
        onestep = next(line for line in body if line[0] == "incremental-1step")
        assert onestep[2:4] == ["", ""]


@pytest.mark.slow
class TestIterationCounts:
    """Average iterations per arm at n=5 with 100 runs per cell."""

    @pytest.fixture(scope="class")
    def result(self):
        cfg = CampaignConfig(dim=5, nodes=[7, 20, 100], runs_per_n=100, seed=2024)
        return run_campaign(cfg, workers=4)

    def test_arm_ordering(self, result):
        for N in (7, 20, 100):
            means = [
                result.iterations(arm, N).mean()
                for arm in ("incremental-nstep", "complete", "ring", "incremental-1step")
            ]
            assert means == sorted(means)

    def test_distributed_means_decrease_with_n(self, result):
        for arm in ("complete", "ring"):
            means = [result.iterations(arm, N).mean() for N in (7, 20, 100)]
            assert means[0] > means[1] > means[2]

    def test_complete_graph_at_seven_nodes(self, result):
        assert result.iterations("complete", 7).mean() == pytest.approx(1472.664, rel=0.3)

    def test_ring_at_seven_nodes(self, result):
        assert result.iterations("ring", 7).mean() == pytest.approx(1799.242, rel=0.3)

    def test_onestep_at_seven_nodes(self, result):
        assert result.iterations("incremental-1step", 7).mean() == pytest.approx(8509.908, rel=0.3)

    def test_cycle_mode_at_twenty_nodes(self, result):
        assert result.iterations("incremental-nstep", 20).mean() == pytest.approx(180.251, rel=0.3)
