"""
Tests for synthetic datasets, region growing, oracles and the recovery experiment
"""

from dataclasses import replace

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.integrate import trapezoid
from scipy.sparse.csgraph import connected_components

from core.artifacts import read_csv_artifact
from ingest.adjacency import build_adjacency
from ingest.loader import load_pixel_table, schema_for_table
from model import ModelSpec, build_model
from simulate import (FitOptions, SimulationConfig, brute_force_auc, grow_regions, merge_regions,
                      recovery_experiment, recovery_study, replicate_seeds, simulate_lgcp, simulate_replicates,
                      tiny_posterior_oracle, trigger_surface, write_dataset)
from tests.conftest import grid_table, level_model


def flat_config(**overrides) -> SimulationConfig:
    """Constant intensity: no covariates, no spatial effect, no trigger"""
    values = dict(width=10, height=10, n_units=1, units_per_catchment=1, catchments_per_admin=1,
                  beta0=float(np.log(0.5)), betas={}, sigma_lse=0.0, trigger_sd=0.0, seed=3)
    values.update(overrides)
    return SimulationConfig(**values)


def lattice(width: int, height: int) -> sp.csr_matrix:
    table = grid_table(width, height)
    return build_adjacency(table, table.partition("pixel")).adjacency_matrix()


class TestSimulationConfig:
    @pytest.mark.parametrize("overrides", [
        {"width": 0},
        {"n_units": 101},
        {"n_units": 0},
        {"sigma_lse": -0.1},
        {"trigger_decay": 0.0},
        {"units_per_catchment": 0},
        {"betas": {"trigger": 1.0}},
    ])
    def test_invalid(self, overrides):
        with pytest.raises(ValueError):
            flat_config(**overrides)

    def test_with_seed(self):
        assert flat_config().with_seed(99).seed == 99


class TestSimulateLgcp:
    def test_constant_intensity_total(self):
        dataset = simulate_lgcp(flat_config())
        np.testing.assert_allclose(dataset.eta, np.log(0.5))
        assert abs(dataset.total_count - 50) <= 4 * np.sqrt(50)

    def test_zero_sigma_gives_zero_lse(self):
        dataset = simulate_lgcp(flat_config(n_units=8, betas={"slope": 0.4}))
        np.testing.assert_array_equal(dataset.lse, np.zeros(8))
        expected = np.log(0.5) + 0.4 * dataset.table.continuous["slope"]
        np.testing.assert_allclose(dataset.eta, expected)

    def test_deterministic(self, small_config):
        first, second = simulate_lgcp(small_config), simulate_lgcp(small_config)
        np.testing.assert_array_equal(first.table.count, second.table.count)
        np.testing.assert_array_equal(first.lse, second.lse)
        np.testing.assert_array_equal(first.table.partitions["slope_unit"], second.table.partitions["slope_unit"])
        other = simulate_lgcp(small_config.with_seed(12))
        assert not np.array_equal(first.eta, other.eta)

    def test_truth_is_consistent(self, small_dataset, small_config):
        table = small_dataset.table
        np.testing.assert_allclose(small_dataset.intensity, np.exp(small_dataset.eta))
        assert abs(small_dataset.lse.sum()) < 1e-8
        expected = (small_config.beta0 + 0.5 * table.continuous["slope"] + small_dataset.pixel_lse
                    + small_dataset.trigger)
        np.testing.assert_allclose(small_dataset.eta, expected)
        assert set(table.continuous) == {"slope", "elevation", "trigger"}

    def test_withheld_trigger(self, small_config):
        dataset = simulate_lgcp(replace(small_config, trigger_in_eta=False))
        np.testing.assert_allclose(dataset.eta, small_config.beta0 + 0.5 * dataset.table.continuous["slope"]
                                   + dataset.pixel_lse)

    def test_trigger_scale(self, small_config):
        surface = trigger_surface(small_config, np.random.default_rng(1))
        assert surface.shape == (12, 12)
        assert surface.std() == pytest.approx(0.8)
        assert abs(surface.mean()) < 1e-12
        flat = trigger_surface(replace(small_config, trigger_sd=0.0), np.random.default_rng(1))
        np.testing.assert_array_equal(flat, 0.0)

    def test_nested_contiguous_units(self, small_dataset):
        table = small_dataset.table
        adjacency = lattice(12, 12)
        units = table.partitions["slope_unit"]
        assert sorted(np.unique(units)) == list(range(1, 17))
        for unit in np.unique(units):
            members = np.flatnonzero(units == unit)
            n_components, _ = connected_components(adjacency[members][:, members], directed=False)
            assert n_components == 1
        for inner, outer in (("slope_unit", "catchment"), ("catchment", "admin")):
            for label in np.unique(table.partitions[inner]):
                assert len(np.unique(table.partitions[outer][table.partitions[inner] == label])) == 1

    def test_equidispersion_across_replicates(self):
        datasets = simulate_replicates(flat_config(beta0=float(np.log(2.0))), 200)
        counts = np.vstack([d.table.count for d in datasets]).astype(float)
        lam, n = 2.0, counts.size
        assert abs(counts.mean() - lam) < 3 * np.sqrt(lam / n)
        variance = counts.var(axis=0, ddof=1).mean()
        assert abs(variance - lam) < 3 * np.sqrt((lam + 2 * lam ** 2) / counts.shape[0] / counts.shape[1])

    def test_replicates_are_parallel_safe(self, small_config):
        serial = simulate_replicates(small_config, 3, workers=1)
        threaded = simulate_replicates(small_config, 3, workers=3)
        for a, b in zip(serial, threaded):
            np.testing.assert_array_equal(a.table.count, b.table.count)

    def test_write_dataset(self, small_dataset, tmp_path):
        pixels, truth = write_dataset(small_dataset, tmp_path)
        reloaded = load_pixel_table(pixels, schema_for_table(small_dataset.table),
                                    ["slope_unit", "catchment", "admin"])
        np.testing.assert_array_equal(reloaded.count, small_dataset.table.count)
        np.testing.assert_array_equal(reloaded.continuous["trigger"], small_dataset.trigger)
        frame = read_csv_artifact(truth)
        assert list(frame.columns) == ["pixel_id", "eta", "lambda", "trigger", "lse"]


class TestSeeds:
    def test_prefix_stable(self):
        assert replicate_seeds(7, 3) == replicate_seeds(7, 5)[:3]

    def test_distinct(self):
        seeds = replicate_seeds(7, 50)
        assert len(set(seeds)) == 50

    def test_negative(self):
        with pytest.raises(ValueError):
            replicate_seeds(7, -1)


class TestRegions:
    def test_grow_covers_every_node(self):
        labels = grow_regions(lattice(6, 6), 5, np.random.default_rng(0))
        assert sorted(np.unique(labels)) == [0, 1, 2, 3, 4]

    def test_disconnected_graph(self):
        adjacency = sp.csr_matrix(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]))
        with pytest.raises(ValueError):
            grow_regions(adjacency, 1, np.random.default_rng(0))

    def test_merge_keeps_regions_whole(self):
        adjacency = lattice(8, 8)
        rng = np.random.default_rng(4)
        labels = grow_regions(adjacency, 12, rng)
        groups = merge_regions(adjacency, labels, 3, rng)
        assert len(np.unique(groups)) == 3
        for label in range(12):
            assert len(np.unique(groups[labels == label])) == 1


class TestOracles:
    def test_symmetry(self):
        forward = tiny_posterior_oracle(level_model([2, 6]), theta=[1.0])
        swapped = tiny_posterior_oracle(level_model([6, 2]), theta=[1.0])
        np.testing.assert_allclose(forward.mean, swapped.mean[::-1], atol=1e-8)

    def test_single_pixel_against_dense_rule(self):
        model = level_model([2])
        oracle = tiny_posterior_oracle(model, theta=[0.0])
        x = np.linspace(-15.0, 10.0, 200_001)
        log_density = 2 * x - np.exp(x) - 0.5 * x ** 2
        density = np.exp(log_density - log_density.max())
        mean = trapezoid(x * density, x) / trapezoid(density, x)
        assert oracle.mean[0] == pytest.approx(mean, abs=1e-6)

    def test_integrates_over_theta(self):
        oracle = tiny_posterior_oracle(level_model([3]))
        assert oracle.theta_mean is not None
        assert oracle.log_marginal is None

    def test_rejects_large_models(self):
        with pytest.raises(ValueError):
            tiny_posterior_oracle(level_model([1, 2, 3, 4]), theta=[0.0])

    def test_rejects_constraints(self, strips_table):
        model = build_model(ModelSpec(intercept=False, besag_partition="slope_unit"), strips_table)
        with pytest.raises(ValueError):
            tiny_posterior_oracle(model, theta=[0.0])

    def test_brute_force_auc(self):
        assert brute_force_auc([0.8, 0.6, 0.4, 0.2], [1, 0, 1, 0]) == 0.75
        with pytest.raises(ValueError):
            brute_force_auc([0.1, 0.2], [1, 1])


class TestRecovery:
    def test_single_run(self, small_dataset):
        report = recovery_experiment(dataset=small_dataset, options=FitOptions(radius=1))
        row = report.as_row()
        assert set(row) == {"seed", "correlation", "coverage", "not_significant",
                            "auc_trigger-only", "auc_lse-only", "auc_trigger+lse"}
        assert -1.0 <= report.correlation <= 1.0
        assert 0.0 <= report.coverage <= 1.0

    @pytest.mark.slow
    def test_no_false_structure(self, small_config):
        quiet = replace(small_config, sigma_lse=0.0, trigger_sd=0.0)
        report = recovery_experiment(quiet)
        assert report.not_significant >= 0.9

    @pytest.mark.slow
    def test_spatial_effect_absorbs_withheld_trigger(self):
        frame = recovery_study(SimulationConfig(), 20, workers=4)
        assert len(frame) == 20
        assert (frame["correlation"] >= 0.7).sum() >= 16
        assert (frame["auc_lse-only"] >= frame["auc_trigger-only"]).sum() >= 16
        assert (frame["auc_trigger+lse"] - frame["auc_lse-only"] <= 0.005).sum() >= 16
