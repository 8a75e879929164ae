"""
Tests for intensities, unit aggregation, susceptibility and effect products
"""

import numpy as np
import pytest

from core.artifacts import read_csv_artifact
from inference import fit_model
from model import ModelSpec, build_model
from predict import (IntensityDomainError, IntensityEstimator, IntensitySurface, MissingEffectError,
                     aggregate_intensity, aspect_curve_frame, aspect_curve_from_result, aspect_effect_curve,
                     effect_summary, intensity_from_moments, pixel_intensity, pixel_surface_frame, susceptibility,
                     susceptibility_classes, unit_lse_table, write_unit_intensity)
from tests.conftest import grid_table


@pytest.fixture(scope="module")
def fitted(small_dataset):
    spec = ModelSpec(linear_effects=("slope",), besag_partition="slope_unit")
    return fit_model(build_model(spec, small_dataset.table))


class TestSusceptibility:
    def test_known_value(self):
        assert susceptibility(3.0) == pytest.approx(0.95021, abs=1e-5)

    def test_zero_intensity(self):
        assert susceptibility(0.0) == 0.0

    def test_matches_closed_form_on_random_intensities(self):
        lam = np.random.default_rng(5).gamma(1.0, 2.0, size=1000)
        np.testing.assert_allclose(susceptibility(lam), 1.0 - np.exp(-lam), rtol=0, atol=1e-12)

    def test_matches_event_frequency(self):
        rng = np.random.default_rng(17)
        lam = 0.8
        draws = rng.poisson(lam, size=100_000)
        frequency = np.mean(draws >= 1)
        p = susceptibility(lam)
        standard_error = np.sqrt(p * (1 - p) / draws.size)
        assert abs(frequency - p) < 3 * standard_error

    def test_negative_intensity(self):
        with pytest.raises(IntensityDomainError):
            susceptibility(np.array([1.0, -0.1]))


class TestIntensity:
    def test_estimators(self):
        mean, variance = np.array([0.0, 1.0]), np.array([0.5, 0.0])
        np.testing.assert_allclose(intensity_from_moments(mean, variance, "plugin-mean"), np.exp(mean))
        np.testing.assert_allclose(intensity_from_moments(mean, variance, "lognormal-mean"),
                                   [np.exp(0.25), np.e])

    def test_unknown_estimator(self):
        with pytest.raises(ValueError):
            IntensityEstimator.parse("median")

    def test_pixel_surface_uses_ids(self, fitted, small_dataset):
        surface = pixel_intensity(fitted, "plugin-mean", small_dataset.table.pixel_id)
        np.testing.assert_allclose(surface.intensity, np.exp(fitted.eta_mean))
        np.testing.assert_array_equal(surface.pixel_id, small_dataset.table.pixel_id)

    def test_pixel_surface_frame(self, strips_table):
        table = strips_table.with_counts(np.arange(9))
        surface = IntensitySurface(pixel_id=table.pixel_id, intensity=np.linspace(0.0, 2.0, 9),
                                   estimator=IntensityEstimator.PLUGIN)
        frame = pixel_surface_frame(surface, table)
        assert frame["count"].tolist() == list(range(9))
        np.testing.assert_allclose(frame["susceptibility"], 1.0 - np.exp(-np.linspace(0.0, 2.0, 9)))
        assert frame["susceptibility_class"].tolist() == susceptibility_classes(frame["susceptibility"]).tolist()

    def test_pixel_surface_frame_needs_same_pixels(self, strips_table):
        surface = IntensitySurface(pixel_id=np.arange(1, 9), intensity=np.ones(8),
                                   estimator=IntensityEstimator.PLUGIN)
        with pytest.raises(IntensityDomainError):
            pixel_surface_frame(surface, strips_table)


class TestAggregation:
    @staticmethod
    def surface(table, values):
        return IntensitySurface(table.pixel_id, np.asarray(values, dtype=float), IntensityEstimator.PLUGIN)

    def test_unit_sums(self, strips_table):
        units = aggregate_intensity(self.surface(strips_table, np.arange(9)), strips_table.partition("slope_unit"))
        np.testing.assert_allclose(units.intensity, [0 + 3 + 6, 1 + 4 + 7, 2 + 5 + 8])
        np.testing.assert_allclose(units.susceptibility, 1 - np.exp(-units.intensity))

    def test_linearity(self, strips_table):
        rng = np.random.default_rng(3)
        a, b = rng.uniform(size=9), rng.uniform(size=9)
        partition = strips_table.partition("slope_unit")
        joint = aggregate_intensity(self.surface(strips_table, a + b), partition).intensity
        split = (aggregate_intensity(self.surface(strips_table, a), partition).intensity
                 + aggregate_intensity(self.surface(strips_table, b), partition).intensity)
        np.testing.assert_allclose(joint, split, atol=1e-12)

    def test_nested_partitions(self, small_dataset):
        table = small_dataset.table
        surface = IntensitySurface(table.pixel_id, small_dataset.intensity, IntensityEstimator.PLUGIN)
        slope_units = aggregate_intensity(surface, table.partition("slope_unit"))
        catchments = aggregate_intensity(surface, table.partition("catchment"))
        unit_to_catchment = {}
        for unit, catchment in zip(table.partitions["slope_unit"], table.partitions["catchment"]):
            unit_to_catchment[unit] = catchment
        expected = {c: 0.0 for c in catchments.unit_ids}
        for unit, value in zip(slope_units.unit_ids, slope_units.intensity):
            expected[unit_to_catchment[unit]] += value
        np.testing.assert_allclose(catchments.intensity, [expected[c] for c in catchments.unit_ids], atol=1e-9)
        assert catchments.total == pytest.approx(surface.total)

    def test_counts_aggregate(self, strips_table):
        table = strips_table.with_counts(np.array([1, 0, 0, 2, 0, 1, 0, 0, 0]))
        units = aggregate_intensity(self.surface(table, np.ones(9)), table.partition("slope_unit"), table.count)
        assert units.count.tolist() == [3, 0, 1]

    def test_incomplete_partition(self, strips_table):
        surface = self.surface(strips_table.subset(np.arange(6)), np.ones(6))
        with pytest.raises(IntensityDomainError):
            aggregate_intensity(surface, strips_table.partition("slope_unit"))

    def test_write_unit_intensity(self, strips_table, tmp_path):
        units = aggregate_intensity(self.surface(strips_table, np.arange(9)), strips_table.partition("slope_unit"))
        frame = read_csv_artifact(write_unit_intensity(units, tmp_path / "units.csv"))
        assert list(frame.columns) == ["unit_id", "lambda", "count", "susceptibility", "susceptibility_class"]
        assert frame["susceptibility_class"].iloc[-1] == "q3"

    def test_susceptibility_classes(self):
        labels = susceptibility_classes(np.array([0.9, 0.1, 0.5, 0.3, 0.7]), 5)
        assert labels.tolist() == ["q5", "q1", "q3", "q2", "q4"]


class TestAspectCurve:
    def test_pure_eastness(self):
        curve = aspect_effect_curve(1.0, 0.0, np.eye(2), resolution_deg=1.0, level=0.95)
        assert len(curve.angle_deg) == 360
        assert curve.effect[90] == pytest.approx(1.0)
        assert curve.effect[270] == pytest.approx(-1.0)
        assert curve.effect[0] == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(curve.sd, 1.0)
        assert curve.amplitude == pytest.approx(1.0)
        assert curve.phase_deg == pytest.approx(90.0)

    def test_band_uses_covariance(self):
        covariance = np.array([[1.0, 0.5], [0.5, 1.0]])
        curve = aspect_effect_curve(0.0, 0.0, covariance, resolution_deg=45.0)
        # at 45 degrees sin = cos, so var = (1 + 1 + 2 * 0.5) / 2
        assert curve.sd[1] == pytest.approx(np.sqrt(1.5))

    def test_requires_covariance(self):
        with pytest.raises(MissingEffectError):
            aspect_effect_curve(1.0, 1.0, None)

    def test_from_fit(self, small_dataset):
        table = small_dataset.table
        angle = np.random.default_rng(2).uniform(0, 2 * np.pi, table.n_pixels)
        table = table.with_continuous({"eastness": np.sin(angle), "northness": np.cos(angle)})
        result = fit_model(build_model(ModelSpec(linear_effects=("eastness", "northness")), table))
        frame = aspect_curve_frame(aspect_curve_from_result(result))
        assert list(frame.columns) == ["aspect_deg", "effect", "sd", "lower", "upper", "coefficient_scale"]
        assert np.all(frame["sd"] > 0)
        assert set(frame["coefficient_scale"]) == {"original"}

    def test_coefficients_return_to_raw_units(self, small_dataset):
        table = small_dataset.table
        angle = np.random.default_rng(5).uniform(0, 2 * np.pi, table.n_pixels)
        table = table.with_continuous({"eastness": 3.0 * np.sin(angle), "northness": np.cos(angle)})
        result = fit_model(build_model(ModelSpec(linear_effects=("eastness", "northness")), table))
        sd = result.layout.standardization["eastness"].sd

        raw = aspect_curve_from_result(result, resolution_deg=90.0)
        per_sd = aspect_curve_from_result(result, original_scale=False, resolution_deg=90.0)
        assert (raw.scale, per_sd.scale) == ("original", "standardized")
        # 90 degrees is pure eastness
        assert raw.effect[1] == pytest.approx(per_sd.effect[1] / sd)
        assert raw.sd[1] == pytest.approx(per_sd.sd[1] / sd)
        assert sd == pytest.approx(3.0 * np.std(np.sin(angle), ddof=1))

    def test_missing_aspect_covariates(self, fitted):
        with pytest.raises(MissingEffectError):
            aspect_curve_from_result(fitted)


class TestEffectTables:
    def test_effect_summary(self, fitted):
        fixed, classes = effect_summary(fitted)
        assert fixed["effect"].tolist() == ["intercept", "slope"]
        assert np.isnan(fixed["covariate_sd"].iloc[0])
        assert fixed["covariate_sd"].iloc[1] == pytest.approx(fitted.layout.standardization["slope"].sd)
        assert classes.empty

    def test_unit_lse_table(self, fitted, small_dataset):
        frame = unit_lse_table(fitted, small_dataset.table, columns=("trigger",))
        assert len(frame) == 16
        assert frame["pixels"].sum() == small_dataset.table.n_pixels
        assert "mean_trigger" in frame.columns

    def test_unit_table_needs_spatial_effect(self, small_dataset):
        result = fit_model(build_model(ModelSpec(linear_effects=("slope",)), small_dataset.table))
        with pytest.raises(MissingEffectError):
            unit_lse_table(result, small_dataset.table)


def test_single_pixel_surface():
    table = grid_table(1, 1, counts=[2])
    result = fit_model(build_model(ModelSpec(), table))
    assert pixel_intensity(result, "plugin-mean").total == pytest.approx(2.0, rel=1e-3)
