"""
End-to-end tests of the command line: simulate, fit, predict, cv, screen, compare, report
"""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from cli import build_parser, build_run_config, compare_specs, main
from core.artifacts import read_csv_artifact
from core.config_file import parse_config_text
from core.config_validator import RunConfigValidator
from model import ModelSpec

RUN_CONFIG = """
[run]
output = {root}/run
seed = 5
workers = 1

[simulate]
width = 12
height = 12
n_units = 16
units_per_catchment = 4
catchments_per_admin = 2
beta0 = 0.0
betas = slope:0.5
sigma_lse = 0.6
trigger_sd = 0.8
trigger_decay = 6

[data]
pixels = {root}/run/pixels.csv
partitions = slope_unit, catchment, admin
continuous = slope, trigger, elevation

[model]
linear = slope
besag = slope_unit
pc_median = 0.5

[inference]
step = 0.5
radius = 1

[predict]
estimator = lognormal-mean
partitions = pixel, slope_unit, catchment, admin

[cv]
folds = 3
partitions = pixel, slope_unit

[screen]
candidates = trigger, slope, elevation

[compare]
trigger = trigger

[report]
columns = elevation, trigger
"""

HEADER_PREFIX = "# slopeunit-lgcp 0.1.0 config="


def run_cli(*args) -> int:
    return main([str(a) for a in args])


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Run every subcommand once on a small synthetic dataset"""
    root = tmp_path_factory.mktemp("pipeline")
    config = root / "run.cfg"
    config.write_text(RUN_CONFIG.format(root=root.as_posix()), encoding="utf-8")
    codes = {command: run_cli(command, "-c", config)
             for command in ("simulate", "fit", "predict", "cv", "screen", "compare", "report")}
    return root / "run", config, codes


class TestPipeline:
    def test_every_command_succeeds(self, pipeline):
        _, _, codes = pipeline
        assert codes == {command: 0 for command in codes}

    @pytest.mark.parametrize("name", [
        "pixels.csv", "truth.csv",
        "latent.csv", "theta_grid.csv", "hyperparameters.csv", "fitted_eta.csv",
        "effects_fixed.csv", "effects_classes.csv", "lse_units.csv", "edges.csv",
        "in_sample_metrics.csv", "intensity_pixel.csv",
        "intensity_slope_unit.csv", "intensity_catchment.csv", "intensity_admin.csv",
        "cv_metrics.csv", "cv_intensity.csv", "cv_roc.csv",
        "screen.csv", "compare.csv",
    ])
    def test_artifacts_carry_provenance(self, pipeline, name):
        output, _, _ = pipeline
        first_line = (output / name).read_text(encoding="utf-8").splitlines()[0]
        assert first_line.startswith(HEADER_PREFIX)
        assert first_line.endswith("seed=5")

    def test_fit_outputs(self, pipeline):
        output, _, _ = pipeline
        fixed = read_csv_artifact(output / "effects_fixed.csv")
        assert fixed["effect"].tolist() == ["intercept", "slope"]
        units = read_csv_artifact(output / "lse_units.csv")
        assert len(units) == 16
        assert {"mean_elevation", "mean_trigger", "significance"} <= set(units.columns)

    def test_aggregates_nest(self, pipeline):
        output, _, _ = pipeline
        pixel = read_csv_artifact(output / "intensity_pixel.csv")["lambda"].sum()
        for partition in ("slope_unit", "catchment", "admin"):
            units = read_csv_artifact(output / f"intensity_{partition}.csv")
            assert units["lambda"].sum() == pytest.approx(pixel, rel=1e-9)
            assert units["susceptibility"].between(0, 1).all()

    def test_cv_metrics(self, pipeline):
        output, _, _ = pipeline
        frame = read_csv_artifact(output / "cv_metrics.csv")
        folds = set(frame["fold"].astype(str))
        assert {"0", "1", "2", "mean", "pooled"} == folds
        intensity = read_csv_artifact(output / "cv_intensity.csv")
        assert sorted(intensity["fold"].unique().tolist()) == [0, 1, 2]

    def test_screen_is_ranked(self, pipeline):
        output, _, _ = pipeline
        frame = read_csv_artifact(output / "screen.csv")
        assert sorted(frame["covariate"]) == ["elevation", "slope", "trigger"]
        assert frame["auc"].is_monotonic_decreasing

    def test_compare_models(self, pipeline):
        output, _, _ = pipeline
        frame = read_csv_artifact(output / "compare.csv")
        assert frame["model"].tolist() == ["trigger-only", "lse-only", "trigger+lse"]
        assert frame["linear_effects"].tolist() == ["slope,trigger", "slope", "slope,trigger"]

    def test_report(self, pipeline):
        output, _, _ = pipeline
        text = (output / "report.txt").read_text(encoding="utf-8")
        assert "trigger+lse" in text
        assert "slope" in text

    def test_fit_is_reproducible(self, pipeline, tmp_path):
        output, config, _ = pipeline
        assert run_cli("fit", "-c", config, "-o", tmp_path) == 0
        for name in ("latent.csv", "fitted_eta.csv", "hyperparameters.csv"):
            assert (tmp_path / name).read_bytes() == (output / name).read_bytes()

    def test_pixel_surface_columns(self, pipeline):
        output, _, _ = pipeline
        frame = read_csv_artifact(output / "intensity_pixel.csv")
        assert list(frame.columns) == ["pixel_id", "x", "y", "lambda", "count", "susceptibility",
                                       "susceptibility_class"]
        pixels = read_csv_artifact(output / "pixels.csv")
        assert frame["count"].tolist() == pixels["count"].tolist()
        np.testing.assert_allclose(frame["susceptibility"], 1.0 - np.exp(-frame["lambda"]))

    def test_report_starts_with_provenance(self, pipeline):
        output, _, _ = pipeline
        lines = (output / "report.txt").read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith(HEADER_PREFIX)
        assert lines[0].endswith("seed=5")
        assert lines[1] == "Run report"

    def test_predict_rejects_fit_for_other_pixels(self, pipeline, tmp_path):
        output, config, _ = pipeline
        (tmp_path / "fitted_eta.csv").write_bytes((output / "fitted_eta.csv").read_bytes())
        pixels = tmp_path / "pixels.csv"
        read_csv_artifact(output / "pixels.csv").iloc[1:].to_csv(pixels, index=False)
        assert run_cli("predict", "-c", config, "-o", tmp_path, "--set", f"data.pixels={pixels.as_posix()}") == 3

    def test_predict_needs_fit(self, pipeline, tmp_path):
        _, config, _ = pipeline
        assert run_cli("predict", "-c", config, "-o", tmp_path) == 3


class TestScreen:
    def test_perfect_predictor_first_and_noise_near_half(self, write_config, tmp_path):
        rng = np.random.default_rng(17)
        rows, cols = np.divmod(np.arange(10_000), 100)
        signal = rng.normal(size=10_000)
        count = rng.poisson(np.exp(-1.5 + 0.8 * signal))
        pixels = tmp_path / "pixels.csv"
        pd.DataFrame({"pixel_id": np.arange(1, 10_001), "x": cols, "y": rows, "count": count,
                      "perfect": count, "signal": signal, "noise": rng.normal(size=10_000)}
                     ).to_csv(pixels, index=False)
        config = write_config(f"[run]\noutput = {tmp_path.as_posix()}/out\n"
                              f"[data]\npixels = {pixels.as_posix()}\ncontinuous = perfect, signal, noise\n"
                              f"[screen]\ncandidates = noise, signal, perfect\n")
        assert run_cli("screen", "-c", config) == 0

        frame = read_csv_artifact(tmp_path / "out" / "screen.csv")
        assert frame["covariate"].tolist() == ["perfect", "signal", "noise"]
        assert frame["auc"].iloc[0] == pytest.approx(1.0)
        noise = float(frame.loc[frame["covariate"] == "noise", "auc"].iloc[0])
        assert abs(noise - 0.5) < 0.03


class TestErrors:
    def test_malformed_model_section(self, write_config, tmp_path):
        config = write_config(f"[run]\noutput = {tmp_path.as_posix()}\n[model]\nbogus = 1\n")
        assert run_cli("fit", "-c", config) == 2

    def test_bad_data(self, write_config, tmp_path):
        pixels = tmp_path / "pixels.csv"
        pixels.write_text("pixel_id,x,y,count,slope\n1,0,0,1,0.5\n2,1,0,-1,0.2\n", encoding="utf-8")
        config = write_config(f"[run]\noutput = {tmp_path.as_posix()}/out\n"
                              f"[data]\npixels = {pixels.as_posix()}\n[model]\nlinear = slope\n")
        assert run_cli("fit", "-c", config) == 3

    def test_invalid_utf8_pixels(self, write_config, tmp_path):
        pixels = tmp_path / "pixels.csv"
        pixels.write_bytes(b"pixel_id,x,y,count,slope\n1,0,0,1,\xe9\xff\n")
        config = write_config(f"[run]\noutput = {tmp_path.as_posix()}/out\n"
                              f"[data]\npixels = {pixels.as_posix()}\n[model]\nlinear = slope\n")
        assert run_cli("fit", "-c", config) == 3

    def test_missing_data_file(self, write_config, tmp_path):
        config = write_config(f"[run]\noutput = {tmp_path.as_posix()}\n"
                              f"[data]\npixels = {tmp_path.as_posix()}/absent.csv\n[model]\nlinear = slope\n")
        assert run_cli("fit", "-c", config) == 2

    def test_unknown_command(self):
        assert run_cli("plot") == 2

    def test_override_syntax(self, write_config, tmp_path):
        config = write_config(f"[run]\noutput = {tmp_path.as_posix()}\n")
        assert run_cli("simulate", "-c", config, "--set", "no-equals-sign") == 2


class TestRunConfig:
    def test_flags_win_over_file(self, parse):
        document = parse("[run]\noutput = runs/a\nseed = 1\nworkers = 2\n")
        run = build_run_config("fit", document, output="runs/b", seed=9)
        assert run.output_dir == Path("runs/b")
        assert run.seed == 9
        assert run.workers == 2

    def test_continuous_columns_default_to_model(self, parse):
        document = parse("[model]\nlinear = slope\nrw1 = mi:5\n[screen]\ncandidates = ndvi\n"
                         "[compare]\ntrigger = mi\n")
        run = build_run_config("screen", document)
        assert run.continuous == ("slope", "mi", "ndvi")

    def test_simulation_betas(self, parse):
        run = build_run_config("simulate", parse("[simulate]\nbetas = slope:0.5, wetness:-0.25\n"), seed=4)
        assert run.simulation.betas == {"slope": 0.5, "wetness": -0.25}
        assert run.simulation.seed == 4

    def test_validator_collects_errors(self, parse, tmp_path):
        document = parse(f"[run]\noutput = {tmp_path.as_posix()}\n[inference]\nstep = -1\n[cv]\nfolds = 1\n")
        ok, errors, _ = RunConfigValidator(build_run_config("cv", document)).validate_all()
        assert not ok
        assert len(errors) >= 3

    @pytest.mark.parametrize("seed", [-1, 2 ** 32])
    def test_cv_seed_range(self, parse, tmp_path, seed):
        document = parse(f"[run]\noutput = {tmp_path.as_posix()}\n[cv]\nseed = {seed}\n")
        ok, errors, _ = RunConfigValidator(build_run_config("simulate", document)).validate_all()
        assert not ok
        assert any("[cv] seed" in error for error in errors)

    def test_parser_lists_every_command(self):
        help_text = build_parser().format_help()
        for command in ("fit", "predict", "cv", "simulate", "screen", "compare", "report"):
            assert command in help_text


def test_compare_specs_share_effects():
    spec = ModelSpec(linear_effects=("slope", "trigger"), besag_partition="slope_unit")
    specs = compare_specs(spec, "trigger")
    assert specs["trigger-only"].besag_partition is None
    assert specs["trigger-only"].linear_effects == ("slope", "trigger")
    assert specs["lse-only"].linear_effects == ("slope",)
    assert specs["trigger+lse"].besag_partition == "slope_unit"
