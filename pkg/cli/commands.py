"""
Subcommands: fit, predict, cv, simulate, screen, compare, report
"""

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from jinja2 import Environment, FileSystemLoader, TemplateError

from config import LOGGING_CONFIG, TOOL_NAME, TOOL_VERSION
from core.artifacts import Provenance, read_csv_artifact, write_csv_atomic, write_text_atomic
from core.config_file import ConfigDocument, load_config_file
from core.config_validator import validate_run_config
from core.exceptions import ConfigError, LgcpError
from core.logging_config import get_logger, log_error_with_context, log_performance, setup_logging
from core.parallel import map_ordered
from inference.engine import fit_model
from inference.io import write_posterior
from ingest.adjacency import build_adjacency, read_edge_list, write_edge_list
from ingest.loader import load_pixel_table
from ingest.models import PixelTable
from ingest.transforms import pairwise_correlation
from metrics.cv import in_sample_metrics, kfold_split, partition_metrics, run_cv, spatial_block_split
from metrics.roc import hosmer_class
from model.builder import build_model
from model.models import ModelSpec
from predict.effects import aspect_curve_frame, aspect_curve_from_result, effect_summary, unit_lse_table
from predict.intensity import (aggregate_intensity, intensity_from_moments, pixel_intensity,
                               write_pixel_surface, write_unit_intensity)
from predict.models import IntensityEstimator, IntensitySurface
from simulate.generator import simulate_lgcp, simulate_replicates, write_dataset

from .exceptions import ArtifactMismatchError, MissingArtifactError, TemplateRenderError
from .run_config import COMMANDS, RunConfig, build_run_config

logger = get_logger(__name__)

TEMPLATE_DIR = Path(__file__).parent.parent / "templates" / "reports"


def _provenance(run: RunConfig) -> Provenance:
    return Provenance(config_hash=run.config_hash, seed=run.seed)


def _load_table(run: RunConfig) -> PixelTable:
    return load_pixel_table(run.data_path, run.schema(), run.partitions)


def _graph_for(spec: ModelSpec, table: PixelTable):
    if not spec.besag_partition:
        return None
    units = table.partition(spec.besag_partition)
    if spec.besag_edges:
        return read_edge_list(spec.besag_edges, units.unit_ids)
    return build_adjacency(table, units)


def _fit(run: RunConfig, spec: ModelSpec, table: PixelTable, graph=None, init=None):
    model = build_model(spec, table, graph=graph)
    return fit_model(model, init=init, step=run.step, radius=run.radius, workers=run.workers)


def _pixel_auc(result, table: PixelTable, estimator: str) -> float:
    intensity = intensity_from_moments(result.eta_mean, result.eta_sd ** 2, estimator)
    values, _ = partition_metrics(table, intensity, ["pixel"])
    return values["pixel"]["auc"]


def _hosmer(auc: float) -> str:
    return hosmer_class(auc).value if np.isfinite(auc) else "undefined"


def cmd_fit(run: RunConfig) -> Dict[str, Path]:
    """Fit the model and write posterior, effect and in-sample artifacts"""
    table = _load_table(run)
    graph = _graph_for(run.spec, table)
    result = _fit(run, run.spec, table, graph, run.init)
    provenance = _provenance(run)

    artifacts = write_posterior(result, run.output_dir, table.pixel_id, provenance)
    fixed, classes = effect_summary(result)
    artifacts["effects_fixed"] = write_csv_atomic(run.artifact("effects_fixed.csv"), fixed, provenance)
    artifacts["effects_classes"] = write_csv_atomic(run.artifact("effects_classes.csv"), classes, provenance)

    if graph is not None:
        columns = [c for c in run.report_columns if table.has_column(c)]
        artifacts["lse_units"] = write_csv_atomic(run.artifact("lse_units.csv"),
                                                  unit_lse_table(result, table, columns), provenance)
        artifacts["edges"] = write_edge_list(graph, run.artifact("edges.csv"), provenance)
    if result.layout.has_block("eastness") and result.layout.has_block("northness"):
        artifacts["aspect_curve"] = write_csv_atomic(
            run.artifact("aspect_curve.csv"), aspect_curve_frame(aspect_curve_from_result(result)), provenance)

    partitions = ["pixel"] + list(run.partitions)
    artifacts["in_sample_metrics"] = write_csv_atomic(
        run.artifact("in_sample_metrics.csv"),
        in_sample_metrics(result, table, partitions, run.estimator), provenance)
    surface = pixel_intensity(result, run.estimator, table.pixel_id)
    artifacts["intensity_pixel"] = write_pixel_surface(surface, table, run.artifact("intensity_pixel.csv"),
                                                       provenance)
    logger.info("Fit complete", extra={"extra_data": {
        "fitted_total": round(surface.total, 3), "observed_total": table.total_count,
        "theta": result.theta_hat.as_dict(),
    }})
    return artifacts


def cmd_predict(run: RunConfig) -> Dict[str, Path]:
    """
    Intensity per requested partition from the fitted linear predictor.

    Reads fitted_eta.csv written by ``fit`` and writes intensity_<partition>.csv
    for each of the ``[predict] partitions``.
    """
    fitted_path = run.artifact("fitted_eta.csv")
    if not fitted_path.is_file():
        raise MissingArtifactError(fitted_path, "fit")
    table = _load_table(run)
    fitted = read_csv_artifact(fitted_path)
    if not np.array_equal(fitted["pixel_id"].to_numpy(), table.pixel_id):
        raise ArtifactMismatchError(fitted_path, int(len(fitted)), table.n_pixels)

    estimator = IntensityEstimator.parse(run.estimator)
    surface = IntensitySurface(
        pixel_id=table.pixel_id,
        intensity=intensity_from_moments(fitted["eta_mean"].to_numpy(), fitted["eta_sd"].to_numpy() ** 2,
                                         estimator),
        estimator=estimator,
    )
    provenance = _provenance(run)
    artifacts = {}
    for name in run.predict_partitions:
        path = run.artifact(f"intensity_{name}.csv")
        if name == "pixel":
            artifacts[name] = write_pixel_surface(surface, table, path, provenance)
        else:
            units = aggregate_intensity(surface, table.partition(name), table.count)
            artifacts[name] = write_unit_intensity(units, path, provenance)
    return artifacts


def cmd_cv(run: RunConfig) -> Dict[str, Path]:
    """k-fold cross-validation: per-fold, mean and pooled AUC, R2 and RCE"""
    table = _load_table(run)
    if run.blocked_by:
        plan = spatial_block_split(table, run.blocked_by, run.folds, run.cv_seed)
    else:
        plan = kfold_split(table.n_pixels, run.folds, run.cv_seed)
    result = run_cv(run.spec, table, plan, run.cv_partitions, run.estimator, run.workers, run.step, run.radius)

    provenance = _provenance(run)
    curves = [pd.DataFrame({"curve": str(fold), "fpr": c.fpr, "tpr": c.tpr})
              for fold, c in sorted(result.fold_curves.items())]
    if result.pooled_curve is not None:
        curves.append(pd.DataFrame({"curve": "pooled", "fpr": result.pooled_curve.fpr,
                                    "tpr": result.pooled_curve.tpr}))
    artifacts = {
        "cv_metrics": write_csv_atomic(run.artifact("cv_metrics.csv"), result.metrics, provenance),
        "cv_intensity": write_csv_atomic(run.artifact("cv_intensity.csv"), pd.DataFrame({
            "pixel_id": table.pixel_id, "fold": plan.folds, "lambda": result.intensity}), provenance),
    }
    if curves:
        artifacts["cv_roc"] = write_csv_atomic(run.artifact("cv_roc.csv"), pd.concat(curves, ignore_index=True),
                                               provenance)
    return artifacts


def cmd_simulate(run: RunConfig) -> Dict[str, Path]:
    """Write one synthetic dataset, or replicate_<r>/ directories for several"""
    provenance = _provenance(run)
    if run.replicates == 1:
        dataset = simulate_lgcp(run.simulation)
        paths = write_dataset(dataset, run.output_dir, provenance)
        return {"pixels": paths[0], "truth": paths[1]}

    artifacts = {}
    datasets = simulate_replicates(run.simulation, run.replicates, run.workers)
    for r, dataset in enumerate(datasets):
        replicate_provenance = Provenance(run.config_hash, dataset.config.seed)
        paths = write_dataset(dataset, run.artifact(f"replicate_{r:03d}"), replicate_provenance)
        artifacts[f"pixels_{r}"], artifacts[f"truth_{r}"] = paths
    return artifacts


def cmd_screen(run: RunConfig) -> Dict[str, Path]:
    """One intercept + covariate model per candidate, ranked by pixel AUC"""
    table = _load_table(run)
    median = run.spec.pc_prior_median if run.spec else None

    def score(candidate: str):
        spec = ModelSpec(linear_effects=(candidate,), **({} if median is None else {"pc_prior_median": median}))
        result = _fit(run, spec, table)
        auc = _pixel_auc(result, table, run.estimator)
        return candidate, auc, _hosmer(auc), result.coefficient(candidate)

    rows = map_ordered(score, run.candidates, run.workers)
    frame = pd.DataFrame(rows, columns=["covariate", "auc", "hosmer_class", "coefficient"])
    frame = frame.sort_values("auc", ascending=False, kind="mergesort").reset_index(drop=True)
    return {"screen": write_csv_atomic(run.artifact("screen.csv"), frame, _provenance(run))}


def compare_specs(spec: ModelSpec, trigger: str) -> Dict[str, ModelSpec]:
    """Trigger-only, LSE-only and trigger+LSE variants sharing every other effect"""
    base = spec.without(trigger)
    shared = base.linear_effects
    with_trigger = ModelSpec(
        intercept=base.intercept,
        linear_effects=shared + (trigger,),
        besag_partition=base.besag_partition,
        besag_edges=base.besag_edges,
        rw1_effects=base.rw1_effects,
        iid_effects=base.iid_effects,
        pc_prior_median=base.pc_prior_median,
        pc_prior_medians=base.pc_prior_medians,
        standardize=base.standardize,
        scale=base.scale,
    )
    return {
        "trigger-only": with_trigger.without(base.besag_partition),
        "lse-only": base,
        "trigger+lse": with_trigger,
    }


def cmd_compare(run: RunConfig) -> Dict[str, Path]:
    """Pixel AUC of the three trigger / LSE configurations"""
    table = _load_table(run)
    graph = _graph_for(run.spec, table)
    specs = compare_specs(run.spec, run.trigger)
    rows = []
    for name, spec in specs.items():
        result = _fit(run, spec, table, graph if spec.besag_partition else None)
        auc = _pixel_auc(result, table, run.estimator)
        rows.append((name, auc, _hosmer(auc), ",".join(spec.linear_effects), run.config_hash))
    frame = pd.DataFrame(rows, columns=["model", "auc", "hosmer_class", "linear_effects", "config_hash"])
    return {"compare": write_csv_atomic(run.artifact("compare.csv"), frame, _provenance(run))}


def _optional_artifact(run: RunConfig, name: str) -> Optional[List[dict]]:
    path = run.artifact(name)
    return read_csv_artifact(path).to_dict("records") if path.is_file() else None


def cmd_report(run: RunConfig) -> Dict[str, Path]:
    """Render every available artifact into report.txt"""
    lse_units = _optional_artifact(run, "lse_units.csv")
    significance = None
    if lse_units:
        labels = pd.Series([u["significance"] for u in lse_units])
        significance = labels.value_counts().sort_index().to_dict()

    correlation = None
    if run.data_path is not None and Path(run.data_path).is_file() and len(run.continuous) >= 2:
        correlation = pairwise_correlation(_load_table(run), run.continuous)

    context = {
        "provenance": _provenance(run).header_line(),
        "screen": _optional_artifact(run, "screen.csv"),
        "compare": _optional_artifact(run, "compare.csv"),
        "cv": _optional_artifact(run, "cv_metrics.csv"),
        "in_sample": _optional_artifact(run, "in_sample_metrics.csv"),
        "hyperparameters": _optional_artifact(run, "hyperparameters.csv"),
        "fixed": _optional_artifact(run, "effects_fixed.csv"),
        "lse_units": lse_units,
        "significance": significance,
        "correlation": correlation,
    }
    environment = Environment(loader=FileSystemLoader(TEMPLATE_DIR), trim_blocks=True, lstrip_blocks=True)
    try:
        text = environment.get_template("report.txt.j2").render(**context)
    except TemplateError as exc:
        raise TemplateRenderError(f"report template failed: {exc}")
    return {"report": write_text_atomic(run.artifact("report.txt"), text)}


HANDLERS: Dict[str, Callable[[RunConfig], Dict[str, Path]]] = {
    "fit": cmd_fit,
    "predict": cmd_predict,
    "cv": cmd_cv,
    "simulate": cmd_simulate,
    "screen": cmd_screen,
    "compare": cmd_compare,
    "report": cmd_report,
}


class _ArgumentError(ConfigError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting so usage errors map to exit code 2"""

    def error(self, message):
        raise _ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=TOOL_NAME, description="LGCP landslide intensity modelling")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=HANDLERS[command].__doc__.splitlines()[0])
        sub.add_argument("--config", "-c", help="run configuration file")
        sub.add_argument("--output", "-o", help="output directory (overrides [run] output)")
        sub.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                         help="override one configuration value (repeatable)")
        sub.add_argument("--seed", type=int, help="master seed (overrides [run] seed)")
        sub.add_argument("--workers", type=int, help="worker thread cap")
        sub.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
        sub.add_argument("--log-json", action="store_true", help="structured JSON log records")
    return parser


def run_command(args: argparse.Namespace) -> Dict[str, Path]:
    document = load_config_file(args.config) if args.config else ConfigDocument()
    document.apply_overrides(args.overrides)
    run = build_run_config(args.command, document, output=args.output, seed=args.seed,
                           workers=args.workers, log_level=args.log_level, log_json=args.log_json)

    setup_logging({
        "log_level": (run.log_level or LOGGING_CONFIG["log_level"]).upper(),
        "log_dir": LOGGING_CONFIG["log_dir"] or str(run.output_dir),
        "enable_file_logging": LOGGING_CONFIG["enable_file_logging"],
        "structured_logging": run.log_json or LOGGING_CONFIG["structured_logging"],
    })
    validate_run_config(run)

    start = time.perf_counter()
    artifacts = HANDLERS[run.command](run)
    log_performance(logger, f"cmd_{run.command}", (time.perf_counter() - start) * 1000.0,
                    artifacts=sorted(artifacts), output=str(run.output_dir))
    return artifacts


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and map errors to exit codes.

    0 success, 2 configuration error, 3 data error, 4 numerical failure,
    1 anything unexpected.
    """
    try:
        args = build_parser().parse_args(argv)
        run_command(args)
    except LgcpError as exc:
        log_error_with_context(logger, exc, "command")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:
        logger.exception("Unexpected failure")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0
