"""
Run configuration: one file drives every subcommand.

    [run]
    output = runs/demo
    seed = 7
    workers = 2

    [data]
    pixels = data/pixels.csv
    partitions = slope_unit, catchment, admin
    continuous = slope, wetness, trigger      # optional, else taken from the model
    categorical = lithology

    [model]      ... see model.spec_parser
    [inference]  step, radius, init
    [predict]    estimator, partitions
    [cv]         folds, seed, blocked_by, partitions
    [screen]     candidates
    [compare]    trigger
    [report]     columns
    [simulate]   width, height, n_units, betas = slope:0.5, ..., replicates
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from config import CLI_CONFIG, CV_CONFIG, INFERENCE_CONFIG, PREDICT_CONFIG, SIMULATION_CONFIG
from core.config_file import ConfigDocument, ConfigParseError
from ingest.models import CovariateRole, CovariateSpec
from model.models import ModelSpec
from model.spec_parser import parse_model_spec
from simulate.models import SimulationConfig

COMMANDS = ("fit", "predict", "cv", "simulate", "screen", "compare", "report")


@dataclass(frozen=True)
class RunConfig:
    """Resolved options of one command invocation"""
    command: str
    output_dir: Path
    document: ConfigDocument
    data_path: Optional[Path] = None
    partitions: Tuple[str, ...] = ()
    continuous: Tuple[str, ...] = ()
    categorical: Tuple[str, ...] = ()
    spec: Optional[ModelSpec] = None
    seed: Optional[int] = None
    workers: Optional[int] = None
    step: Optional[float] = None
    radius: Optional[int] = None
    init: Optional[Tuple[float, ...]] = None
    estimator: str = PREDICT_CONFIG["estimator"]
    predict_partitions: Tuple[str, ...] = tuple(CLI_CONFIG["default_partitions"])
    folds: int = CV_CONFIG["folds"]
    cv_seed: int = CV_CONFIG["seed"]
    blocked_by: Optional[str] = CV_CONFIG["blocked_by"]
    cv_partitions: Tuple[str, ...] = tuple(CLI_CONFIG["default_partitions"])
    candidates: Tuple[str, ...] = ()
    trigger: Optional[str] = None
    report_columns: Tuple[str, ...] = ()
    simulation: Optional[SimulationConfig] = None
    replicates: int = 1
    log_level: Optional[str] = None
    log_json: bool = False
    config_hash: str = field(default="none")

    def schema(self) -> List[CovariateSpec]:
        """Columns to load from the pixel table"""
        specs = [CovariateSpec(name) for name in self.continuous]
        specs += [CovariateSpec(name, CovariateRole.CATEGORICAL_IID) for name in self.categorical]
        return specs

    def artifact(self, name: str) -> Path:
        return self.output_dir / name


def _model_columns(spec: Optional[ModelSpec]) -> Tuple[List[str], List[str]]:
    if spec is None:
        return [], []
    continuous = list(spec.linear_effects) + [e.covariate for e in spec.rw1_effects]
    return continuous, list(spec.iid_effects)


def _unique(names) -> Tuple[str, ...]:
    return tuple(dict.fromkeys(n for n in names if n))


def _simulation_config(document: ConfigDocument, seed: Optional[int]) -> SimulationConfig:
    section = "simulate"
    betas: Dict[str, float] = dict(SIMULATION_CONFIG["betas"])
    if document.has(section, "betas"):
        betas = {}
        for item in document.get_list(section, "betas"):
            name, _, value = item.partition(":")
            try:
                betas[name.strip()] = float(value)
            except ValueError:
                raise document.error(section, "betas", f"expected name:value, got '{item}'")
    try:
        return SimulationConfig(
            width=document.get_int(section, "width", SIMULATION_CONFIG["width"]),
            height=document.get_int(section, "height", SIMULATION_CONFIG["height"]),
            n_units=document.get_int(section, "n_units", SIMULATION_CONFIG["n_units"]),
            units_per_catchment=document.get_int(section, "units_per_catchment",
                                                 SIMULATION_CONFIG["units_per_catchment"]),
            catchments_per_admin=document.get_int(section, "catchments_per_admin",
                                                  SIMULATION_CONFIG["catchments_per_admin"]),
            beta0=document.get_float(section, "beta0", SIMULATION_CONFIG["beta0"]),
            betas=betas,
            sigma_lse=document.get_float(section, "sigma_lse", SIMULATION_CONFIG["sigma_lse"]),
            trigger_sd=document.get_float(section, "trigger_sd", SIMULATION_CONFIG["trigger_sd"]),
            trigger_decay=document.get_float(section, "trigger_decay", SIMULATION_CONFIG["trigger_decay"]),
            ridge_bumps=document.get_int(section, "ridge_bumps", SIMULATION_CONFIG["ridge_bumps"]),
            covariate_smoothness=document.get_float(section, "covariate_smoothness",
                                                    SIMULATION_CONFIG["covariate_smoothness"]),
            trigger_in_eta=document.get_bool(section, "trigger_in_eta", True),
            seed=SIMULATION_CONFIG["seed"] if seed is None else seed,
        )
    except ValueError as exc:
        raise ConfigParseError(f"[{section}] {exc}", document.path)


def build_run_config(command: str, document: ConfigDocument, output: Optional[str] = None,
                     seed: Optional[int] = None, workers: Optional[int] = None,
                     log_level: Optional[str] = None, log_json: bool = False) -> RunConfig:
    """
    Resolve a parsed document plus command-line flags into a RunConfig.

    Flags win over ``[run]`` keys, which win over the defaults in config.py.

    Raises:
        ConfigParseError: Bad value, with the line it came from
    """
    if command not in COMMANDS:
        raise ConfigParseError(f"unknown command '{command}'")

    seed = seed if seed is not None else document.get_int("run", "seed")
    workers = workers if workers is not None else document.get_int("run", "workers",
                                                                   INFERENCE_CONFIG["workers"])
    output_dir = Path(output or document.get_str("run", "output", CLI_CONFIG["default_output_dir"]))
    spec = parse_model_spec(document) if "model" in document.sections else None

    data = document.get_str("data", "pixels")
    data_path = Path(data) if data else None

    candidates = tuple(document.get_list("screen", "candidates"))
    trigger = document.get_str("compare", "trigger")
    report_columns = tuple(document.get_list("report", "columns"))

    model_continuous, model_categorical = _model_columns(spec)
    if document.has("data", "continuous"):
        continuous = _unique(document.get_list("data", "continuous"))
    else:
        continuous = _unique(model_continuous + list(candidates) + [trigger] + list(report_columns))
    categorical = _unique(document.get_list("data", "categorical", model_categorical))

    init = None
    if document.has("inference", "init"):
        try:
            init = tuple(float(v) for v in document.get_list("inference", "init"))
        except ValueError:
            raise document.error("inference", "init", "expected a comma separated list of numbers")

    partitions = _unique(document.get_list("data", "partitions"))
    return RunConfig(
        command=command,
        output_dir=output_dir,
        document=document,
        data_path=data_path,
        partitions=partitions,
        continuous=continuous,
        categorical=categorical,
        spec=spec,
        seed=seed,
        workers=workers,
        step=document.get_float("inference", "step", INFERENCE_CONFIG["grid_step"]),
        radius=document.get_int("inference", "radius", INFERENCE_CONFIG["grid_radius"]),
        init=init,
        estimator=document.get_str("predict", "estimator", PREDICT_CONFIG["estimator"]),
        predict_partitions=_unique(document.get_list("predict", "partitions",
                                                     CLI_CONFIG["default_partitions"])),
        folds=document.get_int("cv", "folds", CV_CONFIG["folds"]),
        cv_seed=document.get_int("cv", "seed", CV_CONFIG["seed"] if seed is None else seed),
        blocked_by=document.get_str("cv", "blocked_by", CV_CONFIG["blocked_by"]),
        cv_partitions=_unique(document.get_list("cv", "partitions", CLI_CONFIG["default_partitions"])),
        candidates=candidates,
        trigger=trigger,
        report_columns=report_columns,
        simulation=_simulation_config(document, seed) if "simulate" in document.sections or
        command == "simulate" else None,
        replicates=document.get_int("simulate", "replicates", 1),
        log_level=log_level or document.get_str("run", "log_level"),
        log_json=log_json,
        config_hash=document.digest(),
    )
