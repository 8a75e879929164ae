"""
Run configuration validation.

Checks a resolved run configuration before any work starts so that bad
paths and out-of-range options fail fast with every problem listed at once.
"""

import os
from pathlib import Path
from typing import Any, List, Tuple

from .exceptions import ConfigError
from .logging_config import get_logger

logger = get_logger(__name__)

VALID_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
ESTIMATORS = ("plugin-mean", "lognormal-mean")
COMMANDS_NEEDING_DATA = ("fit", "predict", "cv", "screen", "compare")
COMMANDS_NEEDING_MODEL = ("fit", "cv")


class RunConfigValidator:
    """Collects errors and warnings for one run configuration"""

    def __init__(self, run: Any):
        self.run = run
        self.errors: List[str] = []
        self.warnings: List[str] = []

    def validate_all(self) -> Tuple[bool, List[str], List[str]]:
        """
        Validate every section relevant to the run's command.

        Returns:
            Tuple of (is_valid, errors, warnings)
        """
        self.errors.clear()
        self.warnings.clear()

        self._validate_output_dir()
        self._validate_inputs()
        self._validate_inference()
        self._validate_predict()
        self._validate_cv()
        self._validate_commands()
        self._validate_logging()

        return not self.errors, self.errors.copy(), self.warnings.copy()

    def _validate_output_dir(self):
        """The output directory or its nearest existing parent must be writable"""
        path = Path(self.run.output_dir)
        probe = path
        while not probe.exists() and probe != probe.parent:
            probe = probe.parent
        if probe.exists() and not probe.is_dir():
            self.errors.append(f"Output path '{path}' is not a directory")
        elif not os.access(probe, os.W_OK):
            self.errors.append(f"Output directory '{path}' is not writable")

    def _validate_inputs(self):
        run = self.run
        if run.command in COMMANDS_NEEDING_DATA:
            if run.data_path is None:
                self.errors.append("[data] pixels is required for this command")
            elif not Path(run.data_path).is_file():
                self.errors.append(f"Pixel table '{run.data_path}' does not exist")
        if run.command in COMMANDS_NEEDING_MODEL and run.spec is None:
            self.errors.append("a [model] section is required for this command")
        spec = run.spec
        if spec is not None and spec.besag_edges and not Path(spec.besag_edges).is_file():
            self.errors.append(f"Edge list '{spec.besag_edges}' does not exist")
        if spec is not None and spec.besag_partition and spec.besag_partition not in run.partitions:
            self.errors.append(f"Besag partition '{spec.besag_partition}' is not listed in [data] partitions")

    def _validate_inference(self):
        run = self.run
        if run.step is not None and not run.step > 0:
            self.errors.append(f"[inference] step must be positive, got {run.step}")
        if run.radius is not None and run.radius < 0:
            self.errors.append(f"[inference] radius must be non-negative, got {run.radius}")
        if run.workers is not None and run.workers < 1:
            self.errors.append(f"workers must be at least 1, got {run.workers}")
        if run.radius == 0:
            self.warnings.append("radius = 0 fixes theta at its mode (empirical Bayes plug-in)")
        if run.spec is not None and run.init is not None and len(run.init) != len(run.spec.random_effect_names()):
            self.errors.append(f"[inference] init has {len(run.init)} values for "
                               f"{len(run.spec.random_effect_names())} hyperparameters")

    def _validate_predict(self):
        if self.run.estimator not in ESTIMATORS:
            self.errors.append(f"[predict] estimator must be one of {', '.join(ESTIMATORS)}, "
                               f"got '{self.run.estimator}'")
        self._check_partitions("[predict] partitions", self.run.predict_partitions)

    def _validate_cv(self):
        run = self.run
        if not 0 <= run.cv_seed < 2 ** 32:
            self.errors.append(f"[cv] seed must be in [0, 2**32), got {run.cv_seed}")
        if run.command != "cv":
            return
        if run.folds < 2:
            self.errors.append(f"[cv] folds must be at least 2, got {run.folds}")
        if run.blocked_by and run.blocked_by not in run.partitions:
            self.errors.append(f"[cv] blocked_by '{run.blocked_by}' is not listed in [data] partitions")
        self._check_partitions("[cv] partitions", run.cv_partitions)

    def _validate_commands(self):
        run = self.run
        if run.command == "screen" and not run.candidates:
            self.errors.append("[screen] candidates lists no covariates")
        if run.command == "compare":
            if not run.trigger:
                self.errors.append("[compare] trigger names no covariate")
            if run.spec is None or not run.spec.besag_partition:
                self.errors.append("compare needs a [model] with a besag partition")
        if run.command == "simulate" and run.replicates < 1:
            self.errors.append(f"[simulate] replicates must be at least 1, got {run.replicates}")

    def _validate_logging(self):
        level = self.run.log_level
        if level and level.upper() not in VALID_LOG_LEVELS:
            self.errors.append(f"Invalid log level '{level}'. Must be one of: {', '.join(VALID_LOG_LEVELS)}")

    def _check_partitions(self, label: str, names):
        for name in names:
            if name != "pixel" and name not in self.run.partitions:
                self.errors.append(f"{label}: '{name}' is not listed in [data] partitions")


def validate_run_config(run: Any) -> None:
    """
    Validate a run configuration, logging warnings.

    Raises:
        ConfigError: If any error was found; all of them are in ``details``
    """
    is_valid, errors, warnings = RunConfigValidator(run).validate_all()
    for warning in warnings:
        logger.warning("Configuration warning", extra={"extra_data": {"warning": warning}})
    if not is_valid:
        message = f"Found {len(errors)} configuration error(s): " + "; ".join(errors)
        raise ConfigError(message, details={"errors": errors, "warnings": warnings})
    logger.debug("Configuration validated", extra={"extra_data": {
        "command": run.command, "warnings": len(warnings),
    }})
