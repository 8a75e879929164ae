"""
Command line entry point
"""

from .commands import (HANDLERS, build_parser, cmd_compare, cmd_cv, cmd_fit, cmd_predict, cmd_report,
                       cmd_screen, cmd_simulate, compare_specs, main, run_command)
from .exceptions import ArtifactMismatchError, MissingArtifactError, TemplateRenderError
from .run_config import COMMANDS, RunConfig, build_run_config

__all__ = [
    "RunConfig", "build_run_config", "COMMANDS", "HANDLERS",
    "cmd_fit", "cmd_predict", "cmd_cv", "cmd_simulate", "cmd_screen", "cmd_compare", "cmd_report",
    "compare_specs", "build_parser", "run_command", "main",
    "ArtifactMismatchError", "MissingArtifactError", "TemplateRenderError",
]
