"""
Cross-cutting infrastructure: logging, configuration files, errors, artifacts
"""

from .artifacts import Provenance, read_csv_artifact, write_csv_atomic, write_text_atomic
from .config_file import ConfigDocument, ConfigParseError, load_config_file, parse_config_text
from .exceptions import ConfigError, DataError, LgcpError, NumericalError

__all__ = [
    "Provenance", "read_csv_artifact", "write_csv_atomic", "write_text_atomic",
    "ConfigDocument", "ConfigParseError", "load_config_file", "parse_config_text",
    "ConfigError", "DataError", "LgcpError", "NumericalError",
]
