"""
Exception hierarchy shared by all pipeline stages.

Every error carries a ``details`` dict for structured logging and an
``exit_code`` used by the command line entry point.
"""

from typing import Any, Dict, Optional


class LgcpError(Exception):
    """Base exception for all pipeline errors"""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class ConfigError(LgcpError):
    """Raised for malformed configuration files or options"""

    exit_code = 2


class DataError(LgcpError):
    """Raised when input data violates the table contract"""

    exit_code = 3


class NumericalError(LgcpError):
    """Raised when a factorization, optimization or integration fails"""

    exit_code = 4
