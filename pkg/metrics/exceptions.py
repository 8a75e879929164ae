"""
Exceptions for the evaluation suite
"""

from typing import Any, Dict, Optional

from core.exceptions import DataError, LgcpError, NumericalError


class MetricDomainError(DataError):
    """Raised when a metric is undefined for its inputs"""
    pass


class FoldFitError(NumericalError):
    """A cross-validation fold could not be fitted"""

    def __init__(self, fold: int, cause: LgcpError, details: Optional[Dict[str, Any]] = None):
        merged = {"fold": fold, "cause": type(cause).__name__}
        merged.update(cause.details)
        merged.update(details or {})
        super().__init__(f"fold {fold} failed: {cause}", merged)
        self.fold = fold
        self.exit_code = cause.exit_code
