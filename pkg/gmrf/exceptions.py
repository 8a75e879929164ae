"""
Exceptions for GMRF structure construction and factorization
"""

from typing import Any, Dict, Optional

from core.exceptions import DataError, NumericalError


class StructureError(DataError):
    """Raised when a structure matrix cannot be built from its inputs"""
    pass


class FactorizationError(NumericalError):
    """Raised when a precision matrix is not numerically positive definite"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(f"factorization failed: {message}", details)
