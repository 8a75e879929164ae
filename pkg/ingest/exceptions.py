"""
Exceptions raised while loading and transforming pixel tables
"""

from typing import Any, Dict, List, Optional

from core.exceptions import DataError


class SchemaError(DataError):
    """Raised when a declared column is missing from the file"""

    def __init__(self, column: str, message: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        self.column = column
        super().__init__(message or f"missing column '{column}'", {"column": column, **(details or {})})


class DomainValueError(DataError):
    """Raised when a value is outside its domain; ``row`` is 1-based, header excluded"""

    def __init__(self, column: str, row: Optional[int], message: str):
        self.column = column
        self.row = row
        location = f"row {row}, " if row is not None else ""
        super().__init__(f"{location}column '{column}': {message}", {"column": column, "row": row})


class ZeroVarianceError(DataError):
    """Raised when a covariate cannot be standardized or binned"""

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"covariate '{column}' has zero variance", {"column": column})


class UnreadableTableError(DataError):
    """Raised when a CSV file cannot be decoded or tokenized"""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"cannot read {path}: {reason}", {"path": path, "reason": reason})


class DuplicateLocationError(DataError):
    """Raised when several pixels occupy the same grid cell"""

    def __init__(self, pixel_ids: List[int]):
        self.pixel_ids = pixel_ids
        shown = ", ".join(str(p) for p in pixel_ids[:10])
        more = f" and {len(pixel_ids) - 10} more" if len(pixel_ids) > 10 else ""
        super().__init__(f"pixels share a grid cell: {shown}{more}", {"pixel_ids": pixel_ids})
