"""
Pixel table CSV reading and writing
"""

from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from config import INGEST_CONFIG
from core.artifacts import Provenance, write_csv_atomic
from core.logging_config import get_logger

from .exceptions import DomainValueError, SchemaError, UnreadableTableError
from .models import CovariateRole, CovariateSpec, PixelTable

logger = get_logger(__name__)

ID_COLUMN = INGEST_CONFIG["id_column"]
COUNT_COLUMN = INGEST_CONFIG["count_column"]
X_COLUMN = INGEST_CONFIG["x_column"]
Y_COLUMN = INGEST_CONFIG["y_column"]


def _first_bad_row(mask: np.ndarray) -> int:
    return int(np.flatnonzero(mask)[0]) + 1


def _numeric(frame: pd.DataFrame, column: str) -> np.ndarray:
    """Convert a text column to float, reporting the first non-numeric row"""
    raw = frame[column].str.strip()
    values = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        row = _first_bad_row(bad)
        raise DomainValueError(column, row, f"non-numeric value '{frame[column].iloc[row - 1]}'")
    return values


def _integral(frame: pd.DataFrame, column: str) -> np.ndarray:
    values = _numeric(frame, column)
    bad = values != np.round(values)
    if bad.any():
        row = _first_bad_row(bad)
        raise DomainValueError(column, row, f"expected an integer, got '{frame[column].iloc[row - 1]}'")
    return values.astype(np.int64)


def load_pixel_table(path: Union[str, Path], schema: Sequence[CovariateSpec],
                     partitions: Iterable[str] = ()) -> PixelTable:
    """
    Load and validate a pixel table.

    Args:
        path: CSV file with a header row; lines starting with '#' are skipped
        schema: Declared covariates; numeric roles are read as floats,
            categorical ones as labels
        partitions: Names of integer unit-membership columns

    Returns:
        PixelTable with rows in file order

    Raises:
        SchemaError: A declared column is absent
        UnreadableTableError: The file is not UTF-8 or not parseable as CSV
        DomainValueError: Non-numeric value, negative count, duplicate id or
            missing membership; the message names the 1-based data row
    """
    csv_path = Path(path)
    if not csv_path.is_file():
        raise SchemaError(str(csv_path), f"pixel table not found: {csv_path}")

    try:
        frame = pd.read_csv(csv_path, comment="#", dtype=str, keep_default_na=False,
                            skipinitialspace=True, encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise UnreadableTableError(str(csv_path), f"not valid UTF-8 at byte {exc.start}")
    except pd.errors.ParserError as exc:
        raise UnreadableTableError(str(csv_path), str(exc).strip())
    frame = frame.fillna("")
    frame.columns = [c.strip() for c in frame.columns]
    partition_names = list(partitions)

    required = [ID_COLUMN, X_COLUMN, Y_COLUMN, COUNT_COLUMN]
    required += [spec.name for spec in schema] + partition_names
    for column in required:
        if column not in frame.columns:
            raise SchemaError(column)

    pixel_id = _integral(frame, ID_COLUMN)
    duplicated = pd.Series(pixel_id).duplicated().to_numpy()
    if duplicated.any():
        row = _first_bad_row(duplicated)
        raise DomainValueError(ID_COLUMN, row, f"duplicate pixel_id {pixel_id[row - 1]}")

    count = _integral(frame, COUNT_COLUMN)
    negative = count < 0
    if negative.any():
        row = _first_bad_row(negative)
        raise DomainValueError(COUNT_COLUMN, row, f"negative count {count[row - 1]}")

    continuous = {}
    categorical = {}
    for spec in schema:
        if spec.role is CovariateRole.CATEGORICAL_IID:
            labels = frame[spec.name].str.strip().to_numpy(dtype=object)
            empty = labels == ""
            if empty.any():
                raise DomainValueError(spec.name, _first_bad_row(empty), "missing category label")
            categorical[spec.name] = labels.astype(str)
        else:
            continuous[spec.name] = _numeric(frame, spec.name)

    memberships = {}
    for name in partition_names:
        empty = frame[name].str.strip() == ""
        if empty.any():
            raise DomainValueError(name, _first_bad_row(empty.to_numpy()), "pixel has no unit membership")
        memberships[name] = _integral(frame, name)

    table = PixelTable(
        pixel_id=pixel_id,
        x=_numeric(frame, X_COLUMN),
        y=_numeric(frame, Y_COLUMN),
        count=count,
        continuous=continuous,
        categorical=categorical,
        partitions=memberships,
    )
    logger.info("Loaded pixel table", extra={"extra_data": {
        "path": str(csv_path), "pixels": table.n_pixels, "total_count": table.total_count,
        "covariates": len(schema), "partitions": partition_names,
    }})
    return table


def table_to_frame(table: PixelTable) -> pd.DataFrame:
    """Column layout: pixel_id, x, y, count, continuous..., categorical..., partitions..."""
    columns = {ID_COLUMN: table.pixel_id, X_COLUMN: table.x, Y_COLUMN: table.y, COUNT_COLUMN: table.count}
    columns.update(table.continuous)
    columns.update(table.categorical)
    columns.update(table.partitions)
    return pd.DataFrame(columns)


def write_pixel_table(table: PixelTable, path: Union[str, Path],
                      provenance: Optional[Provenance] = None) -> Path:
    """Write a pixel table in the format read by ``load_pixel_table``"""
    return write_csv_atomic(path, table_to_frame(table), provenance)


def schema_for_table(table: PixelTable) -> List[CovariateSpec]:
    """Schema that reloads every covariate column of ``table``"""
    specs = [CovariateSpec(name) for name in table.continuous]
    specs += [CovariateSpec(name, CovariateRole.CATEGORICAL_IID) for name in table.categorical]
    return specs
