"""
Covariate transformations: standardization, equidistant binning, correlation
"""

from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from config import INGEST_CONFIG
from core.logging_config import get_logger

from .exceptions import DomainValueError, ZeroVarianceError
from .models import BinEdges, CorrelationReport, CovariateRole, CovariateSpec, PixelTable, Standardization

logger = get_logger(__name__)


def fit_standardization(values: np.ndarray, name: str) -> Standardization:
    """Sample mean and sample standard deviation (ddof=1) of one column"""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ZeroVarianceError(name)
    mean = float(values.mean())
    sd = float(values.std(ddof=1))
    if not np.isfinite(sd) or sd <= np.finfo(float).eps * max(1.0, abs(mean)):
        raise ZeroVarianceError(name)
    return Standardization(mean=mean, sd=sd)


def standardize_covariates(table: PixelTable, specs: Sequence[CovariateSpec]
                           ) -> Tuple[PixelTable, Dict[str, Standardization]]:
    """
    Center and scale every linear covariate flagged for standardization.

    Returns:
        The transformed table and the recorded (mean, sd) per covariate, for
        reuse on held-out data through ``apply_standardization``
    """
    params: Dict[str, Standardization] = {}
    for spec in specs:
        if spec.role is CovariateRole.LINEAR and spec.standardize:
            params[spec.name] = fit_standardization(table.continuous[spec.name], spec.name)
    return apply_standardization(table, params), params


def apply_standardization(table: PixelTable, params: Dict[str, Standardization]) -> PixelTable:
    """Standardize with previously recorded parameters (never refits)"""
    return table.with_continuous({name: p.apply(table.continuous[name]) for name, p in params.items()})


def destandardize(table: PixelTable, params: Dict[str, Standardization]) -> PixelTable:
    """Map standardized columns back to their original scale"""
    return table.with_continuous({name: p.invert(table.continuous[name]) for name, p in params.items()})


def fit_bin_edges(column: np.ndarray, k: int, name: str = "column") -> BinEdges:
    """k equal-width intervals over [min, max]"""
    if k < 2:
        raise DomainValueError(name, None, f"bin count must be at least 2, got {k}")
    values = np.asarray(column, dtype=float)
    low, high = float(values.min()), float(values.max())
    if not low < high:
        raise ZeroVarianceError(name)
    return BinEdges(edges=np.linspace(low, high, k + 1))


def apply_bins(column: np.ndarray, edges: BinEdges) -> np.ndarray:
    """
    Class index in 1..k for each value.

    Intervals are half-open [e_l, e_r) except the last, which is closed.
    Values outside the fitted range (held-out data) fall into the end classes.
    """
    inner = edges.edges[1:-1]
    classes = np.searchsorted(inner, np.asarray(column, dtype=float), side="right") + 1
    return np.clip(classes, 1, edges.k)


def bin_equidistant(column: np.ndarray, k: int, name: str = "column") -> Tuple[np.ndarray, BinEdges]:
    """Split a column into k equidistant classes; returns (classes, edges)"""
    edges = fit_bin_edges(column, k, name)
    return apply_bins(column, edges), edges


def pairwise_correlation(table: PixelTable, names: Optional[Iterable[str]] = None,
                         threshold: Optional[float] = None) -> CorrelationReport:
    """
    Pearson correlation between continuous covariates.

    Pairs with |r| above ``threshold`` are listed as collinear candidates;
    only one member of such a group should enter a model.
    """
    threshold = INGEST_CONFIG["correlation_threshold"] if threshold is None else threshold
    columns = list(names) if names is not None else list(table.continuous)
    if not columns:
        return CorrelationReport(names=[], matrix=np.zeros((0, 0)), threshold=threshold, flagged=[])

    data = np.vstack([np.asarray(table.continuous[c], dtype=float) for c in columns])
    matrix = np.atleast_2d(np.corrcoef(data))
    flagged = []
    for i in range(len(columns)):
        for j in range(i + 1, len(columns)):
            if abs(matrix[i, j]) > threshold:
                flagged.append((columns[i], columns[j], float(matrix[i, j])))
    flagged.sort(key=lambda item: -abs(item[2]))
    if flagged:
        logger.info("Collinear covariate pairs found", extra={"extra_data": {"pairs": len(flagged)}})
    return CorrelationReport(names=columns, matrix=matrix, threshold=threshold, flagged=flagged)
