"""
Fold planning and the cross-validation harness
"""

import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.model_selection import KFold

from config import CV_CONFIG
from core.exceptions import LgcpError
from core.logging_config import get_logger, log_performance
from core.parallel import map_ordered
from inference.engine import fit_model
from inference.models import PosteriorResult
from ingest.adjacency import build_adjacency, read_edge_list
from ingest.models import PixelTable
from model.builder import build_model
from model.models import ModelSpec
from predict.intensity import intensity_from_moments, susceptibility

from .counts import r2_counts, rce_counts
from .exceptions import FoldFitError, MetricDomainError
from .models import CvPlan, CvResult, RocCurve
from .roc import roc_auc

logger = get_logger(__name__)


def _kfold_labels(n: int, k: int, seed: int) -> np.ndarray:
    """Fold number per row from a shuffled ``KFold``; sizes differ by at most one"""
    folds = np.empty(n, dtype=np.int64)
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    for fold, (_, test) in enumerate(splitter.split(np.arange(n))):
        folds[test] = fold
    return folds


def kfold_split(n: int, k: Optional[int] = None, seed: Optional[int] = None) -> CvPlan:
    """
    Uniform random complementary folds.

    Rows are shuffled with the seed and cut into k contiguous test blocks,
    so fold sizes differ by at most one.
    """
    k = CV_CONFIG["folds"] if k is None else k
    seed = CV_CONFIG["seed"] if seed is None else seed
    if k < 2:
        raise MetricDomainError(f"need at least 2 folds, got {k}")
    if n < k:
        raise MetricDomainError(f"cannot split {n} rows into {k} folds", {"rows": n, "folds": k})
    return CvPlan(k=k, folds=_kfold_labels(n, k, seed), seed=seed)


def spatial_block_split(table: PixelTable, partition: str, k: Optional[int] = None,
                        seed: Optional[int] = None) -> CvPlan:
    """Folds assigned per unit of ``partition``; all pixels of a unit share a fold"""
    k = CV_CONFIG["folds"] if k is None else k
    seed = CV_CONFIG["seed"] if seed is None else seed
    units = table.partition(partition)
    if units.n_units < k:
        raise MetricDomainError(f"cannot split {units.n_units} units into {k} folds",
                                {"partition": partition, "units": units.n_units, "folds": k})
    unit_folds = _kfold_labels(units.n_units, k, seed)
    return CvPlan(k=k, folds=unit_folds[units.index], seed=seed, blocked_by=partition)


def _safe(metric, *args) -> float:
    try:
        return metric(*args)
    except MetricDomainError as exc:
        logger.warning("Metric undefined", extra={"extra_data": {"reason": str(exc)}})
        return float("nan")


def partition_metrics(table: PixelTable, intensity: np.ndarray, partitions: Sequence[str]
                      ) -> Tuple[Dict[str, Dict[str, float]], Optional[RocCurve]]:
    """
    AUC, R2 and RCE per partition for the given pixel intensities.

    Unit labels are "at least one event"; unit scores are susceptibilities.

    Returns:
        ({partition: {metric: value}}, pixel ROC curve or None)
    """
    out: Dict[str, Dict[str, float]] = {}
    pixel_curve = None
    for name in partitions:
        units = table.partition(name)
        lam = np.bincount(units.index, weights=intensity, minlength=units.n_units)
        observed = np.bincount(units.index, weights=table.count.astype(float), minlength=units.n_units)
        scores = susceptibility(lam)
        try:
            curve = roc_auc(scores, observed > 0)
            auc = curve.auc
            if name == "pixel":
                pixel_curve = curve
        except MetricDomainError as exc:
            logger.warning("AUC undefined", extra={"extra_data": {"partition": name, "reason": str(exc)}})
            auc = float("nan")
        out[name] = {
            "auc": auc,
            "r2": _safe(r2_counts, observed, lam),
            "rce": _safe(rce_counts, observed, lam),
        }
    return out, pixel_curve


def in_sample_metrics(result: PosteriorResult, table: PixelTable,
                      partitions: Sequence[str] = ("pixel",), estimator=None) -> pd.DataFrame:
    """Within-sample AUC, R2 and RCE per partition (columns metric, partition, value)"""
    intensity = intensity_from_moments(result.eta_mean, result.eta_sd ** 2, estimator)
    values, _ = partition_metrics(table, intensity, partitions)
    rows = [(metric, name, value) for name, metrics in values.items() for metric, value in metrics.items()]
    return pd.DataFrame(rows, columns=["metric", "partition", "value"])


def run_cv(spec: ModelSpec, table: PixelTable, plan: CvPlan, partitions: Sequence[str] = ("pixel",),
           estimator=None, workers: Optional[int] = None, step: Optional[float] = None,
           radius: Optional[int] = None) -> CvResult:
    """
    Fit on k - 1 folds and predict the held-out fold, for every fold.

    Covariate transforms are refitted on each training set. Every pixel is
    predicted exactly once, by the model that did not see it; pooled
    metrics use these concatenated predictions and ``mean`` rows average
    the per-fold values.

    Raises:
        FoldFitError: A fold fit failed; the error names the fold
    """
    start = time.perf_counter()
    graph = None
    if spec.besag_partition:
        units = table.partition(spec.besag_partition)
        graph = read_edge_list(spec.besag_edges, units.unit_ids) if spec.besag_edges \
            else build_adjacency(table, units)

    def run_fold(fold: int) -> Tuple[int, np.ndarray]:
        fold_start = time.perf_counter()
        try:
            model = build_model(spec, table, fit_rows=plan.train_rows(fold), graph=graph)
            result = fit_model(model, step=step, radius=radius, workers=1)
        except LgcpError as exc:
            raise FoldFitError(fold, exc)
        test = plan.test_rows(fold)
        log_performance(logger, "cv_fold", (time.perf_counter() - fold_start) * 1000.0,
                        fold=fold, train=int(len(model.rows)), test=int(len(test)))
        return fold, intensity_from_moments(result.eta_mean[test], result.eta_sd[test] ** 2, estimator)

    outcomes = map_ordered(run_fold, range(plan.k), workers)

    intensity = np.empty(table.n_pixels)
    rows: List[Tuple[str, str, object, float]] = []
    fold_curves: Dict[int, RocCurve] = {}
    for fold, fold_intensity in outcomes:
        test = plan.test_rows(fold)
        intensity[test] = fold_intensity
        values, curve = partition_metrics(table.subset(test), fold_intensity, partitions)
        if curve is not None:
            fold_curves[fold] = curve
        rows.extend((metric, name, fold, value) for name, metrics in values.items()
                    for metric, value in metrics.items())

    fold_frame = pd.DataFrame(rows, columns=["metric", "partition", "fold", "value"])
    means = fold_frame.groupby(["metric", "partition"], sort=False)["value"].mean()
    rows.extend((metric, name, "mean", float(value)) for (metric, name), value in means.items())

    pooled, pooled_curve = partition_metrics(table, intensity, partitions)
    rows.extend((metric, name, "pooled", value) for name, metrics in pooled.items()
                for metric, value in metrics.items())

    log_performance(logger, "run_cv", (time.perf_counter() - start) * 1000.0,
                    folds=plan.k, pixels=table.n_pixels, pooled_auc=pooled.get("pixel", {}).get("auc"))
    return CvResult(
        plan=plan,
        metrics=pd.DataFrame(rows, columns=["metric", "partition", "fold", "value"]),
        intensity=intensity,
        fold_curves=fold_curves,
        pooled_curve=pooled_curve,
    )
