"""
Data models for ROC curves and cross-validation
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
import pandas as pd


class HosmerClass(Enum):
    """Discrimination bands for AUC values"""
    POOR = "poor"
    ACCEPTABLE = "acceptable"
    EXCELLENT = "excellent"
    OUTSTANDING = "outstanding"


@dataclass(frozen=True)
class RocCurve:
    """
    ROC points from (0, 0) to (1, 1), one per distinct threshold.

    ``thresholds[i]`` is the score cut giving point i + 1 (scores >= cut
    are predicted positive).
    """
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray
    auc: float


@dataclass(frozen=True)
class CvPlan:
    """Fold index per pixel"""
    k: int
    folds: np.ndarray
    seed: int
    blocked_by: Optional[str] = None

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.folds == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.folds != fold)

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.folds, minlength=self.k)


@dataclass
class CvResult:
    """
    Cross-validation output.

    ``metrics`` has columns metric, partition, fold, value; fold is the fold
    number, ``pooled`` for metrics on the concatenated out-of-sample
    predictions or ``mean`` for the average over folds.
    """
    plan: CvPlan
    metrics: pd.DataFrame
    intensity: np.ndarray                     # out-of-sample pixel intensity
    fold_curves: Dict[int, RocCurve] = field(default_factory=dict)
    pooled_curve: Optional[RocCurve] = None

    def value(self, metric: str, partition: str = "pixel", fold="pooled") -> float:
        frame = self.metrics
        match = frame[(frame["metric"] == metric) & (frame["partition"] == partition)
                      & (frame["fold"].astype(str) == str(fold))]
        if match.empty:
            raise KeyError(f"{metric}/{partition}/{fold}")
        return float(match["value"].iloc[0])

    def fold_values(self, metric: str, partition: str = "pixel") -> List[float]:
        frame = self.metrics
        rows = frame[(frame["metric"] == metric) & (frame["partition"] == partition)
                     & ~frame["fold"].astype(str).isin(["pooled", "mean"])]
        return rows["value"].astype(float).tolist()
