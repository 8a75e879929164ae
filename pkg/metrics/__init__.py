"""
Evaluation suite: ROC/AUC, count metrics and cross-validation
"""

from .counts import r2_counts, rce_counts
from .cv import in_sample_metrics, kfold_split, partition_metrics, run_cv, spatial_block_split
from .exceptions import FoldFitError, MetricDomainError
from .models import CvPlan, CvResult, HosmerClass, RocCurve
from .roc import auc_score, hosmer_class, roc_auc

__all__ = [
    "auc_score",
    "CvPlan",
    "CvResult",
    "FoldFitError",
    "hosmer_class",
    "HosmerClass",
    "in_sample_metrics",
    "kfold_split",
    "MetricDomainError",
    "partition_metrics",
    "r2_counts",
    "rce_counts",
    "roc_auc",
    "RocCurve",
    "run_cv",
    "spatial_block_split",
]
