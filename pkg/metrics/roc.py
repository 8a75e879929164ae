"""
ROC curves and AUC with the Mann-Whitney tie convention
"""

import numpy as np
from scipy.stats import rankdata

from .exceptions import MetricDomainError
from .models import HosmerClass, RocCurve


def _validate(scores, labels):
    scores = np.asarray(scores, dtype=float).ravel()
    labels = np.asarray(labels).ravel().astype(bool)
    if scores.shape != labels.shape:
        raise MetricDomainError("scores and labels differ in length",
                                {"scores": int(scores.size), "labels": int(labels.size)})
    if not np.all(np.isfinite(scores)):
        raise MetricDomainError("scores must be finite")
    n_pos = int(labels.sum())
    n_neg = int(labels.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise MetricDomainError("AUC needs both classes", {"positives": n_pos, "negatives": n_neg})
    return scores, labels, n_pos, n_neg


def auc_score(scores, labels) -> float:
    """
    Probability that a random positive outscores a random negative, ties 1/2.

    Computed from average ranks: U = R_pos - n_pos (n_pos + 1) / 2.
    """
    scores, labels, n_pos, n_neg = _validate(scores, labels)
    ranks = rankdata(scores, method="average")
    u_statistic = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_statistic / (n_pos * n_neg))


def roc_auc(scores, labels) -> RocCurve:
    """
    ROC curve over all distinct score thresholds, highest first, and its AUC.

    Raises:
        MetricDomainError: Only one class present, or mismatched inputs
    """
    scores, labels, n_pos, n_neg = _validate(scores, labels)
    order = np.argsort(-scores, kind="mergesort")
    sorted_scores = scores[order]
    sorted_labels = labels[order]

    # last index of each group of tied scores
    group_ends = np.flatnonzero(np.r_[sorted_scores[1:] != sorted_scores[:-1], True])
    true_pos = np.cumsum(sorted_labels)[group_ends]
    false_pos = (group_ends + 1) - true_pos

    tpr = np.r_[0.0, true_pos / n_pos]
    fpr = np.r_[0.0, false_pos / n_neg]
    return RocCurve(fpr=fpr, tpr=tpr, thresholds=sorted_scores[group_ends],
                    auc=auc_score(scores, labels))


def hosmer_class(auc: float) -> HosmerClass:
    """poor < 0.7 <= acceptable < 0.8 <= excellent < 0.9 <= outstanding"""
    if not 0.0 <= auc <= 1.0:
        raise MetricDomainError(f"AUC must lie in [0, 1], got {auc}")
    if auc < 0.7:
        return HosmerClass.POOR
    if auc < 0.8:
        return HosmerClass.ACCEPTABLE
    if auc < 0.9:
        return HosmerClass.EXCELLENT
    return HosmerClass.OUTSTANDING
