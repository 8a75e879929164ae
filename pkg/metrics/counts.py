"""
Count-domain performance measures over mapping units
"""

import numpy as np

from .exceptions import MetricDomainError


def _paired(observed, predicted):
    observed = np.asarray(observed, dtype=float).ravel()
    predicted = np.asarray(predicted, dtype=float).ravel()
    if observed.shape != predicted.shape:
        raise MetricDomainError("observed and predicted differ in length")
    return observed, predicted


def r2_counts(observed, predicted) -> float:
    """1 - Var(Y - lambda) / Var(Y), sample variances over units"""
    observed, predicted = _paired(observed, predicted)
    if observed.size < 2:
        raise MetricDomainError("R2 needs at least two units", {"units": int(observed.size)})
    total = observed.var(ddof=1)
    if total == 0:
        raise MetricDomainError("R2 is undefined for constant observed counts")
    return float(1.0 - (observed - predicted).var(ddof=1) / total)


def rce_counts(observed, predicted) -> float:
    """Ratio of explained counts: 1 - sum|Y - lambda| / sum Y"""
    observed, predicted = _paired(observed, predicted)
    total = observed.sum()
    if total <= 0:
        raise MetricDomainError("RCE is undefined when no events were observed")
    return float(1.0 - np.abs(observed - predicted).sum() / total)
