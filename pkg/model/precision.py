"""
Joint prior precision Q(theta) and hyperparameter priors
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from config import MODEL_CONFIG

from .models import Hyperparameters, LatentLayout, ModelSpec, PCPrior

_LOG_HALF = float(np.log(0.5))


def theta_values(theta) -> np.ndarray:
    """Accept Hyperparameters or any array-like of log-precisions"""
    values = theta.values if isinstance(theta, Hyperparameters) else theta
    return np.atleast_1d(np.asarray(values, dtype=float))


def prior_precision(layout: LatentLayout, theta,
                    fixed_precision: Optional[float] = None) -> Tuple[sp.csr_matrix, float]:
    """
    Block-diagonal prior precision and its log pseudo-determinant.

    Fixed effects get an independent Gaussian prior with precision
    ``fixed_precision``; random block b gets exp(theta_b) * R_b. The
    log-determinant counts only non-null directions of each block:
    rank_b * theta_b + log pdet(R_b).

    Returns:
        (Q, log pseudo-determinant of Q)
    """
    values = theta_values(theta)
    randoms = layout.random_blocks
    if len(values) != len(randoms):
        raise ValueError(f"expected {len(randoms)} hyperparameters, got {len(values)}")
    fixed_precision = MODEL_CONFIG["fixed_effect_precision"] if fixed_precision is None else fixed_precision

    parts = []
    log_det = 0.0
    draws = iter(values)
    for block in layout.blocks:
        if block.kind.is_random:
            log_tau = next(draws)
            parts.append(np.exp(log_tau) * block.structure.matrix)
            log_det += block.structure.rank * log_tau + block.structure.log_pdet
        else:
            parts.append(sp.identity(block.length, format="csr") * fixed_precision)
            log_det += block.length * np.log(fixed_precision)
    return sp.block_diag(parts, format="csr"), float(log_det)


def priors_for(spec: ModelSpec) -> List[PCPrior]:
    """One PC prior per random block, in theta order"""
    return [PCPrior(spec.median_for(name)) for name in spec.random_effect_names()]


def pc_prior_logdensity(theta, priors: Sequence[PCPrior]) -> float:
    """
    Log density of theta (log precision) under exponential priors on sigma.

    sigma = exp(-theta / 2) ~ Exponential(rate); the Jacobian |d sigma / d theta|
    = sigma / 2 moves the density onto the theta scale.
    """
    values = theta_values(theta)
    if len(values) != len(priors):
        raise ValueError(f"expected {len(priors)} hyperparameters, got {len(values)}")
    total = 0.0
    for value, prior in zip(values, priors):
        rate = prior.rate
        total += np.log(rate) - rate * np.exp(-0.5 * value) + _LOG_HALF - 0.5 * value
    return float(total)


def sigma_quantile(prior: PCPrior, probability: float) -> float:
    """Quantile of sigma under the prior"""
    return float(-np.log1p(-probability) / prior.rate)
