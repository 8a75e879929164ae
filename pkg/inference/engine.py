"""
End-to-end fitting: optimize, integrate, summarize
"""

import time
from typing import Optional

from core.logging_config import get_logger, log_performance
from model.builder import LatentModel

from .integration import integrate_theta, latent_marginals
from .models import PosteriorResult
from .optimizer import optimize_theta

logger = get_logger(__name__)


def fit_model(model: LatentModel, init=None, step: Optional[float] = None,
              radius: Optional[int] = None, workers: Optional[int] = None) -> PosteriorResult:
    """
    Fit a latent model with the simplified nested Laplace scheme.

    Args:
        model: Latent model with counts
        init: Starting log-precisions for the hyperparameter search
        step: Grid spacing in theta
        radius: Grid half-width in steps; 0 gives the empirical Bayes plug-in
        workers: Thread cap for probe and grid evaluations

    Returns:
        PosteriorResult with latent and linear predictor summaries
    """
    start = time.perf_counter()
    optimum = optimize_theta(model, init=init, workers=workers)
    grid = integrate_theta(model, optimum.theta, step=step, radius=radius, workers=workers,
                           center=optimum.approximation)
    result = latent_marginals(grid, theta_hat=optimum.theta, theta_log_posterior=optimum.log_posterior)

    log_performance(logger, "fit_model", (time.perf_counter() - start) * 1000.0,
                    dimension=model.dimension, rows=int(len(model.rows)),
                    theta=optimum.theta.as_dict(), grid_points=grid.size)
    return result
