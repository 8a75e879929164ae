"""
Grid integration over hyperparameters and mixture marginals of the latent field
"""

import itertools
from typing import Optional, Sequence

import numpy as np
from scipy.stats import norm

from config import INFERENCE_CONFIG
from core.logging_config import get_logger
from core.parallel import map_ordered
from model.builder import LatentModel
from model.precision import theta_values

from .exceptions import DegenerateGridError
from .laplace import gaussian_approximation
from .models import GaussianApprox, PosteriorResult, ThetaGrid

logger = get_logger(__name__)


def integrate_theta(model: LatentModel, theta_hat, step: Optional[float] = None,
                    radius: Optional[int] = None, workers: Optional[int] = None,
                    center: Optional[GaussianApprox] = None,
                    cutoff: Optional[float] = None) -> ThetaGrid:
    """
    Evaluate the hyperparameter posterior on theta_hat + step * z, |z_d| <= radius.

    Points more than ``cutoff`` log units below the best point are dropped
    and the rest weighted proportionally to exp(log posterior). The
    approximation at each kept point is stored on the grid.

    Raises:
        DegenerateGridError: No point survives the cutoff
    """
    step = INFERENCE_CONFIG["grid_step"] if step is None else step
    radius = INFERENCE_CONFIG["grid_radius"] if radius is None else radius
    cutoff = INFERENCE_CONFIG["grid_cutoff"] if cutoff is None else cutoff
    if step <= 0 or radius < 0:
        raise ValueError("grid step must be positive and radius non-negative")

    theta_hat = theta_values(theta_hat)
    offsets = np.array(list(itertools.product(range(-radius, radius + 1), repeat=len(theta_hat))),
                       dtype=float).reshape(-1, len(theta_hat))
    points = theta_hat + step * offsets
    warm = None if center is None else center.mode

    def evaluate(point: np.ndarray) -> GaussianApprox:
        if center is not None and np.array_equal(point, theta_values(center.theta)):
            return center
        return gaussian_approximation(model, point, init=warm)

    approximations = map_ordered(evaluate, points, workers)
    log_post = np.array([a.log_posterior for a in approximations])

    finite = np.isfinite(log_post)
    if not finite.any():
        raise DegenerateGridError("no finite grid point", {"points": len(points)})
    top = log_post[finite].max()
    keep = finite & (log_post >= top - cutoff)
    if not keep.any():
        raise DegenerateGridError("every grid point was dropped", {"points": len(points)})

    kept_log_post = log_post[keep]
    weights = np.exp(kept_log_post - top)
    weights /= weights.sum()
    logger.debug("Integrated hyperparameter grid", extra={"extra_data": {
        "points": int(len(points)), "kept": int(keep.sum()),
    }})
    return ThetaGrid(
        names=model.theta_names,
        points=points[keep],
        log_posterior=kept_log_post,
        weights=weights,
        approximations=tuple(a for a, k in zip(approximations, keep) if k),
    )


def mixture_quantiles(weights: np.ndarray, means: np.ndarray, sds: np.ndarray,
                      probability: float, tolerance: Optional[float] = None) -> np.ndarray:
    """
    Quantiles of per-coordinate Gaussian mixtures by bisection on the CDF.

    Args:
        weights: (g,) mixture weights
        means: (g, m) component means
        sds: (g, m) component standard deviations
        probability: Target CDF value
        tolerance: Bracket width at which bisection stops
    """
    tolerance = INFERENCE_CONFIG["quantile_tolerance"] if tolerance is None else tolerance
    weights = np.asarray(weights, dtype=float)[:, None]
    means = np.atleast_2d(means)
    sds = np.maximum(np.atleast_2d(sds), np.finfo(float).tiny)

    spread = norm.ppf(1.0 - 1e-12)
    low = (means - spread * sds).min(axis=0)
    high = (means + spread * sds).max(axis=0)
    while np.any(high - low > tolerance):
        middle = 0.5 * (low + high)
        cdf = (weights * norm.cdf((middle - means) / sds)).sum(axis=0)
        below = cdf < probability
        low = np.where(below, middle, low)
        high = np.where(below, high, middle)
    return 0.5 * (low + high)


def latent_marginals(grid: ThetaGrid, approximations: Optional[Sequence[GaussianApprox]] = None,
                     theta_hat=None, theta_log_posterior: Optional[float] = None) -> PosteriorResult:
    """
    Mix the per-point Gaussian approximations into posterior summaries.

    mean = sum_g w_g a_g; variance = sum_g w_g (sd_g^2 + a_g^2) - mean^2;
    the 2.5% and 97.5% quantiles invert the mixture CDF. Linear predictor
    summaries are mixed the same way for every layout row.
    """
    approximations = list(grid.approximations if approximations is None else approximations)
    if not approximations:
        raise DegenerateGridError("the grid holds no approximations")
    weights = grid.weights
    model = approximations[0].model

    modes = np.vstack([a.mode for a in approximations])
    sds = np.vstack([a.marginal_sd for a in approximations])
    mean = weights @ modes
    variance = np.maximum(weights @ (sds ** 2 + modes ** 2) - mean ** 2, 0.0)

    eta_means, eta_vars = zip(*(a.eta_moments() for a in approximations))
    eta_means = np.vstack(eta_means)
    eta_vars = np.vstack(eta_vars)
    eta_mean = weights @ eta_means
    eta_variance = np.maximum(weights @ (eta_vars + eta_means ** 2) - eta_mean ** 2, 0.0)

    if theta_hat is None:
        best = int(np.argmax(grid.log_posterior))
        theta_hat = approximations[best].theta
        theta_log_posterior = float(grid.log_posterior[best])
    elif not hasattr(theta_hat, "names"):
        theta_hat = model.hyperparameters(theta_values(theta_hat))

    return PosteriorResult(
        model=model,
        theta_hat=theta_hat,
        theta_log_posterior=float(theta_log_posterior) if theta_log_posterior is not None else float("nan"),
        grid=grid,
        mean=mean,
        sd=np.sqrt(variance),
        q025=mixture_quantiles(weights, modes, sds, 0.025),
        q975=mixture_quantiles(weights, modes, sds, 0.975),
        eta_mean=eta_mean,
        eta_sd=np.sqrt(eta_variance),
    )
