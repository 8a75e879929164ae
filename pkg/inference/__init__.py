"""
Simplified nested Laplace inference for latent Gaussian models
"""

from .engine import fit_model
from .exceptions import ConvergenceError, DegenerateGridError, ObjectiveError
from .integration import integrate_theta, latent_marginals, mixture_quantiles
from .io import write_posterior
from .laplace import gaussian_approximation, log_posterior_theta
from .models import GaussianApprox, PosteriorResult, ThetaGrid
from .optimizer import ThetaOptimum, optimize_theta
from .summaries import Significance, lse_significance, significance_labels

__all__ = [
    "ConvergenceError",
    "DegenerateGridError",
    "fit_model",
    "gaussian_approximation",
    "GaussianApprox",
    "integrate_theta",
    "latent_marginals",
    "log_posterior_theta",
    "lse_significance",
    "mixture_quantiles",
    "ObjectiveError",
    "optimize_theta",
    "PosteriorResult",
    "Significance",
    "significance_labels",
    "ThetaGrid",
    "ThetaOptimum",
    "write_posterior",
]
