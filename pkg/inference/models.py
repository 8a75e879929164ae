"""
Data models for Gaussian approximations and posterior summaries
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from gmrf.factorization import ConstrainedFactor
from model.builder import LatentModel
from model.models import Hyperparameters


@dataclass(eq=False)
class GaussianApprox:
    """
    Gaussian approximation of the latent posterior at one theta.

    Holds the constrained mode, the posterior precision
    Q* = Q(theta) + A' diag(exp(A a)) A and its factorization. The
    log-density pieces are stored without the (p - k)/2 log(2 pi) terms,
    which cancel in the Laplace ratio.
    """
    model: LatentModel
    theta: Hyperparameters
    mode: np.ndarray
    precision: sp.csr_matrix = field(repr=False)
    factor: ConstrainedFactor = field(repr=False)
    log_likelihood: float
    log_latent_prior: float
    log_gaussian: float
    log_hyperprior: float
    iterations: int
    gradient_norm: float

    @property
    def log_posterior(self) -> float:
        """Unnormalized log pi(theta | y) from the Laplace ratio"""
        return self.log_likelihood + self.log_latent_prior - self.log_gaussian + self.log_hyperprior

    @property
    def log_marginal_likelihood(self) -> float:
        """Laplace estimate of log pi(y | theta)"""
        return self.log_likelihood + self.log_latent_prior - self.log_gaussian

    @cached_property
    def marginal_variances(self) -> np.ndarray:
        return np.maximum(self.factor.marginal_variances(), 0.0)

    @property
    def marginal_sd(self) -> np.ndarray:
        return np.sqrt(self.marginal_variances)

    def eta_moments(self, design: Optional[sp.spmatrix] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Mean and variance of eta = A x; defaults to every layout row"""
        design = self.model.layout.design if design is None else sp.csr_matrix(design)
        return design @ self.mode, np.maximum(self.factor.quadratic_diag(design), 0.0)

    def covariance_block(self, indices: Sequence[int]) -> np.ndarray:
        return self.factor.covariance_block(indices)


@dataclass(frozen=True)
class ThetaGrid:
    """Integration points around the hyperparameter mode"""
    names: Tuple[str, ...]
    points: np.ndarray                 # (g, d)
    log_posterior: np.ndarray          # (g,)
    weights: np.ndarray                # (g,), sum to 1
    approximations: Tuple[GaussianApprox, ...] = field(default=(), repr=False)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def mean(self) -> np.ndarray:
        return self.weights @ self.points if self.points.shape[1] else np.zeros(0)

    def sd(self) -> np.ndarray:
        if not self.points.shape[1]:
            return np.zeros(0)
        centred = self.points - self.mean()
        return np.sqrt(np.maximum(self.weights @ centred ** 2, 0.0))


@dataclass(frozen=True)
class PosteriorResult:
    """
    Posterior summaries mixed over the theta grid.

    Latent arrays follow the layout order; eta arrays cover every layout
    row (pixel), including rows not used for fitting.
    """
    model: LatentModel
    theta_hat: Hyperparameters
    theta_log_posterior: float
    grid: ThetaGrid
    mean: np.ndarray
    sd: np.ndarray
    q025: np.ndarray
    q975: np.ndarray
    eta_mean: np.ndarray
    eta_sd: np.ndarray

    @property
    def layout(self):
        return self.model.layout

    def block_summary(self, name: str) -> Dict[str, np.ndarray]:
        block = self.layout.block(name)
        return {
            "label": block.labels,
            "mean": self.mean[block.slice],
            "sd": self.sd[block.slice],
            "q025": self.q025[block.slice],
            "q975": self.q975[block.slice],
        }

    def coefficient(self, name: str) -> float:
        block = self.layout.block(name)
        return float(self.mean[block.offset])

    def covariance(self, names: Sequence[str]) -> np.ndarray:
        """
        Mixture covariance of the first coordinate of each named block.

        Each grid point contributes its constrained covariance block plus the
        outer product of its mode; the mixture mean is removed at the end.
        """
        indices = np.array([self.layout.block(n).offset for n in names], dtype=np.int64)
        second = np.zeros((len(indices), len(indices)))
        for weight, approx in zip(self.grid.weights, self.grid.approximations):
            mode = approx.mode[indices]
            second += weight * (approx.covariance_block(indices) + np.outer(mode, mode))
        mean = self.mean[indices]
        return second - np.outer(mean, mean)

    def eta_variance(self) -> np.ndarray:
        return self.eta_sd ** 2

    def coordinate_labels(self) -> List[Tuple[str, str]]:
        return self.layout.coordinate_labels()
