"""
Gaussian approximation of the latent field and the Laplace hyperparameter posterior
"""

from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from config import INFERENCE_CONFIG
from core.logging_config import get_logger
from gmrf.factorization import ConstrainedFactor, PrecisionFactor
from model.builder import LatentModel
from model.models import Hyperparameters
from model.precision import theta_values

from .exceptions import ConvergenceError
from .models import GaussianApprox

logger = get_logger(__name__)

# Accept a stalled line search once the projected gradient is this small
STALL_TOLERANCE = 1e-5


def _objective(design: sp.csr_matrix, counts: np.ndarray, Q: sp.csr_matrix,
               x: np.ndarray) -> Tuple[float, np.ndarray]:
    """y'eta - sum exp(eta) - x'Qx / 2 and exp(eta)"""
    eta = design @ x
    with np.errstate(over="ignore", invalid="ignore"):
        mu = np.exp(eta)
        value = float(counts @ eta - mu.sum() - 0.5 * x @ (Q @ x))
    if not np.isfinite(value):
        value = -np.inf
    return value, mu


class _Projector:
    """Euclidean projection onto {x : Cx = 0}"""

    def __init__(self, constraints: np.ndarray):
        self.C = constraints
        self.k = constraints.shape[0]
        self._CCt = constraints @ constraints.T if self.k else None

    def __call__(self, v: np.ndarray) -> np.ndarray:
        if not self.k:
            return v
        return v - self.C.T @ np.linalg.solve(self._CCt, self.C @ v)


def gaussian_approximation(model: LatentModel, theta, counts: Optional[np.ndarray] = None,
                           init: Optional[np.ndarray] = None) -> GaussianApprox:
    """
    Locate the constrained posterior mode of the latent field at theta.

    Newton iterations on the concave objective
    f(x) = sum(y * eta - exp(eta)) - x'Q(theta)x / 2 subject to Cx = 0, with
    each step solved under the constraints and shortened by halving until
    f does not decrease.

    Args:
        model: Latent model
        theta: Log-precisions of the random blocks
        counts: Overrides the model's counts
        init: Starting point (projected onto the constraints); zeros when omitted

    Raises:
        ConvergenceError: Gradient norm still above tolerance after the
            configured iterations, or the line search failed early
        FactorizationError: Posterior precision not positive definite
    """
    tolerance = INFERENCE_CONFIG["newton_tolerance"]
    max_iterations = INFERENCE_CONFIG["newton_max_iterations"]
    max_halvings = INFERENCE_CONFIG["newton_max_halvings"]

    values = theta_values(theta)
    hyper = theta if isinstance(theta, Hyperparameters) else model.hyperparameters(values)
    y = np.asarray(model.counts if counts is None else counts, dtype=float)
    A = model.design
    At = A.T.tocsr()
    Q, log_det_prior = model.prior_precision(values)
    project = _Projector(model.constraints)

    x = np.zeros(model.dimension) if init is None else project(np.asarray(init, dtype=float))
    value, mu = _objective(A, y, Q, x)
    gradient_norm = np.inf

    for iteration in range(max_iterations + 1):
        gradient = At @ (y - mu) - Q @ x
        gradient_norm = float(np.max(np.abs(project(gradient)))) if gradient.size else 0.0
        if gradient_norm < tolerance:
            break
        if iteration == max_iterations:
            raise ConvergenceError("latent mode did not converge", gradient_norm,
                                   {"theta": values.tolist(), "iterations": iteration})

        hessian = (Q + At @ sp.diags(mu) @ A).tocsr()
        step = ConstrainedFactor(PrecisionFactor(hessian, label="posterior precision"),
                                 model.constraints).solve(gradient)

        scale = 1.0
        accepted = False
        for _ in range(max_halvings + 1):
            candidate = x + scale * step
            candidate_value, candidate_mu = _objective(A, y, Q, candidate)
            if candidate_value >= value:
                x, value, mu = candidate, candidate_value, candidate_mu
                accepted = True
                break
            scale *= 0.5

        if not accepted:
            if gradient_norm < STALL_TOLERANCE:
                logger.debug("Line search stalled near the mode", extra={"extra_data": {
                    "gradient_norm": gradient_norm, "iteration": iteration,
                }})
                break
            raise ConvergenceError("line search failed to improve the objective", gradient_norm,
                                   {"theta": values.tolist(), "iterations": iteration})

    hessian = (Q + At @ sp.diags(mu) @ A).tocsr()
    factor = ConstrainedFactor(PrecisionFactor(hessian, label="posterior precision"), model.constraints)
    eta = A @ x

    log_likelihood = float(y @ eta - mu.sum()) - float(gammaln(y + 1.0).sum())
    log_latent_prior = 0.5 * log_det_prior - 0.5 * float(x @ (Q @ x))
    log_gaussian = 0.5 * factor.factor.logdet() + factor.log_constraint_correction()

    approx = GaussianApprox(
        model=model,
        theta=hyper,
        mode=x,
        precision=hessian,
        factor=factor,
        log_likelihood=log_likelihood,
        log_latent_prior=log_latent_prior,
        log_gaussian=log_gaussian,
        log_hyperprior=model.log_hyperprior(values),
        iterations=iteration,
        gradient_norm=gradient_norm,
    )
    logger.debug("Gaussian approximation", extra={"extra_data": {
        "theta": values.round(4).tolist(), "iterations": iteration,
        "gradient_norm": gradient_norm, "log_posterior": approx.log_posterior,
    }})
    return approx


def log_posterior_theta(model: LatentModel, theta, counts: Optional[np.ndarray] = None,
                        init: Optional[np.ndarray] = None) -> float:
    """
    Laplace approximation of log pi(theta | y) up to a constant.

    log pi(y | a, theta) + log pi(a | theta) - log pi_G(a | y, theta) + log pi(theta),
    evaluated at the constrained mode a. Without ``init`` the Newton search
    starts from zero, so repeated calls are bit-identical.
    """
    return gaussian_approximation(model, theta, counts=counts, init=init).log_posterior
