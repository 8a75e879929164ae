"""
Derivative-free maximization of the hyperparameter posterior
"""

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config import INFERENCE_CONFIG
from core.logging_config import get_logger, log_performance
from core.parallel import map_ordered
from model.builder import LatentModel
from model.models import Hyperparameters
from model.precision import theta_values

from .exceptions import ObjectiveError
from .laplace import gaussian_approximation
from .models import GaussianApprox

logger = get_logger(__name__)


@dataclass
class ThetaOptimum:
    """Result of the pattern search"""
    theta: Hyperparameters
    log_posterior: float
    approximation: GaussianApprox
    evaluations: int
    trace: List[Tuple[Tuple[float, ...], float]] = field(default_factory=list, repr=False)


def optimize_theta(model: LatentModel, init=None, workers: Optional[int] = None,
                   initial_step: Optional[float] = None, min_step: Optional[float] = None,
                   probe: Optional[float] = None) -> ThetaOptimum:
    """
    Pattern search for the mode of the Laplace hyperparameter posterior.

    Every coordinate is probed at +/- step around the current point; the
    best improving probe is taken, otherwise the step is halved. Below the
    minimum step, a final check at +/- ``probe`` per coordinate either
    certifies the point as a local maximum or restarts the search from the
    better probe. Probe evaluations warm-start from the current mode and
    may run in parallel; decisions are sequential, so the path does not
    depend on the worker count.

    Raises:
        ObjectiveError: The objective is non-finite at the start or at any
            probe, with the evaluation trace attached
    """
    initial_step = INFERENCE_CONFIG["search_initial_step"] if initial_step is None else initial_step
    min_step = INFERENCE_CONFIG["search_min_step"] if min_step is None else min_step
    probe = INFERENCE_CONFIG["search_probe"] if probe is None else probe

    start = time.perf_counter()
    if init is None:
        current = np.full(model.n_hyper, INFERENCE_CONFIG["theta_init"])
    else:
        current = theta_values(init).copy()
    trace: List[Tuple[Tuple[float, ...], float]] = []

    def evaluate(point: np.ndarray, warm: Optional[np.ndarray]) -> GaussianApprox:
        return gaussian_approximation(model, point, init=warm)

    best = evaluate(current, None)
    trace.append((tuple(current), best.log_posterior))
    if not np.isfinite(best.log_posterior):
        raise ObjectiveError("hyperparameter objective is not finite at the initial value", trace)

    if model.n_hyper == 0:
        return ThetaOptimum(model.hyperparameters(current), best.log_posterior, best, 1, trace)

    def sweep(step: float) -> Tuple[Optional[np.ndarray], Optional[GaussianApprox]]:
        points = []
        for d in range(model.n_hyper):
            for sign in (1.0, -1.0):
                point = current.copy()
                point[d] += sign * step
                points.append(point)
        approximations = map_ordered(lambda p: evaluate(p, best.mode), points, workers)
        winner, winner_approx = None, None
        for point, approx in zip(points, approximations):
            trace.append((tuple(point), approx.log_posterior))
            if not np.isfinite(approx.log_posterior):
                raise ObjectiveError("hyperparameter objective became non-finite", trace)
            reference = best.log_posterior if winner_approx is None else winner_approx.log_posterior
            if approx.log_posterior > reference:
                winner, winner_approx = point, approx
        return winner, winner_approx

    step = initial_step
    while True:
        while step >= min_step:
            point, approx = sweep(step)
            if point is None:
                step *= 0.5
            else:
                current, best = point, approx
                logger.debug("Hyperparameter step", extra={"extra_data": {
                    "theta": current.round(4).tolist(), "log_posterior": best.log_posterior, "step": step,
                }})
        point, approx = sweep(probe)
        if point is None:
            break
        current, best = point, approx
        step = probe

    log_performance(logger, "optimize_theta", (time.perf_counter() - start) * 1000.0,
                    evaluations=len(trace), theta=current.round(4).tolist())
    return ThetaOptimum(model.hyperparameters(current), best.log_posterior, best, len(trace), trace)
