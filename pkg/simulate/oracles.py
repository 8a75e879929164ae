"""
Brute-force references for inference and metrics
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, optimize
from scipy.special import gammaln

from model.builder import LatentModel

MAX_ORACLE_DIMENSION = 3
MAX_AUC_PAIRS = 10_000
QUADRATURE_TOLERANCE = 1e-9
SPREAD = 12.0  # integration half-width in posterior standard deviations


@dataclass(frozen=True)
class OracleResult:
    """Exact posterior summaries from quadrature"""
    mean: np.ndarray
    sd: np.ndarray
    mode: np.ndarray
    log_marginal: Optional[float] = None  # log pi(y | theta) when theta was fixed
    theta_mean: Optional[float] = None


def _log_joint(model: LatentModel, counts: np.ndarray, theta):
    """log pi(y | x) + log pi(x | theta) as a function of x, with its Hessian at a point"""
    A = model.design.toarray()
    Q, log_det = model.prior_precision(theta)
    Q = Q.toarray()
    constant = 0.5 * log_det - float(gammaln(counts + 1.0).sum())

    def value(x: np.ndarray) -> float:
        eta = A @ x
        return float(counts @ eta - np.exp(eta).sum() - 0.5 * x @ Q @ x) + constant

    def gradient(x: np.ndarray) -> np.ndarray:
        return A.T @ (counts - np.exp(A @ x)) - Q @ x

    def hessian(x: np.ndarray) -> np.ndarray:
        return Q + A.T @ (np.exp(A @ x)[:, None] * A)

    return value, gradient, hessian


def _moments_at(model: LatentModel, counts: np.ndarray, theta):
    """(log normaliser, mean, second moment, mode) of the latent posterior at fixed theta"""
    value, gradient, hessian = _log_joint(model, counts, theta)
    p = model.dimension
    found = optimize.minimize(lambda x: -value(x), np.zeros(p), jac=lambda x: -gradient(x),
                              hess=lambda x: hessian(x), method="trust-exact")
    mode = found.x
    peak = value(mode)
    spread = SPREAD * np.sqrt(np.diag(np.linalg.inv(hessian(mode))))
    low, high = mode - spread, mode + spread

    def density(*x):
        return np.exp(value(np.asarray(x)) - peak)

    def integral(weight) -> float:
        if p == 1:
            return integrate.quad(lambda a: weight(a) * density(a), low[0], high[0],
                                  epsabs=QUADRATURE_TOLERANCE, limit=200)[0]
        if p == 2:
            # scipy passes the innermost variable first
            return integrate.dblquad(lambda b, a: weight(a, b) * density(a, b),
                                     low[0], high[0], low[1], high[1], epsabs=QUADRATURE_TOLERANCE)[0]
        return integrate.tplquad(lambda c, b, a: weight(a, b, c) * density(a, b, c),
                                 low[0], high[0], low[1], high[1], low[2], high[2],
                                 epsabs=QUADRATURE_TOLERANCE)[0]

    z = integral(lambda *x: 1.0)
    mean = np.array([integral(lambda *x, i=i: x[i]) / z for i in range(p)])
    second = np.array([integral(lambda *x, i=i: x[i] ** 2) / z for i in range(p)])
    log_normaliser = peak + np.log(z) - 0.5 * p * np.log(2.0 * np.pi)
    return log_normaliser, mean, second, mode


def tiny_posterior_oracle(model: LatentModel, counts: Optional[np.ndarray] = None,
                          theta=None) -> OracleResult:
    """
    Exact posterior summaries of a small unconstrained latent model.

    Adaptive quadrature over the latent space at fixed theta; when the model
    has one hyperparameter and ``theta`` is omitted the summaries are
    additionally integrated over theta against pi(y | theta) pi(theta).

    Raises:
        ValueError: More than three latent coordinates, more than one
            hyperparameter to integrate, or linear constraints present
    """
    if model.dimension > MAX_ORACLE_DIMENSION:
        raise ValueError(f"the oracle handles at most {MAX_ORACLE_DIMENSION} latent coordinates, "
                         f"got {model.dimension}")
    if model.n_constraints:
        raise ValueError("the oracle does not handle linear constraints")
    counts = np.asarray(model.counts if counts is None else counts, dtype=float)

    if theta is not None or model.n_hyper == 0:
        theta = [] if theta is None else theta
        log_marginal, mean, second, mode = _moments_at(model, counts, theta)
        return OracleResult(mean=mean, sd=np.sqrt(np.maximum(second - mean ** 2, 0.0)), mode=mode,
                            log_marginal=float(log_marginal))
    if model.n_hyper > 1:
        raise ValueError("the oracle integrates over at most one hyperparameter")

    def log_post(t: float) -> float:
        return _moments_at(model, counts, [t])[0] + model.log_hyperprior([t])

    best = optimize.minimize_scalar(lambda t: -log_post(t), bounds=(-10.0, 15.0), method="bounded")
    t_hat, peak = float(best.x), -float(best.fun)
    low, high = t_hat - 12.0, t_hat + 12.0

    def weighted(t: float, select) -> float:
        log_normaliser, mean, second, _ = _moments_at(model, counts, [t])
        weight = np.exp(log_normaliser + model.log_hyperprior([t]) - peak)
        return weight * select(t, mean, second)

    def outer(select) -> float:
        return integrate.quad(lambda t: weighted(t, select), low, high, points=[t_hat],
                              epsabs=QUADRATURE_TOLERANCE, limit=100)[0]

    z = outer(lambda t, m, s: 1.0)
    p = model.dimension
    mean = np.array([outer(lambda t, m, s, i=i: m[i]) for i in range(p)]) / z
    second = np.array([outer(lambda t, m, s, i=i: s[i]) for i in range(p)]) / z
    theta_mean = outer(lambda t, m, s: t) / z
    _, _, _, mode = _moments_at(model, counts, [t_hat])
    return OracleResult(mean=mean, sd=np.sqrt(np.maximum(second - mean ** 2, 0.0)), mode=mode,
                        theta_mean=float(theta_mean))


def brute_force_auc(scores, labels) -> float:
    """Mann-Whitney AUC by looping over every positive-negative pair, ties count 1/2"""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    positives = scores[labels]
    negatives = scores[~labels]
    if not len(positives) or not len(negatives):
        raise ValueError("both classes must be present")
    if len(positives) * len(negatives) > MAX_AUC_PAIRS:
        raise ValueError(f"more than {MAX_AUC_PAIRS} pairs")
    wins = 0.0
    for p in positives:
        for n in negatives:
            if p > n:
                wins += 1.0
            elif p == n:
                wins += 0.5
    return wins / (len(positives) * len(negatives))
