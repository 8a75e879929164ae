"""
Exceptions raised by the inference engine
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

from core.exceptions import NumericalError


class ConvergenceError(NumericalError):
    """Newton iterations for the latent mode did not converge"""

    def __init__(self, message: str, gradient_norm: float, details: Optional[Dict[str, Any]] = None):
        merged = {"gradient_norm": gradient_norm}
        merged.update(details or {})
        super().__init__(f"{message} (last gradient norm {gradient_norm:.3e})", merged)
        self.gradient_norm = gradient_norm


class ObjectiveError(NumericalError):
    """The hyperparameter objective became non-finite during the search"""

    def __init__(self, message: str, trace: Sequence[Tuple[Sequence[float], float]]):
        entries: List[Dict[str, Any]] = [{"theta": [float(t) for t in theta], "log_posterior": float(value)}
                                         for theta, value in trace]
        super().__init__(message, {"trace": entries[-20:], "evaluations": len(entries)})
        self.trace = entries


class DegenerateGridError(NumericalError):
    """Every grid point fell outside the integration cutoff"""
    pass
