"""
Data models for GMRF prior structures
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple

import numpy as np
import scipy.sparse as sp


class StructureKind(Enum):
    """Prior families used for latent blocks"""
    BESAG = "besag"
    RW1 = "rw1"
    IID = "iid"


@dataclass(frozen=True)
class LinearConstraint:
    """Hard constraint c'x = target"""
    coefficients: np.ndarray
    target: float = 0.0

    def __post_init__(self):
        if not np.any(self.coefficients):
            raise ValueError("constraint coefficients must not all be zero")

    def residual(self, x: np.ndarray) -> float:
        return float(self.coefficients @ x - self.target)


@dataclass(frozen=True)
class StructureMatrix:
    """
    Unit-precision structure R of one latent block; the prior precision is tau * R.

    ``root`` is a sparse matrix B with R = B'B, used for exact sampling.
    ``component`` labels the constrained (intrinsic) components; nodes that
    carry a proper independent effect have label -1. ``log_pdet`` is the log
    of the product of non-zero eigenvalues of R.
    """
    kind: StructureKind
    matrix: sp.csr_matrix
    root: sp.csr_matrix
    constraints: Tuple[LinearConstraint, ...]
    rank_deficiency: int
    component: np.ndarray
    log_pdet: float
    scaling_factors: Tuple[float, ...] = ()
    scaled: bool = False

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_intrinsic(self) -> bool:
        return self.rank_deficiency > 0

    @property
    def rank(self) -> int:
        return self.n - self.rank_deficiency

    @property
    def scaling_factor(self) -> float:
        """The factor of a single component; geometric mean when there are several"""
        if not self.scaling_factors:
            return 1.0
        if len(self.scaling_factors) == 1:
            return self.scaling_factors[0]
        return float(np.exp(np.mean(np.log(self.scaling_factors))))

    @property
    def constraint_matrix(self) -> np.ndarray:
        """Constraints stacked as a (k, n) array"""
        if not self.constraints:
            return np.zeros((0, self.n))
        return np.vstack([c.coefficients for c in self.constraints])

    def component_nodes(self) -> Tuple[np.ndarray, ...]:
        labels = self.component[self.component >= 0]
        return tuple(np.flatnonzero(self.component == c) for c in np.unique(labels))

    def quadratic_form(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ (self.matrix @ x))

    def precision(self, tau: float) -> sp.csr_matrix:
        return (tau * self.matrix).tocsr()

    def scaled_by(self, factor: float) -> "StructureMatrix":
        """The same structure multiplied by a positive constant"""
        if factor <= 0:
            raise ValueError("factor must be positive")
        return replace(
            self,
            matrix=(factor * self.matrix).tocsr(),
            root=(np.sqrt(factor) * self.root).tocsr(),
            log_pdet=self.log_pdet + self.rank * np.log(factor),
        )
