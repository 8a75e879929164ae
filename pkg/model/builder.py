"""
Latent model: layout, fitted rows, counts and priors bundled for inference
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from ingest.models import AdjacencyGraph, PixelTable

from .layout import assemble_layout
from .models import Hyperparameters, LatentLayout, ModelSpec, PCPrior
from .precision import pc_prior_logdensity, prior_precision, priors_for


@dataclass(frozen=True)
class LatentModel:
    """
    Everything the inference engine needs about one model.

    ``design`` holds the rows of the layout's design matrix used for fitting;
    the layout itself still covers every pixel so held-out linear predictors
    can be formed from the same latent vector.
    """
    spec: ModelSpec
    layout: LatentLayout
    rows: np.ndarray
    counts: np.ndarray
    priors: Tuple[PCPrior, ...]
    log_prior_offset: float = 0.0
    design: sp.csr_matrix = field(init=False, repr=False)
    constraints: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "design", self.layout.design[self.rows].tocsr())
        object.__setattr__(self, "constraints", self.layout.constraint_matrix())

    @property
    def theta_names(self) -> Tuple[str, ...]:
        return tuple(b.name for b in self.layout.random_blocks)

    @property
    def n_hyper(self) -> int:
        return len(self.priors)

    @property
    def dimension(self) -> int:
        return self.layout.dimension

    @property
    def n_constraints(self) -> int:
        return int(self.constraints.shape[0])

    def hyperparameters(self, values: Sequence[float]) -> Hyperparameters:
        return Hyperparameters(self.theta_names, np.asarray(values, dtype=float))

    def prior_precision(self, theta) -> Tuple[sp.csr_matrix, float]:
        return prior_precision(self.layout, theta)

    def log_hyperprior(self, theta) -> float:
        return pc_prior_logdensity(theta, self.priors) + self.log_prior_offset

    def subset(self, rows: np.ndarray) -> "LatentModel":
        """Same layout, fitted on a subset of the current rows"""
        rows = np.asarray(rows)
        return replace(self, rows=self.rows[rows], counts=np.asarray(self.counts)[rows])

    def with_counts(self, counts: np.ndarray) -> "LatentModel":
        return replace(self, counts=np.asarray(counts))

    def with_prior_offset(self, offset: float) -> "LatentModel":
        return replace(self, log_prior_offset=offset)


def build_model(spec: ModelSpec, table: PixelTable, fit_rows: Optional[np.ndarray] = None,
                graph: Optional[AdjacencyGraph] = None) -> LatentModel:
    """
    Assemble the layout over all pixels and keep ``fit_rows`` for fitting.

    Covariate transforms are fitted on ``fit_rows`` only.
    """
    layout = assemble_layout(spec, table, fit_rows=fit_rows, graph=graph)
    rows = np.arange(table.n_pixels) if fit_rows is None else np.asarray(fit_rows)
    return LatentModel(spec=spec, layout=layout, rows=rows, counts=table.count[rows],
                       priors=tuple(priors_for(spec)))


def model_from_layout(spec: ModelSpec, layout: LatentLayout, counts: np.ndarray,
                      rows: Optional[np.ndarray] = None) -> LatentModel:
    """Wrap an existing layout; ``counts`` covers every layout row"""
    rows = np.arange(layout.n_rows) if rows is None else np.asarray(rows)
    return LatentModel(spec=spec, layout=layout, rows=rows, counts=np.asarray(counts)[rows],
                       priors=tuple(priors_for(spec)))
