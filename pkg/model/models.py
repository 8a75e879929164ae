"""
Data models for the latent Gaussian model
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from config import MODEL_CONFIG
from gmrf.models import StructureMatrix
from ingest.models import AdjacencyGraph, BinEdges, Standardization


class EffectKind(Enum):
    """Kinds of latent blocks; the first two are fixed effects"""
    INTERCEPT = "intercept"
    LINEAR = "linear"
    BESAG = "besag"
    RW1 = "rw1"
    IID = "iid"

    @property
    def is_random(self) -> bool:
        return self in (EffectKind.BESAG, EffectKind.RW1, EffectKind.IID)


@dataclass(frozen=True)
class BinnedEffect:
    """Covariate split into equidistant classes with an RW1 prior"""
    covariate: str
    bins: int = 20


@dataclass(frozen=True)
class ModelSpec:
    """
    Declarative description of the linear predictor.

    Attributes:
        intercept: Include beta0
        linear_effects: Covariates entering linearly (one coefficient each)
        besag_partition: Partition carrying the latent spatial effect, if any
        besag_edges: Optional edge-list file replacing pixel contiguity
        rw1_effects: Binned covariates with random-walk class effects
        iid_effects: Categorical covariates with exchangeable level effects
        pc_prior_median: Shared median of sigma under the PC prior
        pc_prior_medians: Per-block overrides of the median
        standardize: Standardize linear covariates before fitting
        scale: Apply generalized-variance scaling to intrinsic structures
    """
    intercept: bool = True
    linear_effects: Tuple[str, ...] = ()
    besag_partition: Optional[str] = None
    besag_edges: Optional[str] = None
    rw1_effects: Tuple[BinnedEffect, ...] = ()
    iid_effects: Tuple[str, ...] = ()
    pc_prior_median: float = MODEL_CONFIG["pc_prior_median"]
    pc_prior_medians: Dict[str, float] = field(default_factory=dict)
    standardize: bool = True
    scale: bool = True

    def __post_init__(self):
        names = self.effect_names()
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate effect names: {', '.join(duplicates)}")
        if self.pc_prior_median <= 0 or any(m <= 0 for m in self.pc_prior_medians.values()):
            raise ValueError("PC prior medians must be positive")
        if any(e.bins < 2 for e in self.rw1_effects):
            raise ValueError("binned effects need at least 2 classes")

    def effect_names(self) -> List[str]:
        names = ["intercept"] if self.intercept else []
        names += list(self.linear_effects)
        if self.besag_partition:
            names.append(self.besag_partition)
        names += [e.covariate for e in self.rw1_effects]
        names += list(self.iid_effects)
        return names

    def random_effect_names(self) -> List[str]:
        """Blocks carrying a hyperparameter, in theta order"""
        names = [self.besag_partition] if self.besag_partition else []
        names += [e.covariate for e in self.rw1_effects]
        return names + list(self.iid_effects)

    def referenced_columns(self) -> List[str]:
        return list(self.linear_effects) + [e.covariate for e in self.rw1_effects] + list(self.iid_effects)

    def median_for(self, block: str) -> float:
        return self.pc_prior_medians.get(block, self.pc_prior_median)

    def without(self, *names: str) -> "ModelSpec":
        """Copy of the spec with the named effects removed"""
        drop = set(names)
        return ModelSpec(
            intercept=self.intercept and "intercept" not in drop,
            linear_effects=tuple(n for n in self.linear_effects if n not in drop),
            besag_partition=None if self.besag_partition in drop else self.besag_partition,
            besag_edges=None if self.besag_partition in drop else self.besag_edges,
            rw1_effects=tuple(e for e in self.rw1_effects if e.covariate not in drop),
            iid_effects=tuple(n for n in self.iid_effects if n not in drop),
            pc_prior_median=self.pc_prior_median,
            pc_prior_medians={k: v for k, v in self.pc_prior_medians.items() if k not in drop},
            standardize=self.standardize,
            scale=self.scale,
        )


@dataclass(frozen=True)
class LatentBlock:
    """One contiguous block of the latent vector"""
    name: str
    kind: EffectKind
    offset: int
    length: int
    labels: np.ndarray                       # unit ids, class numbers or level labels
    structure: Optional[StructureMatrix] = None
    graph: Optional[AdjacencyGraph] = None
    bin_edges: Optional[BinEdges] = None

    @property
    def stop(self) -> int:
        return self.offset + self.length

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.stop)

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.stop)


@dataclass(frozen=True)
class LatentLayout:
    """
    Ordered latent blocks and the pixel design matrix A with eta = A x.

    Blocks are laid out fixed effects first (intercept, linear covariates),
    then random effects in hyperparameter order.
    """
    blocks: Tuple[LatentBlock, ...]
    design: sp.csr_matrix
    standardization: Dict[str, Standardization] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return int(self.design.shape[1])

    @property
    def n_rows(self) -> int:
        return int(self.design.shape[0])

    @property
    def random_blocks(self) -> Tuple[LatentBlock, ...]:
        return tuple(b for b in self.blocks if b.kind.is_random)

    @property
    def fixed_blocks(self) -> Tuple[LatentBlock, ...]:
        return tuple(b for b in self.blocks if not b.kind.is_random)

    def block(self, name: str) -> LatentBlock:
        for candidate in self.blocks:
            if candidate.name == name:
                return candidate
        raise KeyError(name)

    def has_block(self, name: str) -> bool:
        return any(b.name == name for b in self.blocks)

    def besag_block(self) -> Optional[LatentBlock]:
        for candidate in self.blocks:
            if candidate.kind is EffectKind.BESAG:
                return candidate
        return None

    def eta(self, latent: np.ndarray) -> np.ndarray:
        return self.design @ np.asarray(latent, dtype=float)

    def constraint_matrix(self) -> np.ndarray:
        """All block constraints embedded in the full latent dimension, shape (k, p)"""
        rows = []
        for b in self.random_blocks:
            local = b.structure.constraint_matrix
            if local.shape[0]:
                padded = np.zeros((local.shape[0], self.dimension))
                padded[:, b.slice] = local
                rows.append(padded)
        return np.vstack(rows) if rows else np.zeros((0, self.dimension))

    def coordinate_labels(self) -> List[Tuple[str, str]]:
        """(block, label) for every latent coordinate"""
        out = []
        for b in self.blocks:
            out.extend((b.name, str(label.item() if hasattr(label, "item") else label)) for label in b.labels)
        return out


@dataclass(frozen=True)
class Hyperparameters:
    """Log-precisions of the random-effect blocks"""
    names: Tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError("hyperparameter names and values differ in length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("hyperparameters must be finite")

    @classmethod
    def constant(cls, names: Sequence[str], value: float) -> "Hyperparameters":
        return cls(tuple(names), np.full(len(names), float(value)))

    @property
    def precisions(self) -> np.ndarray:
        return np.exp(self.values)

    @property
    def sigmas(self) -> np.ndarray:
        return np.exp(-0.5 * self.values)

    def as_dict(self) -> Dict[str, float]:
        return {n: float(v) for n, v in zip(self.names, self.values)}


@dataclass(frozen=True)
class PCPrior:
    """Exponential prior on sigma with the given median"""
    median: float

    def __post_init__(self):
        if not self.median > 0:
            raise ValueError(f"PC prior median must be positive, got {self.median}")

    @property
    def rate(self) -> float:
        return float(np.log(2.0) / self.median)
