"""
Data models for pixel tables, mapping partitions and adjacency graphs
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp


class CovariateRole(Enum):
    """How a covariate column enters the model"""
    LINEAR = "linear"
    BINNED_RW1 = "binned-rw1"
    CATEGORICAL_IID = "categorical-iid"

    @classmethod
    def parse(cls, value: str) -> "CovariateRole":
        for role in cls:
            if role.value == value.strip().lower():
                return role
        raise ValueError(f"unknown covariate role '{value}'")


@dataclass(frozen=True)
class CovariateSpec:
    """Declared covariate column"""
    name: str
    role: CovariateRole = CovariateRole.LINEAR
    bins: int = 20
    standardize: bool = True

    @property
    def is_numeric(self) -> bool:
        return self.role is not CovariateRole.CATEGORICAL_IID


@dataclass(frozen=True)
class Standardization:
    """Recorded centering and scaling of one covariate"""
    mean: float
    sd: float

    def apply(self, values: np.ndarray) -> np.ndarray:
        return (np.asarray(values, dtype=float) - self.mean) / self.sd

    def invert(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(values, dtype=float) * self.sd + self.mean


@dataclass(frozen=True)
class BinEdges:
    """Equidistant class edges; classes are numbered 1..k"""
    edges: np.ndarray

    @property
    def k(self) -> int:
        return len(self.edges) - 1


@dataclass(frozen=True)
class PixelTable:
    """
    Per-pixel response counts, covariates and unit memberships.

    Arrays are never mutated in place; transformations return new tables.
    """
    pixel_id: np.ndarray
    x: np.ndarray
    y: np.ndarray
    count: np.ndarray
    continuous: Dict[str, np.ndarray] = field(default_factory=dict)
    categorical: Dict[str, np.ndarray] = field(default_factory=dict)
    partitions: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def n_pixels(self) -> int:
        return int(self.pixel_id.shape[0])

    @property
    def total_count(self) -> int:
        return int(self.count.sum())

    def column(self, name: str) -> np.ndarray:
        """Any named column: continuous, categorical, partition or geometry"""
        for source in (self.continuous, self.categorical, self.partitions):
            if name in source:
                return source[name]
        builtin = {"pixel_id": self.pixel_id, "x": self.x, "y": self.y, "count": self.count}
        if name in builtin:
            return builtin[name]
        raise KeyError(name)

    def has_column(self, name: str) -> bool:
        try:
            self.column(name)
        except KeyError:
            return False
        return True

    def partition(self, name: str) -> "MappingPartition":
        """Build the mapping partition for a membership column"""
        if name == "pixel":
            return MappingPartition.from_assignment("pixel", self.pixel_id, self.pixel_id)
        if name not in self.partitions:
            raise KeyError(name)
        return MappingPartition.from_assignment(name, self.pixel_id, self.partitions[name])

    def subset(self, rows: np.ndarray) -> "PixelTable":
        """Rows selected by index array (order kept as given)"""
        rows = np.asarray(rows)
        return PixelTable(
            pixel_id=self.pixel_id[rows],
            x=self.x[rows],
            y=self.y[rows],
            count=self.count[rows],
            continuous={k: v[rows] for k, v in self.continuous.items()},
            categorical={k: v[rows] for k, v in self.categorical.items()},
            partitions={k: v[rows] for k, v in self.partitions.items()},
        )

    def with_continuous(self, updates: Dict[str, np.ndarray]) -> "PixelTable":
        merged = dict(self.continuous)
        merged.update({k: np.asarray(v, dtype=float) for k, v in updates.items()})
        return replace(self, continuous=merged)

    def with_counts(self, count: np.ndarray) -> "PixelTable":
        return replace(self, count=np.asarray(count, dtype=np.int64))


@dataclass(frozen=True)
class MappingPartition:
    """Assignment of every pixel to exactly one unit"""
    name: str
    unit_ids: np.ndarray          # sorted unique unit identifiers
    index: np.ndarray             # per pixel row, position in unit_ids
    pixel_id: np.ndarray

    @classmethod
    def from_assignment(cls, name: str, pixel_id: np.ndarray, assignment: np.ndarray) -> "MappingPartition":
        unit_ids, index = np.unique(np.asarray(assignment), return_inverse=True)
        return cls(name=name, unit_ids=unit_ids, index=index.reshape(-1), pixel_id=np.asarray(pixel_id))

    @property
    def n_units(self) -> int:
        return int(self.unit_ids.shape[0])

    def pixel_counts(self) -> np.ndarray:
        """Number of pixels in each unit"""
        return np.bincount(self.index, minlength=self.n_units)

    def assignment(self) -> Dict[int, int]:
        """pixel_id -> unit_id"""
        return {int(p): self.unit_ids[i].item() for p, i in zip(self.pixel_id, self.index)}

    def members(self, unit_position: int) -> np.ndarray:
        return np.flatnonzero(self.index == unit_position)


@dataclass(frozen=True)
class AdjacencyGraph:
    """Undirected neighbour graph over the units of one partition"""
    unit_ids: np.ndarray
    edges: np.ndarray             # (m, 2) positions into unit_ids, i < j, sorted, unique
    component: np.ndarray         # component label per unit
    n_components: int

    @property
    def n_units(self) -> int:
        return int(self.unit_ids.shape[0])

    @property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_units, dtype=np.int64)
        if len(self.edges):
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    @property
    def isolated(self) -> np.ndarray:
        """Positions of units with no neighbours"""
        return np.flatnonzero(self.degrees == 0)

    @property
    def is_connected(self) -> bool:
        return self.n_components == 1

    def adjacency_matrix(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency matrix"""
        n = self.n_units
        if not len(self.edges):
            return sp.csr_matrix((n, n))
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        data = np.ones(rows.shape[0])
        return sp.csr_matrix((data, (rows, cols)), shape=(n, n))

    def neighbours(self, position: int) -> np.ndarray:
        mask = (self.edges[:, 0] == position) | (self.edges[:, 1] == position)
        pairs = self.edges[mask]
        return np.sort(np.where(pairs[:, 0] == position, pairs[:, 1], pairs[:, 0]))

    def edge_id_pairs(self) -> List[Tuple[int, int]]:
        """Edges expressed in unit ids rather than positions"""
        return [(self.unit_ids[i].item(), self.unit_ids[j].item()) for i, j in self.edges]

    def component_members(self) -> List[np.ndarray]:
        return [np.flatnonzero(self.component == c) for c in range(self.n_components)]


@dataclass(frozen=True)
class CorrelationReport:
    """Pairwise Pearson correlation over continuous covariates"""
    names: List[str]
    matrix: np.ndarray
    threshold: float
    flagged: List[Tuple[str, str, float]]

    def lookup(self, a: str, b: str) -> Optional[float]:
        if a not in self.names or b not in self.names:
            return None
        return float(self.matrix[self.names.index(a), self.names.index(b)])
