"""
Structure matrices for the Besag, first-order random walk and iid priors
"""

from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
import scipy.sparse as sp

from config import GMRF_CONFIG
from core.artifacts import Provenance, write_csv_atomic
from core.logging_config import get_logger
from ingest.models import AdjacencyGraph

from .exceptions import StructureError
from .factorization import PrecisionFactor
from .models import LinearConstraint, StructureKind, StructureMatrix

logger = get_logger(__name__)


def _incidence(n: int, edges: np.ndarray) -> sp.csr_matrix:
    """Edge-node incidence with +1 at the lower and -1 at the upper endpoint"""
    m = len(edges)
    if not m:
        return sp.csr_matrix((0, n))
    rows = np.repeat(np.arange(m), 2)
    cols = edges.reshape(-1)
    data = np.tile([1.0, -1.0], m)
    return sp.csr_matrix((data, (rows, cols)), shape=(m, n))


def component_log_pdet(matrix: sp.spmatrix, nodes: np.ndarray) -> float:
    """
    Log pseudo-determinant of one connected Laplacian block.

    By the matrix-tree theorem the product of the non-zero eigenvalues equals
    n_c times the determinant of the block with one node grounded.
    """
    nodes = np.asarray(nodes)
    if len(nodes) < 2:
        return 0.0
    block = sp.csr_matrix(matrix)[nodes][:, nodes]
    grounded = block[1:, 1:]
    factor = PrecisionFactor(grounded, dense_limit=GMRF_CONFIG["dense_scaling_limit"],
                             label="grounded laplacian")
    return float(np.log(len(nodes)) + factor.logdet())


def _laplacian_structure(kind: StructureKind, n: int, edges: np.ndarray,
                         component: np.ndarray) -> StructureMatrix:
    """
    Assemble R = B'B from an edge list.

    Nodes with component label -1 have no edges and get a unit diagonal
    entry (a proper iid effect) with a matching identity row in B.
    """
    free = np.flatnonzero(component < 0)
    B = _incidence(n, edges)
    if len(free):
        extra = sp.csr_matrix((np.ones(len(free)), (np.arange(len(free)), free)), shape=(len(free), n))
        B = sp.vstack([B, extra]).tocsr()
    R = (B.T @ B).tocsr()
    R.sum_duplicates()
    R.eliminate_zeros()

    constraints = []
    log_pdet = 0.0
    n_components = int(component.max()) + 1 if np.any(component >= 0) else 0
    for c in range(n_components):
        nodes = np.flatnonzero(component == c)
        coefficients = np.zeros(n)
        coefficients[nodes] = 1.0
        constraints.append(LinearConstraint(coefficients=coefficients))
        log_pdet += component_log_pdet(R, nodes)

    return StructureMatrix(
        kind=kind,
        matrix=R,
        root=B,
        constraints=tuple(constraints),
        rank_deficiency=len(constraints),
        component=component,
        log_pdet=log_pdet,
    )


def besag_structure(graph: AdjacencyGraph) -> StructureMatrix:
    """
    Intrinsic CAR structure R = D - W over the units of ``graph``.

    Each connected component gets its own sum-to-zero constraint. Units
    without neighbours have no defined conditional mean; they are kept out
    of the intrinsic part and carry an independent effect with the same
    precision instead.

    Raises:
        StructureError: Fewer than two units
    """
    n = graph.n_units
    if n < 2:
        raise StructureError(f"a Besag structure needs at least 2 units, got {n}", {"units": n})

    isolated = graph.degrees == 0
    if isolated.any():
        logger.warning("Isolated units get an independent effect", extra={"extra_data": {
            "isolated_units": [graph.unit_ids[i].item() for i in np.flatnonzero(isolated)][:20],
            "count": int(isolated.sum()),
        }})

    component = np.full(n, -1, dtype=np.int64)
    connected_labels = np.unique(graph.component[~isolated])
    for new_label, old_label in enumerate(connected_labels):
        component[(graph.component == old_label) & ~isolated] = new_label

    structure = _laplacian_structure(StructureKind.BESAG, n, graph.edges, component)
    logger.debug("Built Besag structure", extra={"extra_data": {
        "units": n, "components": structure.rank_deficiency, "isolated": int(isolated.sum()),
    }})
    return structure


def rw1_structure(k: int) -> StructureMatrix:
    """First-order random walk over k ordered classes"""
    if k < 2:
        raise StructureError(f"a random walk needs at least 2 classes, got {k}", {"classes": k})
    edges = np.column_stack([np.arange(k - 1), np.arange(1, k)])
    return _laplacian_structure(StructureKind.RW1, k, edges, np.zeros(k, dtype=np.int64))


def iid_structure(k: int) -> StructureMatrix:
    """Identity structure over k exchangeable levels"""
    if k < 1:
        raise StructureError(f"an iid effect needs at least 1 level, got {k}", {"levels": k})
    identity = sp.identity(k, format="csr")
    return StructureMatrix(
        kind=StructureKind.IID,
        matrix=identity,
        root=identity.copy(),
        constraints=(),
        rank_deficiency=0,
        component=np.full(k, -1, dtype=np.int64),
        log_pdet=0.0,
    )


def conditional_moments(structure: StructureMatrix, tau: float, x: np.ndarray,
                        node: int) -> Tuple[float, float]:
    """
    Full-conditional mean and variance of x[node] given the other entries.

    Computed from the precision tau * R:
    mean = -sum_{k != j} Q_jk x_k / Q_jj, variance = 1 / Q_jj.
    """
    diagonal = float(structure.matrix[node, node])
    if diagonal <= 0:
        raise StructureError(f"node {node} has no conditional precision", {"node": node})
    x = np.asarray(x, dtype=float)
    off_diagonal = float(structure.matrix[node].dot(x)[0]) - diagonal * x[node]
    return -off_diagonal / diagonal, 1.0 / (tau * diagonal)


def export_structure_csv(structure: StructureMatrix, path: Union[str, Path],
                         provenance: Optional[Provenance] = None) -> Path:
    """Write the non-zero entries as (row, col, value) triples, row-major"""
    coo = structure.matrix.tocoo()
    frame = pd.DataFrame({"row": coo.row, "col": coo.col, "value": coo.data})
    frame = frame.sort_values(["row", "col"], kind="mergesort").reset_index(drop=True)
    return write_csv_atomic(path, frame, provenance)
