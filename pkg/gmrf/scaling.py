"""
Generalized-variance scaling of intrinsic structures.

After scaling, the geometric mean of the marginal variances of the
constrained field is 1 in every component, so that a precision parameter
means the same thing whatever the graph.
"""

from dataclasses import replace
from typing import List, Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from config import GMRF_CONFIG
from core.logging_config import get_logger

from .factorization import PrecisionFactor
from .models import StructureMatrix

logger = get_logger(__name__)


def _component_variances(block: sp.spmatrix, dense_limit: int) -> np.ndarray:
    """Diagonal of the pseudo-inverse of one connected Laplacian block"""
    n = block.shape[0]
    if n <= dense_limit:
        return np.diag(sla.pinvh(block.toarray())).copy()

    # Grounding node 0 gives a generalized inverse G; the Moore-Penrose
    # inverse is P G P with P the centering projector.
    grounded = sp.csc_matrix(block)[1:, 1:]
    factor = PrecisionFactor(grounded, dense_limit=0, label="grounded laplacian")
    g_diag = np.zeros(n)
    g_diag[1:] = factor.diag_inverse()
    g_row = np.zeros(n)
    g_row[1:] = factor.solve(np.ones(n - 1))
    return g_diag - 2.0 * g_row / n + g_row.sum() / n ** 2


def constrained_marginal_variances(structure: StructureMatrix,
                                   dense_limit: Optional[int] = None) -> np.ndarray:
    """
    Marginal variances of the unit-precision field under its constraints.

    Intrinsic components use the pseudo-inverse diagonal; free nodes
    (iid entries) use 1 / R_jj.
    """
    limit = GMRF_CONFIG["dense_scaling_limit"] if dense_limit is None else dense_limit
    R = structure.matrix.tocsr()
    out = np.empty(structure.n)
    free = structure.component < 0
    out[free] = 1.0 / R.diagonal()[free]
    for nodes in structure.component_nodes():
        out[nodes] = _component_variances(R[nodes][:, nodes], limit)
    return out


def component_geometric_means(structure: StructureMatrix,
                              dense_limit: Optional[int] = None) -> List[float]:
    """Geometric mean of the constrained marginal variances per intrinsic component"""
    variances = constrained_marginal_variances(structure, dense_limit)
    return [float(np.exp(np.mean(np.log(variances[nodes]))))
            for nodes in structure.component_nodes() if len(nodes) > 1]


def scale_structure(structure: StructureMatrix, dense_limit: Optional[int] = None) -> StructureMatrix:
    """
    Scale every intrinsic component by its reference variance.

    Each component's block becomes s_c * R_c with s_c the geometric mean of
    the constrained marginal variances of R_c; ``scaling_factors`` records
    the s_c applied by this call. Structures without constraints are
    returned unchanged (factor 1). Scaling an already scaled structure
    applies factors of 1.
    """
    if not structure.constraints:
        return replace(structure, scaled=True)

    variances = constrained_marginal_variances(structure, dense_limit)
    weights = np.ones(structure.n)
    factors = []
    log_pdet = structure.log_pdet
    for nodes in structure.component_nodes():
        if len(nodes) < 2:
            logger.warning("Skipping scaling of a single-node component", extra={"extra_data": {
                "node": int(nodes[0]),
            }})
            factors.append(1.0)
            continue
        factor = float(np.exp(np.mean(np.log(variances[nodes]))))
        weights[nodes] = factor
        factors.append(factor)
        log_pdet += (len(nodes) - 1) * np.log(factor)

    root_weights = sp.diags(np.sqrt(weights))
    matrix = (root_weights @ structure.matrix @ root_weights).tocsr()
    root = (structure.root @ root_weights).tocsr()

    logger.debug("Scaled structure", extra={"extra_data": {
        "kind": structure.kind.value, "factors": [round(f, 6) for f in factors[:10]],
    }})
    return replace(structure, matrix=matrix, root=root, log_pdet=float(log_pdet),
                   scaling_factors=tuple(factors), scaled=True)

