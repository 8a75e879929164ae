"""
Latent layout and pixel design matrix
"""

from typing import Dict, List, Optional

import numpy as np
import scipy.sparse as sp

from core.logging_config import get_logger
from gmrf.scaling import scale_structure
from gmrf.structures import besag_structure, iid_structure, rw1_structure
from ingest.adjacency import build_adjacency, read_edge_list
from ingest.exceptions import SchemaError
from ingest.models import AdjacencyGraph, PixelTable
from ingest.transforms import apply_bins, fit_bin_edges, fit_standardization

from .models import EffectKind, LatentBlock, LatentLayout, ModelSpec

logger = get_logger(__name__)


def validate_spec(spec: ModelSpec, table: PixelTable) -> None:
    """Every referenced column and partition must exist in the table"""
    for name in spec.referenced_columns():
        if not table.has_column(name):
            raise SchemaError(name, f"model covariate '{name}' is not a column of the pixel table")
    for name in spec.linear_effects + tuple(e.covariate for e in spec.rw1_effects):
        if name not in table.continuous:
            raise SchemaError(name, f"covariate '{name}' must be numeric")
    if spec.besag_partition and spec.besag_partition != "pixel" and spec.besag_partition not in table.partitions:
        raise SchemaError(spec.besag_partition)


def assemble_layout(spec: ModelSpec, table: PixelTable, fit_rows: Optional[np.ndarray] = None,
                    graph: Optional[AdjacencyGraph] = None) -> LatentLayout:
    """
    Lay out the latent vector and build A such that eta = A x.

    Standardization parameters and bin edges are fitted on ``fit_rows``
    (all rows by default) and applied to every row, so a layout built for a
    training subset also describes held-out pixels.

    Args:
        spec: Model description
        table: Pixel table with every referenced column
        fit_rows: Rows used to fit covariate transforms
        graph: Adjacency graph for the Besag block; built from pixel
            contiguity (or the spec's edge list) when omitted

    Raises:
        SchemaError: A covariate or partition named in the spec is missing
    """
    validate_spec(spec, table)
    rows = np.arange(table.n_pixels) if fit_rows is None else np.asarray(fit_rows)
    n = table.n_pixels
    pixel_rows = np.arange(n)

    blocks: List[LatentBlock] = []
    columns: List[sp.csr_matrix] = []
    standardization: Dict[str, object] = {}
    offset = 0

    def add(block: LatentBlock, matrix: sp.spmatrix) -> None:
        nonlocal offset
        blocks.append(block)
        columns.append(sp.csr_matrix(matrix))
        offset += block.length

    def indicator(positions: np.ndarray, width: int) -> sp.csr_matrix:
        return sp.csr_matrix((np.ones(n), (pixel_rows, positions)), shape=(n, width))

    if spec.intercept:
        add(LatentBlock("intercept", EffectKind.INTERCEPT, offset, 1, np.array(["intercept"])),
            np.ones((n, 1)))

    for name in spec.linear_effects:
        values = np.asarray(table.continuous[name], dtype=float)
        if spec.standardize:
            params = fit_standardization(values[rows], name)
            standardization[name] = params
            values = params.apply(values)
        add(LatentBlock(name, EffectKind.LINEAR, offset, 1, np.array([name])), values.reshape(-1, 1))

    if spec.besag_partition:
        partition = table.partition(spec.besag_partition)
        if graph is None:
            graph = read_edge_list(spec.besag_edges, partition.unit_ids) if spec.besag_edges \
                else build_adjacency(table, partition)
        structure = besag_structure(graph)
        if spec.scale:
            structure = scale_structure(structure)
        add(LatentBlock(spec.besag_partition, EffectKind.BESAG, offset, partition.n_units,
                        partition.unit_ids, structure=structure, graph=graph),
            indicator(partition.index, partition.n_units))

    for effect in spec.rw1_effects:
        column = np.asarray(table.continuous[effect.covariate], dtype=float)
        edges = fit_bin_edges(column[rows], effect.bins, effect.covariate)
        classes = apply_bins(column, edges)
        structure = rw1_structure(effect.bins)
        if spec.scale:
            structure = scale_structure(structure)
        add(LatentBlock(effect.covariate, EffectKind.RW1, offset, effect.bins,
                        np.arange(1, effect.bins + 1), structure=structure, bin_edges=edges),
            indicator(classes - 1, effect.bins))

    for name in spec.iid_effects:
        labels = np.asarray(table.column(name)).astype(str)
        levels, index = np.unique(labels, return_inverse=True)
        add(LatentBlock(name, EffectKind.IID, offset, len(levels), levels,
                        structure=iid_structure(len(levels))),
            indicator(index.reshape(-1), len(levels)))

    if not blocks:
        raise SchemaError("model", "the model has no effects")

    design = sp.hstack(columns, format="csr")
    layout = LatentLayout(blocks=tuple(blocks), design=design, standardization=standardization)
    logger.debug("Assembled latent layout", extra={"extra_data": {
        "pixels": n, "dimension": layout.dimension, "blocks": [b.name for b in blocks],
    }})
    return layout
