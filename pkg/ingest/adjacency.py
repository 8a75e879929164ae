"""
Unit neighbour graphs derived from pixel contiguity
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from scipy.sparse.csgraph import connected_components

from config import INGEST_CONFIG
from core.artifacts import Provenance, read_csv_artifact, write_csv_atomic
from core.logging_config import get_logger

from .exceptions import DomainValueError, DuplicateLocationError, SchemaError
from .models import AdjacencyGraph, MappingPartition, PixelTable

logger = get_logger(__name__)


def grid_indices(table: PixelTable, spacing: Optional[float] = None) -> np.ndarray:
    """Integer (column, row) grid index of every pixel, shape (n, 2)"""
    spacing = INGEST_CONFIG["grid_spacing"] if spacing is None else spacing
    coords = np.column_stack([table.x, table.y]).astype(float)
    scaled = (coords - coords.min(axis=0)) / spacing
    index = np.round(scaled).astype(np.int64)
    off_grid = np.abs(scaled - index).max(axis=1) > 1e-6
    if off_grid.any():
        row = int(np.flatnonzero(off_grid)[0]) + 1
        raise DomainValueError("x/y", row, f"coordinates are not on a grid with spacing {spacing}")
    return index


def graph_from_edges(unit_ids: np.ndarray, pairs: np.ndarray) -> AdjacencyGraph:
    """Canonical graph from position pairs: i < j, unique, sorted, no self loops"""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    pairs = np.sort(pairs, axis=1)
    pairs = np.unique(pairs, axis=0) if len(pairs) else pairs
    graph = AdjacencyGraph(unit_ids=unit_ids, edges=pairs, component=np.zeros(len(unit_ids), dtype=np.int64),
                           n_components=1)
    n_components, labels = connected_components(graph.adjacency_matrix(), directed=False)
    return AdjacencyGraph(unit_ids=unit_ids, edges=pairs, component=labels.astype(np.int64),
                          n_components=int(n_components))


def build_adjacency(table: PixelTable, partition: MappingPartition,
                    spacing: Optional[float] = None) -> AdjacencyGraph:
    """
    Units are neighbours iff two of their pixels share a grid edge.

    Pixel connectivity is 4-neighbour (edge sharing). Disconnected graphs are
    allowed; their component structure is recorded and logged.

    Raises:
        DuplicateLocationError: Two or more pixels map to the same grid cell
    """
    index = grid_indices(table, spacing)
    width = int(index[:, 1].max()) + 2
    keys = index[:, 0] * width + index[:, 1]
    shared = pd.Series(keys).duplicated(keep=False).to_numpy()
    if shared.any():
        raise DuplicateLocationError(sorted(int(p) for p in table.pixel_id[shared]))
    order = np.argsort(keys)
    sorted_keys = keys[order]

    pairs = []
    for offset in (width, 1):  # right neighbour, upper neighbour
        target = keys + offset
        pos = np.searchsorted(sorted_keys, target)
        pos = np.clip(pos, 0, len(sorted_keys) - 1)
        found = sorted_keys[pos] == target
        # +1 along the row axis must not wrap into the next column
        if offset == 1:
            found &= index[:, 1] + 1 < width - 1
        source_rows = np.flatnonzero(found)
        target_rows = order[pos[found]]
        a = partition.index[source_rows]
        b = partition.index[target_rows]
        differ = a != b
        pairs.append(np.column_stack([a[differ], b[differ]]))

    graph = graph_from_edges(partition.unit_ids, np.vstack(pairs))
    if graph.n_components > 1:
        logger.warning("Adjacency graph is disconnected", extra={"extra_data": {
            "partition": partition.name, "components": graph.n_components,
            "isolated_units": int(len(graph.isolated)),
        }})
    logger.debug("Built adjacency graph", extra={"extra_data": {
        "partition": partition.name, "units": graph.n_units, "edges": int(len(graph.edges)),
    }})
    return graph


def write_edge_list(graph: AdjacencyGraph, path: Union[str, Path],
                    provenance: Optional[Provenance] = None) -> Path:
    """Two-column CSV of neighbouring unit ids"""
    pairs = graph.edge_id_pairs()
    frame = pd.DataFrame(pairs, columns=["unit_a", "unit_b"]) if pairs else \
        pd.DataFrame({"unit_a": pd.Series(dtype=np.int64), "unit_b": pd.Series(dtype=np.int64)})
    return write_csv_atomic(path, frame, provenance)


def read_edge_list(path: Union[str, Path], unit_ids: np.ndarray) -> AdjacencyGraph:
    """Load a two-column edge list against the given unit ids"""
    frame = read_csv_artifact(path)
    if frame.shape[1] < 2:
        raise SchemaError("unit_b", f"edge list {path} needs two columns")
    unit_ids = np.asarray(unit_ids)
    lookup = {uid.item() if hasattr(uid, "item") else uid: pos for pos, uid in enumerate(unit_ids)}
    pairs = []
    for row, (a, b) in enumerate(frame.iloc[:, :2].itertuples(index=False), start=1):
        if a not in lookup or b not in lookup:
            raise DomainValueError("unit", row, f"unknown unit id in edge ({a}, {b})")
        pairs.append((lookup[a], lookup[b]))
    return graph_from_edges(unit_ids, np.array(pairs, dtype=np.int64).reshape(-1, 2))
