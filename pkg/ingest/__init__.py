"""
Pixel table ingestion: validation, covariate transforms and unit adjacency
"""

from .adjacency import build_adjacency, graph_from_edges, grid_indices, read_edge_list, write_edge_list
from .exceptions import (DomainValueError, DuplicateLocationError, SchemaError, UnreadableTableError,
                         ZeroVarianceError)
from .loader import load_pixel_table, schema_for_table, table_to_frame, write_pixel_table
from .models import (AdjacencyGraph, BinEdges, CorrelationReport, CovariateRole, CovariateSpec,
                     MappingPartition, PixelTable, Standardization)
from .transforms import (apply_bins, apply_standardization, bin_equidistant, destandardize, fit_bin_edges,
                         fit_standardization, pairwise_correlation, standardize_covariates)

__all__ = [
    "AdjacencyGraph", "BinEdges", "CorrelationReport", "CovariateRole", "CovariateSpec",
    "MappingPartition", "PixelTable", "Standardization",
    "DomainValueError", "DuplicateLocationError", "SchemaError", "UnreadableTableError", "ZeroVarianceError",
    "load_pixel_table", "write_pixel_table", "table_to_frame", "schema_for_table",
    "standardize_covariates", "apply_standardization", "destandardize", "fit_standardization",
    "bin_equidistant", "fit_bin_edges", "apply_bins", "pairwise_correlation",
    "build_adjacency", "graph_from_edges", "grid_indices", "read_edge_list", "write_edge_list",
]
