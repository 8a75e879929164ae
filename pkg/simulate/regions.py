"""
Seeded region growing on graphs
"""

import numpy as np
import scipy.sparse as sp


def grow_regions(adjacency: sp.spmatrix, n_regions: int, rng: np.random.Generator) -> np.ndarray:
    """
    Partition the nodes of a connected graph into contiguous regions.

    ``n_regions`` distinct seed nodes are drawn at random; regions then grow
    one node at a time from a randomly chosen frontier node into one of its
    unassigned neighbours, so every region stays connected.

    Returns:
        Region label 0..n_regions-1 per node
    """
    graph = sp.csr_matrix(adjacency)
    n = graph.shape[0]
    if not 1 <= n_regions <= n:
        raise ValueError(f"cannot grow {n_regions} regions on {n} nodes")

    labels = np.full(n, -1, dtype=np.int64)
    seeds = rng.choice(n, size=n_regions, replace=False)
    labels[seeds] = np.arange(n_regions)
    frontier = list(seeds)
    indptr, indices = graph.indptr, graph.indices

    while frontier:
        pick = int(rng.integers(len(frontier)))
        node = frontier[pick]
        free = [v for v in indices[indptr[node]:indptr[node + 1]] if labels[v] < 0]
        if not free:
            frontier[pick] = frontier[-1]
            frontier.pop()
            continue
        target = free[int(rng.integers(len(free)))]
        labels[target] = labels[node]
        frontier.append(target)

    if np.any(labels < 0):
        raise ValueError("graph is disconnected; some nodes were not reached")
    return labels


def merge_regions(adjacency: sp.spmatrix, labels: np.ndarray, n_groups: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Group existing regions into ``n_groups`` contiguous super-regions"""
    graph = sp.csr_matrix(adjacency).tocoo()
    n_regions = int(labels.max()) + 1
    a, b = labels[graph.row], labels[graph.col]
    keep = a != b
    region_graph = sp.csr_matrix((np.ones(int(keep.sum())), (a[keep], b[keep])),
                                 shape=(n_regions, n_regions))
    groups = grow_regions(region_graph, min(n_groups, n_regions), rng)
    return groups[labels]
