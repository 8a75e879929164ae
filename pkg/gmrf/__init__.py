"""
Gaussian Markov random field priors: structures, scaling, factorization, sampling
"""

from .exceptions import FactorizationError, StructureError
from .factorization import ConstrainedFactor, PrecisionFactor, sparse_logdet
from .models import LinearConstraint, StructureKind, StructureMatrix
from .sampling import sample_constrained
from .scaling import component_geometric_means, constrained_marginal_variances, scale_structure
from .structures import (
    besag_structure,
    component_log_pdet,
    conditional_moments,
    export_structure_csv,
    iid_structure,
    rw1_structure,
)

__all__ = [
    "besag_structure",
    "component_geometric_means",
    "component_log_pdet",
    "conditional_moments",
    "constrained_marginal_variances",
    "ConstrainedFactor",
    "export_structure_csv",
    "FactorizationError",
    "iid_structure",
    "LinearConstraint",
    "PrecisionFactor",
    "rw1_structure",
    "sample_constrained",
    "scale_structure",
    "sparse_logdet",
    "StructureError",
    "StructureKind",
    "StructureMatrix",
]
