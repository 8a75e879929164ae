"""
Synthetic datasets with known truth and brute-force oracles
"""

from .generator import (UNIT_PARTITION, replicate_seeds, simulate_lgcp, simulate_replicates, trigger_surface,
                        truth_frame, unit_means, write_dataset)
from .models import SimulatedDataset, SimulationConfig
from .oracles import OracleResult, brute_force_auc, tiny_posterior_oracle
from .recovery import (LSE_ONLY, TRIGGER_LSE, TRIGGER_ONLY, FitOptions, RecoveryReport, recovery_experiment,
                       recovery_specs, recovery_study)
from .regions import grow_regions, merge_regions

__all__ = [
    "SimulationConfig", "SimulatedDataset", "OracleResult", "FitOptions", "RecoveryReport",
    "simulate_lgcp", "simulate_replicates", "replicate_seeds", "trigger_surface", "truth_frame",
    "unit_means", "write_dataset", "grow_regions", "merge_regions",
    "tiny_posterior_oracle", "brute_force_auc",
    "recovery_experiment", "recovery_specs", "recovery_study",
    "UNIT_PARTITION", "TRIGGER_ONLY", "LSE_ONLY", "TRIGGER_LSE",
]
