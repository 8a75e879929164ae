"""
Data models for synthetic LGCP datasets
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Optional

import numpy as np

from config import SIMULATION_CONFIG
from ingest.models import PixelTable


@dataclass(frozen=True)
class SimulationConfig:
    """
    Ground truth and geometry for one synthetic dataset.

    The trigger is a smooth surface (radial decay from a random epicenter
    plus ridge bumps) rescaled to mean 0 and sd ``trigger_sd``; it enters
    the true linear predictor with coefficient 1 when ``trigger_in_eta``.
    """
    width: int = SIMULATION_CONFIG["width"]
    height: int = SIMULATION_CONFIG["height"]
    n_units: int = SIMULATION_CONFIG["n_units"]
    units_per_catchment: int = SIMULATION_CONFIG["units_per_catchment"]
    catchments_per_admin: int = SIMULATION_CONFIG["catchments_per_admin"]
    beta0: float = SIMULATION_CONFIG["beta0"]
    betas: Dict[str, float] = field(default_factory=lambda: dict(SIMULATION_CONFIG["betas"]))
    sigma_lse: float = SIMULATION_CONFIG["sigma_lse"]
    trigger_sd: float = SIMULATION_CONFIG["trigger_sd"]
    trigger_decay: float = SIMULATION_CONFIG["trigger_decay"]
    ridge_bumps: int = SIMULATION_CONFIG["ridge_bumps"]
    covariate_smoothness: float = SIMULATION_CONFIG["covariate_smoothness"]
    trigger_in_eta: bool = True
    seed: int = SIMULATION_CONFIG["seed"]

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if not 1 <= self.n_units <= self.width * self.height:
            raise ValueError(f"unit count must lie in [1, {self.width * self.height}], got {self.n_units}")
        if self.units_per_catchment < 1 or self.catchments_per_admin < 1:
            raise ValueError("nesting ratios must be positive")
        if self.sigma_lse < 0 or self.trigger_sd < 0 or self.trigger_decay <= 0:
            raise ValueError("sigma_lse and trigger_sd must be non-negative, trigger_decay positive")
        reserved = {"trigger", "elevation"}
        if reserved & set(self.betas):
            raise ValueError(f"covariate names {sorted(reserved)} are reserved")

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    def with_seed(self, seed: int) -> "SimulationConfig":
        return replace(self, seed=int(seed))


@dataclass(frozen=True)
class SimulatedDataset:
    """Pixel table with counts plus every ground-truth quantity"""
    config: SimulationConfig
    table: PixelTable
    lse: np.ndarray                  # true unit effects, ordered by slope_unit id
    trigger: np.ndarray              # per pixel
    eta: np.ndarray
    intensity: np.ndarray
    pixel_lse: Optional[np.ndarray] = None

    @property
    def total_count(self) -> int:
        return self.table.total_count
