"""
Data models for intensity surfaces, unit aggregates and effect curves
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class IntensityEstimator(Enum):
    """Posterior functional mapped through exp"""
    PLUGIN = "plugin-mean"
    LOGNORMAL = "lognormal-mean"

    @classmethod
    def parse(cls, value) -> "IntensityEstimator":
        if isinstance(value, cls):
            return value
        for estimator in cls:
            if estimator.value == str(value).strip().lower():
                return estimator
        raise ValueError(f"unknown intensity estimator '{value}'")


@dataclass(frozen=True)
class IntensitySurface:
    """Per-pixel intensity summary"""
    pixel_id: np.ndarray
    intensity: np.ndarray
    estimator: IntensityEstimator

    @property
    def total(self) -> float:
        return float(self.intensity.sum())


@dataclass(frozen=True)
class UnitIntensity:
    """Intensity aggregated over the units of one partition"""
    partition: str
    unit_ids: np.ndarray
    intensity: np.ndarray
    count: np.ndarray
    susceptibility: np.ndarray

    @property
    def n_units(self) -> int:
        return int(self.unit_ids.shape[0])

    @property
    def total(self) -> float:
        return float(self.intensity.sum())


@dataclass(frozen=True)
class AspectCurve:
    """Combined eastness/northness effect over aspect angle"""
    angle_deg: np.ndarray
    effect: np.ndarray
    sd: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    amplitude: float
    phase_deg: float
    scale: str = "given"  # "original", "standardized" or "given" (caller-supplied coefficients)
