"""
Pixel intensities, unit aggregation and the intensity-to-susceptibility map
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from config import PREDICT_CONFIG
from core.artifacts import Provenance, write_csv_atomic
from core.logging_config import get_logger
from inference.models import PosteriorResult
from ingest.models import MappingPartition, PixelTable

from .exceptions import IntensityDomainError
from .models import IntensityEstimator, IntensitySurface, UnitIntensity

logger = get_logger(__name__)


def intensity_from_moments(eta_mean: np.ndarray, eta_variance: np.ndarray,
                           estimator=None) -> np.ndarray:
    """exp(mean) for the plug-in estimator, exp(mean + var / 2) for the lognormal mean"""
    estimator = IntensityEstimator.parse(estimator or PREDICT_CONFIG["estimator"])
    eta_mean = np.asarray(eta_mean, dtype=float)
    if estimator is IntensityEstimator.PLUGIN:
        return np.exp(eta_mean)
    return np.exp(eta_mean + 0.5 * np.asarray(eta_variance, dtype=float))


def pixel_intensity(result: PosteriorResult, estimator=None,
                    pixel_id: Optional[np.ndarray] = None) -> IntensitySurface:
    """
    Intensity per pixel from the posterior of the linear predictor.

    Args:
        result: Fitted posterior covering every pixel row
        estimator: ``plugin-mean`` or ``lognormal-mean`` (default from config)
        pixel_id: Identifiers in layout row order; row numbers when omitted
    """
    estimator = IntensityEstimator.parse(estimator or PREDICT_CONFIG["estimator"])
    values = intensity_from_moments(result.eta_mean, result.eta_sd ** 2, estimator)
    ids = np.arange(len(values)) if pixel_id is None else np.asarray(pixel_id)
    return IntensitySurface(pixel_id=ids, intensity=values, estimator=estimator)


def susceptibility(lambda_a) -> np.ndarray:
    """
    Probability of at least one event: 1 - exp(-lambda).

    Raises:
        IntensityDomainError: Any intensity is negative
    """
    values = np.asarray(lambda_a, dtype=float)
    if np.any(values < 0) or np.any(np.isnan(values)):
        raise IntensityDomainError("susceptibility needs non-negative intensities",
                                   {"minimum": float(np.nanmin(values)) if values.size else None})
    out = -np.expm1(-values)
    return out if out.ndim else float(out)


def aggregate_intensity(surface: IntensitySurface, partition: MappingPartition,
                        counts: Optional[np.ndarray] = None) -> UnitIntensity:
    """
    Sum pixel intensities (and observed counts) over the units of a partition.

    Raises:
        IntensityDomainError: The partition does not assign every pixel of
            the surface
    """
    if len(partition.index) != len(surface.intensity) or \
            not np.array_equal(np.asarray(partition.pixel_id), np.asarray(surface.pixel_id)):
        raise IntensityDomainError(f"partition '{partition.name}' does not assign every pixel",
                                   {"pixels": int(len(surface.intensity)),
                                    "assigned": int(len(partition.index))})
    n_units = partition.n_units
    intensity = np.bincount(partition.index, weights=surface.intensity, minlength=n_units)
    if counts is None:
        observed = np.zeros(n_units, dtype=np.int64)
    else:
        observed = np.bincount(partition.index, weights=np.asarray(counts, dtype=float),
                               minlength=n_units).round().astype(np.int64)
    return UnitIntensity(
        partition=partition.name,
        unit_ids=partition.unit_ids,
        intensity=intensity,
        count=observed,
        susceptibility=susceptibility(intensity),
    )


def susceptibility_classes(values: np.ndarray, n_classes: int = 5) -> np.ndarray:
    """Quantile class labels q1 (lowest) .. qN over the given values"""
    values = np.asarray(values, dtype=float)
    n_classes = max(1, min(n_classes, len(values)))
    ranks = pd.Series(values).rank(method="first")
    return pd.qcut(ranks, n_classes, labels=[f"q{i}" for i in range(1, n_classes + 1)]).astype(str).to_numpy()


def unit_intensity_frame(units: UnitIntensity) -> pd.DataFrame:
    return pd.DataFrame({
        "unit_id": units.unit_ids,
        "lambda": units.intensity,
        "count": units.count,
        "susceptibility": units.susceptibility,
        "susceptibility_class": susceptibility_classes(units.susceptibility),
    })


def write_unit_intensity(units: UnitIntensity, path: Union[str, Path],
                         provenance: Optional[Provenance] = None) -> Path:
    return write_csv_atomic(path, unit_intensity_frame(units), provenance)


def pixel_surface_frame(surface: IntensitySurface, table: PixelTable) -> pd.DataFrame:
    """Per-pixel map rows: location, intensity, observed count and susceptibility class"""
    if not np.array_equal(np.asarray(surface.pixel_id), table.pixel_id):
        raise IntensityDomainError("surface and pixel table list different pixels",
                                   {"surface": int(len(surface.pixel_id)), "pixels": table.n_pixels})
    probability = susceptibility(surface.intensity)
    return pd.DataFrame({
        "pixel_id": table.pixel_id,
        "x": table.x,
        "y": table.y,
        "lambda": surface.intensity,
        "count": table.count,
        "susceptibility": probability,
        "susceptibility_class": susceptibility_classes(probability),
    })


def write_pixel_surface(surface: IntensitySurface, table: PixelTable, path: Union[str, Path],
                        provenance: Optional[Provenance] = None) -> Path:
    """Gridded dump for external plotting; columns as in ``pixel_surface_frame``"""
    return write_csv_atomic(path, pixel_surface_frame(surface, table), provenance)
