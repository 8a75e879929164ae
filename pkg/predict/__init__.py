"""
Intensity surfaces, unit aggregation, susceptibility and effect products
"""

from .effects import (
    aspect_curve_frame,
    aspect_curve_from_result,
    aspect_effect_curve,
    effect_summary,
    unit_lse_table,
)
from .exceptions import IntensityDomainError, MissingEffectError
from .intensity import (
    aggregate_intensity,
    intensity_from_moments,
    pixel_intensity,
    pixel_surface_frame,
    susceptibility,
    susceptibility_classes,
    unit_intensity_frame,
    write_pixel_surface,
    write_unit_intensity,
)
from .models import AspectCurve, IntensityEstimator, IntensitySurface, UnitIntensity

__all__ = [
    "aggregate_intensity",
    "aspect_curve_frame",
    "aspect_curve_from_result",
    "aspect_effect_curve",
    "AspectCurve",
    "effect_summary",
    "intensity_from_moments",
    "IntensityDomainError",
    "IntensityEstimator",
    "IntensitySurface",
    "MissingEffectError",
    "pixel_intensity",
    "pixel_surface_frame",
    "susceptibility",
    "susceptibility_classes",
    "unit_intensity_frame",
    "unit_lse_table",
    "UnitIntensity",
    "write_pixel_surface",
    "write_unit_intensity",
]
