"""
Effect summaries: fixed coefficients, class curves, aspect curve and per-unit LSE table
"""

from dataclasses import replace
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import norm

from config import PREDICT_CONFIG
from inference.models import PosteriorResult
from inference.summaries import lse_significance
from ingest.models import PixelTable
from model.models import EffectKind

from .exceptions import MissingEffectError
from .models import AspectCurve


def aspect_effect_curve(beta_east: float, beta_north: float, covariance: Optional[np.ndarray],
                        resolution_deg: Optional[float] = None,
                        level: Optional[float] = None) -> AspectCurve:
    """
    f(a) = beta_E sin(a) + beta_N cos(a) over a in [0, 360) with a Gaussian band.

    The band uses the joint law of (beta_E, beta_N):
    var f(a) = sin^2 var_E + cos^2 var_N + 2 sin cos cov.

    Raises:
        MissingEffectError: No 2x2 covariance supplied
    """
    if covariance is None:
        raise MissingEffectError("the aspect curve needs the joint covariance of both coefficients")
    covariance = np.asarray(covariance, dtype=float)
    if covariance.shape != (2, 2):
        raise MissingEffectError(f"expected a 2x2 covariance, got shape {covariance.shape}")
    resolution_deg = PREDICT_CONFIG["aspect_resolution_deg"] if resolution_deg is None else resolution_deg
    level = PREDICT_CONFIG["credible_level"] if level is None else level

    angles = np.arange(0.0, 360.0, resolution_deg)
    radians = np.deg2rad(angles)
    s, c = np.sin(radians), np.cos(radians)
    effect = beta_east * s + beta_north * c
    variance = s ** 2 * covariance[0, 0] + c ** 2 * covariance[1, 1] + 2.0 * s * c * covariance[0, 1]
    sd = np.sqrt(np.maximum(variance, 0.0))
    z = norm.ppf(0.5 + 0.5 * level)
    return AspectCurve(
        angle_deg=angles,
        effect=effect,
        sd=sd,
        lower=effect - z * sd,
        upper=effect + z * sd,
        amplitude=float(np.hypot(beta_east, beta_north)),
        phase_deg=float(np.rad2deg(np.arctan2(beta_east, beta_north)) % 360.0),
    )


def aspect_curve_from_result(result: PosteriorResult, eastness: str = "eastness",
                             northness: str = "northness", original_scale: bool = True,
                             **kwargs) -> AspectCurve:
    """
    Aspect curve from the fitted coefficients of two linear covariates.

    Coefficients are fitted per standard deviation of each covariate. With
    ``original_scale`` they are divided by the recorded training sd, so the
    curve is the effect of the raw sin/cos of aspect (the centering offsets
    are absorbed by the intercept). Covariates that were not standardized
    are already on their original scale.
    """
    for name in (eastness, northness):
        if not result.layout.has_block(name):
            raise MissingEffectError(f"the model has no linear effect '{name}'")
    beta = np.array([result.coefficient(eastness), result.coefficient(northness)])
    covariance = result.covariance([eastness, northness])
    standardization = result.layout.standardization
    standardized = all(name in standardization for name in (eastness, northness))
    if original_scale and standardized:
        inverse_sd = np.array([1.0 / standardization[eastness].sd, 1.0 / standardization[northness].sd])
        beta = beta * inverse_sd
        covariance = covariance * np.outer(inverse_sd, inverse_sd)
        scale = "original"
    else:
        scale = "standardized" if standardized else "original"
    curve = aspect_effect_curve(beta[0], beta[1], covariance, **kwargs)
    return replace(curve, scale=scale)


def aspect_curve_frame(curve: AspectCurve) -> pd.DataFrame:
    """One row per angle; ``coefficient_scale`` says which covariate scale the effect is on"""
    return pd.DataFrame({"aspect_deg": curve.angle_deg, "effect": curve.effect, "sd": curve.sd,
                         "lower": curve.lower, "upper": curve.upper, "coefficient_scale": curve.scale})


def effect_summary(result: PosteriorResult) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Posterior summaries of the effects.

    Returns:
        (fixed, classes): fixed effects one row each, slopes per standard
        deviation of a standardized covariate (``covariate_sd`` gives the
        divisor back to raw units); random class effects (binned and
        categorical blocks) one row per class or level
    """
    standardization = result.layout.standardization
    fixed_rows = []
    for block in result.layout.fixed_blocks:
        i = block.offset
        params = standardization.get(block.name)
        covariate_sd = params.sd if params is not None else float("nan")
        fixed_rows.append((block.name, result.mean[i], result.sd[i], result.q025[i], result.q975[i],
                           covariate_sd))
    fixed = pd.DataFrame(fixed_rows, columns=["effect", "mean", "sd", "q025", "q975", "covariate_sd"])

    class_frames = []
    for block in result.layout.random_blocks:
        if block.kind is EffectKind.BESAG:
            continue
        summary = result.block_summary(block.name)
        class_frames.append(pd.DataFrame({
            "effect": block.name,
            "kind": block.kind.value,
            "label": block.labels.astype(str),
            "mean": summary["mean"],
            "sd": summary["sd"],
            "q025": summary["q025"],
            "q975": summary["q975"],
        }))
    columns = ["effect", "kind", "label", "mean", "sd", "q025", "q975"]
    classes = pd.concat(class_frames, ignore_index=True) if class_frames else pd.DataFrame(columns=columns)
    return fixed, classes


def unit_lse_table(result: PosteriorResult, table: PixelTable,
                   columns: Sequence[str] = ()) -> pd.DataFrame:
    """
    Per-unit latent spatial effect with significance and unit means of pixel columns.

    Pixel columns such as elevation or the trigger are averaged per unit so
    they can be plotted against the LSE along external cross-sections.
    """
    besag = result.layout.besag_block()
    if besag is None:
        raise MissingEffectError("the model has no latent spatial effect")
    frame = lse_significance(result, besag.name)
    partition = table.partition(besag.name)
    sizes = partition.pixel_counts()
    frame["pixels"] = sizes
    for column in columns:
        values = np.asarray(table.column(column), dtype=float)
        frame[f"mean_{column}"] = np.bincount(partition.index, weights=values,
                                              minlength=partition.n_units) / sizes
    return frame
