"""
Significance labels for the latent spatial effect
"""

from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd

from model.models import EffectKind

from .models import PosteriorResult


class Significance(Enum):
    POSITIVE = "positive-significant"
    NEGATIVE = "negative-significant"
    NONE = "not-significant"


def significance_labels(q025: np.ndarray, q975: np.ndarray) -> np.ndarray:
    """Label each interval by whether it excludes zero"""
    q025 = np.asarray(q025, dtype=float)
    q975 = np.asarray(q975, dtype=float)
    labels = np.full(q025.shape, Significance.NONE.value, dtype=object)
    labels[q025 > 0] = Significance.POSITIVE.value
    labels[q975 < 0] = Significance.NEGATIVE.value
    return labels


def lse_significance(result: PosteriorResult, block: Optional[str] = None) -> pd.DataFrame:
    """
    Per-unit significance of the Besag block.

    Returns:
        DataFrame with unit_id, mean, q025, q975, significance

    Raises:
        KeyError: The model has no Besag block
    """
    if block is None:
        besag = result.layout.besag_block()
        if besag is None:
            raise KeyError("the model has no latent spatial effect")
    else:
        besag = result.layout.block(block)
        if besag.kind is not EffectKind.BESAG:
            raise KeyError(f"block '{block}' is not a latent spatial effect")

    summary = result.block_summary(besag.name)
    return pd.DataFrame({
        "unit_id": besag.labels,
        "mean": summary["mean"],
        "q025": summary["q025"],
        "q975": summary["q975"],
        "significance": significance_labels(summary["q025"], summary["q975"]),
    })
