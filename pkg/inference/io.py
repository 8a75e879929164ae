"""
CSV serialization of posterior results
"""

from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd

from core.artifacts import Provenance, write_csv_atomic

from .models import PosteriorResult


def latent_frame(result: PosteriorResult) -> pd.DataFrame:
    """block, index, label, mean, sd, q025, q975 per latent coordinate"""
    rows = []
    for block in result.layout.blocks:
        for i, label in enumerate(block.labels):
            rows.append((block.name, i, label.item() if hasattr(label, "item") else label))
    frame = pd.DataFrame(rows, columns=["block", "index", "label"])
    frame["mean"] = result.mean
    frame["sd"] = result.sd
    frame["q025"] = result.q025
    frame["q975"] = result.q975
    return frame


def theta_grid_frame(result: PosteriorResult) -> pd.DataFrame:
    grid = result.grid
    frame = pd.DataFrame(grid.points, columns=[f"theta_{n}" for n in grid.names])
    frame["log_post"] = grid.log_posterior
    frame["weight"] = grid.weights
    return frame


def hyperparameter_frame(result: PosteriorResult) -> pd.DataFrame:
    """Theta at the mode and grid moments, with sigma = exp(-theta / 2)"""
    grid = result.grid
    sigmas = np.exp(-0.5 * grid.points)
    return pd.DataFrame({
        "name": list(result.theta_hat.names),
        "theta_mode": result.theta_hat.values,
        "theta_mean": grid.mean(),
        "theta_sd": grid.sd(),
        "sigma_mode": result.theta_hat.sigmas,
        "sigma_mean": grid.weights @ sigmas if sigmas.shape[1] else np.zeros(0),
    })


def fitted_eta_frame(result: PosteriorResult, pixel_id: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame({"pixel_id": pixel_id, "eta_mean": result.eta_mean, "eta_sd": result.eta_sd})


def write_posterior(result: PosteriorResult, directory: Union[str, Path], pixel_id: np.ndarray,
                    provenance: Optional[Provenance] = None) -> Dict[str, Path]:
    """
    Write latent.csv, theta_grid.csv, hyperparameters.csv and fitted_eta.csv.

    Returns:
        Artifact name -> written path
    """
    out = Path(directory)
    return {
        "latent": write_csv_atomic(out / "latent.csv", latent_frame(result), provenance),
        "theta_grid": write_csv_atomic(out / "theta_grid.csv", theta_grid_frame(result), provenance),
        "hyperparameters": write_csv_atomic(out / "hyperparameters.csv", hyperparameter_frame(result),
                                            provenance),
        "fitted_eta": write_csv_atomic(out / "fitted_eta.csv", fitted_eta_frame(result, pixel_id),
                                       provenance),
    }
