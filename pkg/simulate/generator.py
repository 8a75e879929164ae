"""
Synthetic LGCP datasets with known ground truth
"""

import time
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from scipy.ndimage import gaussian_filter

from core.artifacts import Provenance, write_csv_atomic
from core.logging_config import get_logger, log_performance
from core.parallel import map_ordered
from gmrf.sampling import sample_constrained
from gmrf.scaling import scale_structure
from gmrf.structures import besag_structure
from ingest.adjacency import build_adjacency
from ingest.loader import write_pixel_table
from ingest.models import MappingPartition, PixelTable

from .models import SimulatedDataset, SimulationConfig
from .regions import grow_regions, merge_regions

logger = get_logger(__name__)

UNIT_PARTITION = "slope_unit"


def replicate_seeds(master: int, n: int) -> List[int]:
    """
    Independent replicate seeds derived from one master seed.

    Replicate r uses the first 32-bit word of the r-th child of
    ``SeedSequence(master).spawn(n)``, so adding replicates never changes
    the seeds of earlier ones.
    """
    if n < 0:
        raise ValueError("replicate count must be non-negative")
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(master).spawn(n)]


def _smooth_field(rng: np.random.Generator, height: int, width: int, sigma: float) -> np.ndarray:
    field = gaussian_filter(rng.standard_normal((height, width)), sigma=sigma, mode="reflect")
    sd = field.std()
    return (field - field.mean()) / sd if sd > 0 else np.zeros_like(field)


def trigger_surface(config: SimulationConfig, rng: np.random.Generator) -> np.ndarray:
    """
    Smooth trigger on the grid, shape (height, width), mean 0 and sd ``trigger_sd``.

    Radial exponential decay from a random epicenter plus Gaussian ridge
    bumps of half the peak amplitude.
    """
    h, w = config.height, config.width
    rows, cols = np.mgrid[0:h, 0:w].astype(float)
    center = rng.uniform([0.0, 0.0], [h, w])
    surface = np.exp(-np.hypot(rows - center[0], cols - center[1]) / config.trigger_decay)

    width = max(config.trigger_decay / 3.0, 1.0)
    for _ in range(config.ridge_bumps):
        bump = rng.uniform([0.0, 0.0], [h, w])
        distance2 = (rows - bump[0]) ** 2 + (cols - bump[1]) ** 2
        surface = surface + 0.5 * np.exp(-0.5 * distance2 / width ** 2)

    sd = surface.std()
    if config.trigger_sd == 0 or sd == 0:
        return np.zeros((h, w))
    return config.trigger_sd * (surface - surface.mean()) / sd


def _grid_table(config: SimulationConfig) -> PixelTable:
    rows, cols = np.divmod(np.arange(config.n_pixels), config.width)
    n = config.n_pixels
    return PixelTable(
        pixel_id=np.arange(1, n + 1, dtype=np.int64),
        x=cols.astype(float),
        y=rows.astype(float),
        count=np.zeros(n, dtype=np.int64),
    )


def _memberships(config: SimulationConfig, table: PixelTable, rng: np.random.Generator):
    """Nested unit, catchment and admin labels (1-based) per pixel"""
    pixel_graph = build_adjacency(table, table.partition("pixel")).adjacency_matrix()
    units = grow_regions(pixel_graph, config.n_units, rng)
    n_catchments = -(-config.n_units // config.units_per_catchment)
    catchments = merge_regions(pixel_graph, units, n_catchments, rng)
    n_admins = -(-n_catchments // config.catchments_per_admin)
    admins = merge_regions(pixel_graph, catchments, n_admins, rng)
    return {UNIT_PARTITION: units + 1, "catchment": catchments + 1, "admin": admins + 1}


def _sample_lse(config: SimulationConfig, table: PixelTable, seed) -> np.ndarray:
    units = table.partition(UNIT_PARTITION)
    if config.sigma_lse == 0 or units.n_units < 2:
        return np.zeros(units.n_units)
    structure = scale_structure(besag_structure(build_adjacency(table, units)))
    return sample_constrained(structure, 1.0 / config.sigma_lse ** 2, seed=seed)


def simulate_lgcp(config: Optional[SimulationConfig] = None) -> SimulatedDataset:
    """
    Draw one dataset: eta = beta0 + sum beta_i x_i + U_unit (+ trigger), counts ~ Poisson(exp eta).

    Four independent streams are spawned from ``config.seed`` for the unit
    geometry, covariates and trigger, the latent spatial effect and the
    counts, so the output is a pure function of the config.
    """
    config = config or SimulationConfig()
    start = time.perf_counter()
    geometry_seed, covariate_seed, lse_seed, count_seed = np.random.SeedSequence(config.seed).spawn(4)

    table = _grid_table(config)
    table = PixelTable(pixel_id=table.pixel_id, x=table.x, y=table.y, count=table.count,
                       partitions=_memberships(config, table, np.random.default_rng(geometry_seed)))

    covariate_rng = np.random.default_rng(covariate_seed)
    shape = (config.height, config.width)
    covariates = {name: _smooth_field(covariate_rng, *shape, config.covariate_smoothness).ravel()
                  for name in config.betas}
    covariates["elevation"] = _smooth_field(covariate_rng, *shape, 2.0 * config.covariate_smoothness).ravel()
    trigger = trigger_surface(config, covariate_rng).ravel()
    covariates["trigger"] = trigger

    lse = _sample_lse(config, table, lse_seed)
    pixel_lse = lse[table.partition(UNIT_PARTITION).index]

    eta = np.full(config.n_pixels, float(config.beta0))
    for name, beta in config.betas.items():
        eta += beta * covariates[name]
    eta += pixel_lse
    if config.trigger_in_eta:
        eta += trigger
    intensity = np.exp(eta)
    counts = np.random.default_rng(count_seed).poisson(intensity)

    table = table.with_continuous(covariates).with_counts(counts)
    log_performance(logger, "simulate_lgcp", (time.perf_counter() - start) * 1000.0,
                    seed=config.seed, pixels=config.n_pixels, units=config.n_units,
                    total_count=int(counts.sum()))
    return SimulatedDataset(config=config, table=table, lse=lse, trigger=trigger, eta=eta,
                            intensity=intensity, pixel_lse=pixel_lse)


def simulate_replicates(config: SimulationConfig, n: int,
                        workers: Optional[int] = None) -> List[SimulatedDataset]:
    """``n`` datasets with seeds from ``replicate_seeds(config.seed, n)``, in replicate order"""
    configs = [config.with_seed(seed) for seed in replicate_seeds(config.seed, n)]
    return map_ordered(simulate_lgcp, configs, workers)


def truth_frame(dataset: SimulatedDataset) -> pd.DataFrame:
    return pd.DataFrame({
        "pixel_id": dataset.table.pixel_id,
        "eta": dataset.eta,
        "lambda": dataset.intensity,
        "trigger": dataset.trigger,
        "lse": dataset.pixel_lse,
    })


def write_dataset(dataset: SimulatedDataset, directory: Union[str, Path],
                  provenance: Optional[Provenance] = None) -> List[Path]:
    """pixels.csv in the ingest format plus the truth.csv sidecar"""
    directory = Path(directory)
    return [
        write_pixel_table(dataset.table, directory / "pixels.csv", provenance),
        write_csv_atomic(directory / "truth.csv", truth_frame(dataset), provenance),
    ]


def unit_means(partition: MappingPartition, values: np.ndarray) -> np.ndarray:
    """Average of a pixel quantity over each unit"""
    sizes = partition.pixel_counts()
    return np.bincount(partition.index, weights=np.asarray(values, dtype=float),
                       minlength=partition.n_units) / sizes
