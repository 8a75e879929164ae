"""
Shared fixtures: small pixel grids, simulated datasets and config files
"""

from dataclasses import replace
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np
import pytest

from core.config_file import parse_config_text
from ingest.models import PixelTable
from model import ModelSpec, build_model
from model.builder import LatentModel
from simulate.generator import simulate_lgcp
from simulate.models import SimulationConfig


def grid_table(width: int, height: int, units: Optional[Sequence[int]] = None,
               counts: Optional[Sequence[int]] = None,
               continuous: Optional[Dict[str, Sequence[float]]] = None,
               partition: str = "slope_unit") -> PixelTable:
    """Row-major grid of pixels with ids 1..n, optional unit labels per pixel"""
    n = width * height
    rows, cols = np.divmod(np.arange(n), width)
    partitions = {} if units is None else {partition: np.asarray(units, dtype=np.int64)}
    return PixelTable(
        pixel_id=np.arange(1, n + 1, dtype=np.int64),
        x=cols.astype(float),
        y=rows.astype(float),
        count=np.zeros(n, dtype=np.int64) if counts is None else np.asarray(counts, dtype=np.int64),
        continuous={k: np.asarray(v, dtype=float) for k, v in (continuous or {}).items()},
        partitions=partitions,
    )


def level_model(counts: Sequence[int], intercept: bool = False) -> LatentModel:
    """One pixel per iid level, so the latent field has one coordinate per count"""
    n = len(counts)
    table = replace(grid_table(n, 1, counts=counts),
                    categorical={"level": np.array([f"L{i}" for i in range(n)])})
    return build_model(ModelSpec(intercept=intercept, iid_effects=("level",)), table)


def strip_units(width: int, height: int, strips: int) -> np.ndarray:
    """Vertical strips of equal width, labelled 1..strips"""
    cols = np.arange(width * height) % width
    return cols * strips // width + 1


@pytest.fixture
def strips_table() -> PixelTable:
    """3x3 grid split into three vertical strips (a path graph A-B-C)"""
    return grid_table(3, 3, units=strip_units(3, 3, 3))


@pytest.fixture(scope="session")
def small_config() -> SimulationConfig:
    return SimulationConfig(width=12, height=12, n_units=16, units_per_catchment=4, catchments_per_admin=2,
                            beta0=0.0, betas={"slope": 0.5}, sigma_lse=0.6, trigger_sd=0.8,
                            trigger_decay=6.0, ridge_bumps=1, covariate_smoothness=2.0, seed=11)


@pytest.fixture(scope="session")
def small_dataset(small_config):
    return simulate_lgcp(small_config)


@pytest.fixture
def write_config(tmp_path):
    """Write configuration text to a file and return its path"""

    def _write(text: str, name: str = "run.cfg") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def parse():
    return parse_config_text
