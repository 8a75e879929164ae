"""
Centralized configuration for all pipeline stages and settings
"""

import os

from dotenv import load_dotenv

load_dotenv()

TOOL_NAME = "slopeunit-lgcp"
TOOL_VERSION = "0.1.0"

# Pixel table ingestion
INGEST_CONFIG = {
    "id_column": "pixel_id",
    "count_column": "count",
    "x_column": "x",
    "y_column": "y",
    "default_bins": 20,  # equidistant classes for binned covariates
    "grid_spacing": 1.0,
    "correlation_threshold": 0.7,  # |r| above this is flagged as collinear
}

# GMRF structure construction
GMRF_CONFIG = {
    "dense_scaling_limit": 2000,  # components above this use sparse solves
    "sampling_jitter": 1e-6,  # diagonal added before sampling intrinsic fields
    "solve_chunk_size": 256,
}

# Latent model assembly
MODEL_CONFIG = {
    "fixed_effect_precision": 1e-6,  # Normal(0, 1000^2) on intercept and slopes
    "pc_prior_median": 0.1,  # median of sigma under the PC prior
}

# Simplified INLA engine
INFERENCE_CONFIG = {
    "newton_tolerance": 1e-8,
    "newton_max_iterations": 50,
    "newton_max_halvings": 20,
    "theta_init": 2.0,  # log precision, sigma ~ 0.37
    "search_initial_step": 1.0,
    "search_min_step": 0.01,
    "search_probe": 0.05,
    "grid_step": 0.5,
    "grid_radius": 2,
    "grid_cutoff": 6.0,  # drop grid points this far below the maximum
    "quantile_tolerance": 1e-6,
    "dense_latent_limit": 3000,  # above this the sparse factorization is used
    "workers": int(os.getenv("LGCP_WORKERS", "1")),
}

# Intensity products
PREDICT_CONFIG = {
    "estimator": "lognormal-mean",
    "aspect_resolution_deg": 1.0,
    "credible_level": 0.95,
}

# Cross-validation
CV_CONFIG = {
    "folds": 10,
    "seed": 20240101,
    "blocked_by": None,  # partition name for spatially blocked folds
}

# Synthetic data generation
SIMULATION_CONFIG = {
    "width": 50,
    "height": 50,
    "n_units": 150,
    "units_per_catchment": 10,
    "catchments_per_admin": 5,
    "beta0": -2.0,
    "betas": {"slope": 0.5, "wetness": -0.3},
    "sigma_lse": 0.5,
    "trigger_sd": 1.0,
    "trigger_decay": 15.0,  # pixels
    "ridge_bumps": 3,
    "covariate_smoothness": 3.0,
    "seed": 7,
}

# Command line behaviour
CLI_CONFIG = {
    "default_output_dir": os.getenv("LGCP_OUTPUT_DIR", "./runs"),
    "default_partitions": ["pixel"],
    "screen_sort_descending": True,
}

# Logging configuration
LOGGING_CONFIG = {
    "log_level": os.getenv("LGCP_LOG_LEVEL", "INFO"),
    "log_dir": os.getenv("LGCP_LOG_DIR"),
    "enable_file_logging": os.getenv("LGCP_ENABLE_FILE_LOGGING", "false").lower() == "true",
    "enable_console_logging": os.getenv("LGCP_ENABLE_CONSOLE_LOGGING", "true").lower() == "true",
    "structured_logging": os.getenv("LGCP_ENVIRONMENT", "development").lower() == "production",
    "max_log_size_mb": int(os.getenv("LGCP_MAX_LOG_SIZE_MB", "10")),
    "backup_count": int(os.getenv("LGCP_LOG_BACKUP_COUNT", "5")),
}
