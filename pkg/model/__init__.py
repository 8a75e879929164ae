"""
Latent Gaussian model: specification, layout, prior precision and PC priors
"""

from .builder import LatentModel, build_model, model_from_layout
from .exceptions import SpecParseError
from .layout import assemble_layout, validate_spec
from .models import BinnedEffect, EffectKind, Hyperparameters, LatentBlock, LatentLayout, ModelSpec, PCPrior
from .precision import pc_prior_logdensity, prior_precision, priors_for, sigma_quantile, theta_values
from .spec_parser import parse_model_spec

__all__ = [
    "assemble_layout",
    "BinnedEffect",
    "build_model",
    "EffectKind",
    "Hyperparameters",
    "LatentBlock",
    "LatentLayout",
    "LatentModel",
    "model_from_layout",
    "ModelSpec",
    "parse_model_spec",
    "pc_prior_logdensity",
    "PCPrior",
    "prior_precision",
    "priors_for",
    "sigma_quantile",
    "SpecParseError",
    "theta_values",
    "validate_spec",
]
