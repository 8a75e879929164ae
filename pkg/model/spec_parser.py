"""
Reader for the [model] section of a configuration file.

    [model]
    intercept = true
    linear = slope, wetness, eastness, northness
    besag = slope_unit
    besag_edges = units.edges.csv       # optional, else pixel contiguity
    rw1 = mi:20                         # covariate[:bins]
    iid = lithology
    pc_median = 0.1
    pc_median.slope_unit = 0.2          # per-block override
    standardize = true
    scale = true
"""

from pathlib import Path
from typing import Union

from config import INGEST_CONFIG, MODEL_CONFIG
from core.config_file import ConfigDocument, load_config_file

from .exceptions import SpecParseError
from .models import BinnedEffect, ModelSpec

SECTION = "model"
_KNOWN_KEYS = {"intercept", "linear", "besag", "besag_edges", "rw1", "iid", "pc_median",
               "standardize", "scale"}


def _error(document: ConfigDocument, key: str, message: str) -> SpecParseError:
    entry = document.entry(SECTION, key)
    return SpecParseError(f"[{SECTION}] {key}: {message}", document.path, entry.line if entry else None)


def _positive_float(document: ConfigDocument, key: str) -> float:
    raw = document.get(SECTION, key)
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise _error(document, key, f"expected a number, got '{raw}'")
    if not value > 0:
        raise _error(document, key, f"must be positive, got {value}")
    return value


def _binned_effects(document: ConfigDocument):
    effects = []
    for item in document.get_list(SECTION, "rw1"):
        name, _, bins = item.partition(":")
        name = name.strip()
        if not name:
            raise _error(document, "rw1", f"empty covariate name in '{item}'")
        if bins.strip():
            try:
                k = int(bins)
            except ValueError:
                raise _error(document, "rw1", f"bin count must be an integer in '{item}'")
        else:
            k = INGEST_CONFIG["default_bins"]
        if k < 2:
            raise _error(document, "rw1", f"bin count must be at least 2 in '{item}'")
        effects.append(BinnedEffect(covariate=name, bins=k))
    return tuple(effects)


def parse_model_spec(source: Union[ConfigDocument, str, Path]) -> ModelSpec:
    """
    Build a ModelSpec from a parsed document or a configuration file path.

    Raises:
        SpecParseError: Unknown key, bad value or duplicate effect name, with
            the line number of the offending entry
    """
    document = source if isinstance(source, ConfigDocument) else load_config_file(source)
    keys = document.keys(SECTION)
    if not keys and SECTION not in document.sections:
        raise SpecParseError(f"missing [{SECTION}] section", document.path)

    medians = {}
    for key in keys:
        if key.startswith("pc_median."):
            medians[key.split(".", 1)[1]] = _positive_float(document, key)
        elif key not in _KNOWN_KEYS:
            raise _error(document, key, "unknown key")

    pc_median = _positive_float(document, "pc_median") if document.has(SECTION, "pc_median") \
        else MODEL_CONFIG["pc_prior_median"]

    spec_fields = dict(
        intercept=document.get_bool(SECTION, "intercept", True),
        linear_effects=tuple(document.get_list(SECTION, "linear")),
        besag_partition=document.get_str(SECTION, "besag"),
        besag_edges=document.get_str(SECTION, "besag_edges"),
        rw1_effects=_binned_effects(document),
        iid_effects=tuple(document.get_list(SECTION, "iid")),
        pc_prior_median=pc_median,
        standardize=document.get_bool(SECTION, "standardize", True),
        scale=document.get_bool(SECTION, "scale", True),
    )

    # Config keys are case-folded; map overrides back onto the effect names
    random_names = [spec_fields["besag_partition"]] if spec_fields["besag_partition"] else []
    random_names += [e.covariate for e in spec_fields["rw1_effects"]] + list(spec_fields["iid_effects"])
    by_key = {name.lower(): name for name in random_names}
    resolved = {}
    for key, value in medians.items():
        if key not in by_key:
            raise _error(document, f"pc_median.{key}", "not a random effect of this model")
        resolved[by_key[key]] = value

    try:
        return ModelSpec(pc_prior_medians=resolved, **spec_fields)
    except ValueError as exc:
        raise SpecParseError(f"[{SECTION}] {exc}", document.path)

