"""Two-part universal codes over quantized parameter grids."""

from ._core import (
    Codec,
    Family,
    family_from_json,
    kl_divergence,
    kraft_sum,
    load_family,
    nml_log_sum,
    renyi_divergence,
)

__all__ = [
    "Codec",
    "Family",
    "family_from_json",
    "kl_divergence",
    "kraft_sum",
    "load_family",
    "nml_log_sum",
    "renyi_divergence",
]
