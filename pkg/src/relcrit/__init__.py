"""Exact decision procedure for relative square integrability on p-adic symmetric spaces."""

__version__ = "0.1.0"

from .criterion import (  # noqa: E402
    Exponent,
    ExponentFamily,
    casselman_check,
    check_all,
    check_parabolic,
    series_probe,
)
from .involution import build  # noqa: E402
from .presets import golden_exponent_family, preset  # noqa: E402

__all__ = [
    "Exponent",
    "ExponentFamily",
    "build",
    "casselman_check",
    "check_all",
    "check_parabolic",
    "golden_exponent_family",
    "preset",
    "series_probe",
]
