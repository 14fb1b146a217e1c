"""Invariant suites run by ``qboson verify``."""

from qboson.validation.suites import (
    SUITES,
    InvariantValidator,
    ValidationReport,
    ValidationResult,
    main,
    sl2_closed_form,
)

__all__ = [
    "SUITES",
    "InvariantValidator",
    "ValidationReport",
    "ValidationResult",
    "main",
    "sl2_closed_form",
]
