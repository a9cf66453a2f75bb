"""Exception types. Each carries a stable ``code`` string used by the CLI."""

from __future__ import annotations

from typing import Any


class BiparcelError(Exception):
    code = "error"

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class InvalidArgument(BiparcelError):
    code = "invalid-argument"


class UndefinedComposite(BiparcelError):
    code = "undefined-composite"


class InvalidFunctor(BiparcelError):
    code = "invalid-functor"


class InvalidCocycle(BiparcelError):
    code = "invalid-cocycle"


class InvalidSector(BiparcelError):
    code = "invalid-sector"


class InadmissibleColoring(BiparcelError):
    code = "inadmissible-coloring"


class InvalidStratification(BiparcelError):
    code = "invalid-stratification"


class NotDirectable(BiparcelError):
    code = "not-directable"


class DeltaInconsistent(BiparcelError):
    code = "delta-inconsistent"


class InapplicableSite(BiparcelError):
    code = "inapplicable-site"


class WouldBreakFlaglikeness(BiparcelError):
    code = "would-break-flaglikeness"


class WouldBreakDirectability(BiparcelError):
    code = "would-break-directability"


class Unsupported(BiparcelError):
    code = "unsupported"


class ValidationFailed(BiparcelError):
    """Raised by constructors when the produced data fails ``validate``."""

    code = "validation-failed"
