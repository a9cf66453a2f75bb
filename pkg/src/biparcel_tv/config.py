from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_TOLERANCE = 1e-9
TOLERANCE_ENV = "BIPARCEL_TV_TOLERANCE"


def default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return DEFAULT_TOLERANCE
    tol = float(raw)
    if not tol > 0:
        raise ValueError(f"{TOLERANCE_ENV} must be positive")
    return tol


@dataclass(frozen=True)
class Config:
    tolerance: float = DEFAULT_TOLERANCE
    threads: int = 1
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
