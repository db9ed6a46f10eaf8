"""Enumeration size limits.

All limits are expressed as a monoid *degree* ``n + 1`` (the size of the
domain ``[n+1]``).  ``CATALAN_MAX_N`` in the environment overrides the
built-in defaults.
"""

from __future__ import annotations

import os

from .errors import ResourceError, ValidationError

ENV_VAR = "CATALAN_MAX_N"

DEFAULT_MAX_DEGREE = 14
CLI_MAX_DEGREE = 12
DEFAULT_EXHAUSTIVE_DEGREE = 7


def max_degree(default: int = DEFAULT_MAX_DEGREE) -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError(f"{ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValidationError(f"{ENV_VAR} must be >= 1, got {value}")
    return value


def require_degree(degree: int, bound: int | None = None, what: str = "enumeration") -> None:
    limit = max_degree() if bound is None else bound
    if degree > limit:
        raise ResourceError(f"{what} of degree {degree} exceeds the bound {limit} (set {ENV_VAR} to raise it)")
