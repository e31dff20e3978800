from __future__ import annotations

import os

from .errors import DomainError


def term_ceiling(default: int) -> int:
    """Series term ceiling, overridable through THERMORATE_MAX_TERMS."""
    raw = os.environ.get("THERMORATE_MAX_TERMS")
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"THERMORATE_MAX_TERMS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"THERMORATE_MAX_TERMS must be a positive integer, got {raw!r}")
    return value
