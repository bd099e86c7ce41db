"""Runtime knobs."""

import os

DEPTH_ENV = "BRATTICE_DEPTH_LIMIT"
DEFAULT_DEPTH_LIMIT = 64


def depth_limit():
    """How many levels a rule-generated diagram may materialize.

    Read from the environment on every call so tests and long-running
    callers can adjust it without re-importing anything.
    """
    raw = os.environ.get(DEPTH_ENV)
    if raw is None:
        return DEFAULT_DEPTH_LIMIT
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{DEPTH_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{DEPTH_ENV} must be positive, got {value}")
    return value
