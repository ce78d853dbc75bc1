"""Enumeration capacity limits.

Scenario spaces grow as 2^leaves and configuration spaces as 2^properties;
the limits below bound both so oversized queries fail fast with a capacity
error instead of hanging.  Defaults can be overridden per process via the
environment (DOGWATCH_MAX_LEAVES, DOGWATCH_MAX_PROPS) or per invocation via
CLI flags.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import CapacityError

DEFAULT_MAX_LEAVES = 24
DEFAULT_MAX_PROPS = 20

ENV_MAX_LEAVES = "DOGWATCH_MAX_LEAVES"
ENV_MAX_PROPS = "DOGWATCH_MAX_PROPS"


@dataclass(frozen=True)
class Limits:
    max_leaves: int = DEFAULT_MAX_LEAVES
    max_props: int = DEFAULT_MAX_PROPS

    def check_leaves(self, count: int, what: str) -> None:
        if count > self.max_leaves:
            raise CapacityError(
                f"{what} enumerates over {count} basic events, "
                f"limit is {self.max_leaves} (raise with --max-leaves "
                f"or {ENV_MAX_LEAVES})")

    def check_props(self, count: int, what: str) -> None:
        if count > self.max_props:
            raise CapacityError(
                f"{what} enumerates over {count} properties, "
                f"limit is {self.max_props} (raise with --max-props "
                f"or {ENV_MAX_PROPS})")


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        value = int(raw)
    except ValueError:
        return fallback
    return value if value > 0 else fallback


def limits_from_env(max_leaves: int | None = None,
                    max_props: int | None = None) -> Limits:
    """Build limits from explicit values, the environment, or defaults,
    in that order of precedence."""
    leaves = max_leaves if max_leaves is not None \
        else _env_int(ENV_MAX_LEAVES, DEFAULT_MAX_LEAVES)
    props = max_props if max_props is not None \
        else _env_int(ENV_MAX_PROPS, DEFAULT_MAX_PROPS)
    return Limits(max_leaves=leaves, max_props=props)
