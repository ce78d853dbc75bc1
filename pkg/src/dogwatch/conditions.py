"""Boolean conditions over object properties.

Conditions guard disruption elements: an element can only go off in worlds
(configurations) where its condition holds.  The expression language is
deliberately tiny: property atoms, negation, conjunction, disjunction and
the constants true/false.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

Cond = Union["CTrue", "CFalse", "CProp", "CNot", "CAnd", "COr"]


@dataclass(frozen=True)
class CTrue:
    pass


@dataclass(frozen=True)
class CFalse:
    pass


@dataclass(frozen=True)
class CProp:
    label: str


@dataclass(frozen=True)
class CNot:
    inner: Cond


@dataclass(frozen=True)
class CAnd:
    left: Cond
    right: Cond


@dataclass(frozen=True)
class COr:
    left: Cond
    right: Cond


TRUE = CTrue()
FALSE = CFalse()


def cond_atoms(cond: Cond) -> frozenset[str]:
    """All property labels mentioned in ``cond``."""
    if isinstance(cond, CProp):
        return frozenset((cond.label,))
    if isinstance(cond, CNot):
        return cond_atoms(cond.inner)
    if isinstance(cond, (CAnd, COr)):
        return cond_atoms(cond.left) | cond_atoms(cond.right)
    return frozenset()


def eval_cond(cond: Cond, config: Mapping[str, bool]) -> bool:
    """Evaluate ``cond`` under a total configuration of the properties."""
    if isinstance(cond, CTrue):
        return True
    if isinstance(cond, CFalse):
        return False
    if isinstance(cond, CProp):
        return bool(config[cond.label])
    if isinstance(cond, CNot):
        return not eval_cond(cond.inner, config)
    if isinstance(cond, CAnd):
        return eval_cond(cond.left, config) and eval_cond(cond.right, config)
    if isinstance(cond, COr):
        return eval_cond(cond.left, config) or eval_cond(cond.right, config)
    raise TypeError(f"not a condition: {cond!r}")


def cond_to_text(cond: Cond) -> str:
    """Render a condition in the model text syntax (``!``, ``&``, ``|``)."""
    return _render(cond, 0)


# Precedence levels: | = 1, & = 2, ! = 3.  Right operands are rendered one
# level tighter so the left-associative reparse rebuilds the same tree.
def _render(cond: Cond, parent_level: int) -> str:
    if isinstance(cond, CTrue):
        return "true"
    if isinstance(cond, CFalse):
        return "false"
    if isinstance(cond, CProp):
        return cond.label
    if isinstance(cond, CNot):
        return "!" + _render(cond.inner, 3)
    if isinstance(cond, CAnd):
        text = _render(cond.left, 2) + " & " + _render(cond.right, 3)
        return f"({text})" if parent_level > 2 else text
    if isinstance(cond, COr):
        text = _render(cond.left, 1) + " | " + _render(cond.right, 2)
        return f"({text})" if parent_level > 1 else text
    raise TypeError(f"not a condition: {cond!r}")
