"""Formula ASTs for the three query layers.

Layer 1 speaks about one fixed world: atoms are disruption elements or
properties, combined with negation and conjunction, plus evidence
substitution and the most-risky-scenarios predicate.  Disjunction and
implication are surface sugar and are expanded at construction time, so the
core stays four constructors plus constants.

Layer 2 wraps layer-1 formulas in probability threshold comparisons; layer 3
ranks the disruption elements an object participates in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

# ---------------------------------------------------------------------------
# Layer 1

FormulaL1 = Union["LConst", "LAtom", "LNot", "LAnd", "LEvidence", "LMrs"]


@dataclass(frozen=True)
class LConst:
    value: bool


@dataclass(frozen=True)
class LAtom:
    label: str


@dataclass(frozen=True)
class LNot:
    inner: FormulaL1


@dataclass(frozen=True)
class LAnd:
    left: FormulaL1
    right: FormulaL1


@dataclass(frozen=True)
class LEvidence:
    """``inner`` evaluated in a world where ``target`` is forced to ``value``."""

    inner: FormulaL1
    target: str
    value: bool


@dataclass(frozen=True)
class LMrs:
    """Holds when the model's risk scenario is minimal for ``inner``."""

    inner: FormulaL1


def l_or(left: FormulaL1, right: FormulaL1) -> FormulaL1:
    return LNot(LAnd(LNot(left), LNot(right)))


def l_impl(left: FormulaL1, right: FormulaL1) -> FormulaL1:
    return LNot(LAnd(left, LNot(right)))


def l1_atoms(phi: FormulaL1) -> frozenset[str]:
    if isinstance(phi, LAtom):
        return frozenset((phi.label,))
    if isinstance(phi, LNot):
        return l1_atoms(phi.inner)
    if isinstance(phi, LAnd):
        return l1_atoms(phi.left) | l1_atoms(phi.right)
    if isinstance(phi, LEvidence):
        return l1_atoms(phi.inner) | {phi.target}
    if isinstance(phi, LMrs):
        return l1_atoms(phi.inner)
    return frozenset()


def l1_contains_mrs(phi: FormulaL1) -> bool:
    """True when an MRS occurs anywhere in ``phi``."""
    if isinstance(phi, LMrs):
        return True
    if isinstance(phi, LNot):
        return l1_contains_mrs(phi.inner)
    if isinstance(phi, LAnd):
        return l1_contains_mrs(phi.left) or l1_contains_mrs(phi.right)
    if isinstance(phi, LEvidence):
        return l1_contains_mrs(phi.inner)
    return False


def l1_nested_mrs(phi: FormulaL1) -> bool:
    """True when some MRS occurs inside another MRS."""
    if isinstance(phi, LMrs):
        return l1_contains_mrs(phi.inner)
    if isinstance(phi, LNot):
        return l1_nested_mrs(phi.inner)
    if isinstance(phi, LAnd):
        return l1_nested_mrs(phi.left) or l1_nested_mrs(phi.right)
    if isinstance(phi, LEvidence):
        return l1_nested_mrs(phi.inner)
    return False


# ---------------------------------------------------------------------------
# Layer 2

FormulaL2 = Union["PThreshold", "PNot", "PAnd", "PEvidence"]

COMPARATORS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True)
class PThreshold:
    """Risk probability of ``inner`` compared against ``bound``."""

    inner: FormulaL1
    op: str  # one of COMPARATORS
    bound: float


@dataclass(frozen=True)
class PNot:
    inner: FormulaL2


@dataclass(frozen=True)
class PAnd:
    left: FormulaL2
    right: FormulaL2


@dataclass(frozen=True)
class PEvidence:
    """``inner`` under an attribution where ``target``'s probability is ``value``."""

    inner: FormulaL2
    target: str
    value: float


def p_or(left: FormulaL2, right: FormulaL2) -> FormulaL2:
    return PNot(PAnd(PNot(left), PNot(right)))


def p_impl(left: FormulaL2, right: FormulaL2) -> FormulaL2:
    return PNot(PAnd(left, PNot(right)))


# ---------------------------------------------------------------------------
# Layer 3

FormulaL3 = Union["MostRisky", "TotalRisk", "OptimalConf", "CEvidence"]


@dataclass(frozen=True)
class MostRisky:
    object: str
    side: str  # "attack" or "fault"


@dataclass(frozen=True)
class TotalRisk:
    object: str
    mode: str  # "max" or "min"


@dataclass(frozen=True)
class OptimalConf:
    object: str


@dataclass(frozen=True)
class CEvidence:
    """``inner`` ranged over configurations where ``prop`` is ``value``."""

    inner: FormulaL3
    prop: str
    value: bool


# ---------------------------------------------------------------------------
# Rendering (query text syntax)


def l1_to_text(phi: FormulaL1) -> str:
    return _l1_render(phi, 0)


# Precedence: or = 1, and = 2, not/evidence = 3.
def _l1_render(phi: FormulaL1, level: int) -> str:
    if isinstance(phi, LConst):
        return "1" if phi.value else "0"
    if isinstance(phi, LAtom):
        return phi.label
    if isinstance(phi, LNot):
        return "not " + _l1_render(phi.inner, 3)
    if isinstance(phi, LAnd):
        text = _l1_render(phi.left, 2) + " and " + _l1_render(phi.right, 3)
        return f"({text})" if level > 2 else text
    if isinstance(phi, LEvidence):
        base = _l1_render(phi.inner, 3)
        return f"{base}[{phi.target} -> {1 if phi.value else 0}]"
    if isinstance(phi, LMrs):
        return f"MRS[{_l1_render(phi.inner, 0)}]"
    raise TypeError(f"not a layer-1 formula: {phi!r}")


def _fmt_number(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(x)


def l2_to_text(psi: FormulaL2) -> str:
    return _l2_render(psi, 0)


def _l2_render(psi: FormulaL2, level: int) -> str:
    if isinstance(psi, PThreshold):
        return f"Prob[{l1_to_text(psi.inner)}] {psi.op} {_fmt_number(psi.bound)}"
    if isinstance(psi, PNot):
        return "not " + _l2_render(psi.inner, 3)
    if isinstance(psi, PAnd):
        text = _l2_render(psi.left, 2) + " and " + _l2_render(psi.right, 3)
        return f"({text})" if level > 2 else text
    if isinstance(psi, PEvidence):
        return f"{_l2_render(psi.inner, 3)}[{psi.target} -> {_fmt_number(psi.value)}]"
    raise TypeError(f"not a layer-2 formula: {psi!r}")


def l3_to_text(xi: FormulaL3) -> str:
    if isinstance(xi, MostRisky):
        suffix = "A" if xi.side == "attack" else "F"
        return f"MostRisky{suffix}[{xi.object}]"
    if isinstance(xi, TotalRisk):
        prefix = "Max" if xi.mode == "max" else "Min"
        return f"{prefix}TotalRisk[{xi.object}]"
    if isinstance(xi, OptimalConf):
        return f"OptimalConf[{xi.object}]"
    if isinstance(xi, CEvidence):
        return f"{l3_to_text(xi.inner)}[{xi.prop} -> {1 if xi.value else 0}]"
    raise TypeError(f"not a layer-3 formula: {xi!r}")
