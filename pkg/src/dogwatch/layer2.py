"""Layer-2 evaluation: probabilistic queries over risk scenarios.

Fault events fire independently with their attributed probabilities; the
attacker observes the fault scenario first and then mounts the cheapest
sufficient attack.  The risk probability of a formula is therefore the
fault-scenario expectation of the best minimal attack's probability:

    rho(phi) = sum over fault scenarios f of
        Prob(f) * max over minimal satisfying attack sets A of prod alpha(A)

A tautology needs no attack (the empty set wins with probability 1), an
unsatisfiable formula gets 0 (the maximum over nothing).
"""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .conditions import eval_cond
from .enumspace import BitSpace, mask_bits, minimal_masks, scenario_prob_chunk
from .errors import QueryError
from .layer1 import DEFAULT_LIMITS, _Ctx, _vec_formula, evidence_scope_check
from .limits import Limits
from .logic import (FormulaL1, FormulaL2, LAnd, LAtom, LConst, LEvidence,
                    LMrs, LNot, PAnd, PEvidence, PNot, PThreshold, l1_atoms,
                    l1_nested_mrs, l2_to_text)
from .model import Attribution, Dog, GateKind
from .ops import eval_element, is_module, prune_to_module

EQUALITY_TOLERANCE = 1e-9


def prob_fault_scenario(dog: Dog, attribution: Attribution,
                        scenario: Mapping[str, bool]) -> float:
    """Joint probability of one fault scenario under independent events."""
    out = 1.0
    for leaf in dog.fault.leaves:
        p = attribution.of(leaf)
        out *= p if scenario.get(leaf, False) else 1.0 - p
    return out


def set_transform(dog: Dog, phi: FormulaL1, fault_scenario: Mapping[str, bool],
                  config: Mapping[str, bool]) -> FormulaL1:
    """Specialize ``phi`` to a fixed fault scenario and configuration.

    Fault atoms and properties collapse to constants, attack atoms stay.
    Evidence is folded into the side it talks about: fault evidence updates
    the fault scenario (pruning modules first), property evidence the
    configuration; attack evidence survives into the output.
    """
    fault_scenario = dict(fault_scenario)
    config = dict(config)

    def walk(node: FormulaL1, dog: Dog, fault: dict[str, bool],
             cfg: dict[str, bool]) -> FormulaL1:
        if isinstance(node, LConst):
            return node
        if isinstance(node, LAtom):
            label = node.label
            if dog.is_property(label):
                return LConst(bool(cfg[label]))
            side = dog.side_of(label)
            if side == "fault":
                return LConst(eval_element(dog, fault, cfg, label))
            if side == "attack":
                return node
            raise QueryError(f"unknown atom {label}")
        if isinstance(node, LNot):
            return LNot(walk(node.inner, dog, fault, cfg))
        if isinstance(node, LAnd):
            return LAnd(walk(node.left, dog, fault, cfg),
                        walk(node.right, dog, fault, cfg))
        if isinstance(node, LMrs):
            return LMrs(walk(node.inner, dog, fault, cfg))
        if isinstance(node, LEvidence):
            target = node.target
            if dog.is_property(target):
                sub = dict(cfg)
                sub[target] = node.value
                return walk(node.inner, dog, fault, sub)
            side = dog.side_of(target)
            if side == "attack":
                return LEvidence(walk(node.inner, dog, fault, cfg),
                                 target, node.value)
            if side == "fault":
                if dog.fault.node(target).gate is GateKind.LEAF:
                    sub = dict(fault)
                    sub[target] = node.value
                    return walk(node.inner, dog, sub, cfg)
                evidence_scope_check(dog, target, node.inner)
                if not is_module(dog, target):
                    raise QueryError(
                        f"evidence on {target} needs a module: some element "
                        f"outside its subtree shares a part of it")
                pruned = prune_to_module(dog, target)
                sub = {leaf: bool(fault.get(leaf, False))
                       for leaf in pruned.fault.leaves}
                sub[target] = node.value
                return walk(node.inner, pruned, sub, cfg)
            raise QueryError(f"unknown evidence target {target}")
        raise TypeError(f"not a layer-1 formula: {node!r}")

    return walk(phi, dog, fault_scenario, config)


def _mask_products(masks: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Probability of each attack mask: product of its members' alphas."""
    if alpha.size == 0:
        return np.ones(masks.size, dtype=np.float64)
    bits = mask_bits(masks, alpha.size)
    return np.prod(np.where(bits == 1, alpha[None, :], 1.0), axis=1)


def _minimal_attack_masks(dog: Dog, attribution: Attribution,
                          config: Mapping[str, bool], phi: FormulaL1,
                          limits: Limits) -> tuple[BitSpace, np.ndarray]:
    """Attack space and the minimal satisfying masks of ``phi`` in it.

    ``phi`` may mention attack elements and properties only; the fault side
    must already have been folded away.
    """
    for label in l1_atoms(phi):
        if label in dog.fault:
            raise QueryError(
                f"attack stage formula still mentions fault element {label}")
    space = BitSpace(tuple(sorted(dog.attack.leaves)))
    limits.check_leaves(len(space), "attack search")
    ctx = _Ctx(dog, dict(config), {}, limits)
    found: list[np.ndarray] = []
    for start, stop in space.chunks():
        memo: dict = {}
        sat = _vec_formula(ctx, phi, space, start, stop, memo)
        if isinstance(sat, int):
            if sat:
                found.append(np.arange(start, stop, dtype=np.int64))
            continue
        hits = np.nonzero(sat)[0]
        if hits.size:
            found.append(hits.astype(np.int64) + start)
    if not found:
        return space, np.empty(0, dtype=np.int64)
    return space, minimal_masks(np.concatenate(found))


def max_attack_prob(dog: Dog, attribution: Attribution,
                    config: Mapping[str, bool], phi: FormulaL1,
                    limits: Limits = DEFAULT_LIMITS) -> float:
    """Probability of the likeliest minimal attack satisfying ``phi``."""
    space, masks = _minimal_attack_masks(dog, attribution, config, phi, limits)
    if masks.size == 0:
        return 0.0
    alpha = np.array([attribution.of(l) for l in space.dims], dtype=np.float64)
    return float(_mask_products(masks, alpha).max())


def best_attack_scenario(dog: Dog, attribution: Attribution,
                         config: Mapping[str, bool], phi: FormulaL1,
                         limits: Limits = DEFAULT_LIMITS
                         ) -> dict[str, bool] | None:
    """The likeliest minimal attack satisfying ``phi``, or None when none
    exists.  Ties resolve to the lowest mask in enumeration order."""
    space, masks = _minimal_attack_masks(dog, attribution, config, phi, limits)
    if masks.size == 0:
        return None
    alpha = np.array([attribution.of(l) for l in space.dims], dtype=np.float64)
    best = int(np.argmax(_mask_products(masks, alpha)))
    return space.point(int(masks[best]))


def rho(dog: Dog, attribution: Attribution, config: Mapping[str, bool],
        phi: FormulaL1, limits: Limits = DEFAULT_LIMITS) -> float:
    """Risk probability of ``phi`` under the adaptive-attacker reading."""
    if l1_nested_mrs(phi):
        raise QueryError("MRS cannot appear inside another MRS")
    at_dims = tuple(sorted(dog.attack.leaves))
    ft_dims = tuple(sorted(dog.fault.leaves))
    space = BitSpace(at_dims + ft_dims)
    limits.check_leaves(len(space), "risk probability")
    n_at = len(at_dims)
    row_len = 1 << n_at
    alpha = np.array([attribution.of(l) for l in at_dims], dtype=np.float64)
    fault_probs = np.array([attribution.of(l) for l in ft_dims],
                           dtype=np.float64)
    ctx = _Ctx(dog, dict(config), {}, limits)
    contributions: list[float] = []
    for start, stop in space.chunks(align=row_len):
        memo: dict = {}
        sat = _vec_formula(ctx, phi, space, start, stop, memo)
        if isinstance(sat, int):
            sat_block = np.full(stop - start, sat, dtype=np.uint8)
        else:
            sat_block = sat
        rows = sat_block.reshape(-1, row_len)
        weights = scenario_prob_chunk(start >> n_at,
                                      (start >> n_at) + rows.shape[0],
                                      fault_probs)
        for r in range(rows.shape[0]):
            row = rows[r]
            hits = np.nonzero(row)[0]
            if hits.size == 0:
                continue
            masks = minimal_masks(hits.astype(np.int64))
            best = float(_mask_products(masks, alpha).max())
            contributions.append(weights[r] * best)
    return math.fsum(contributions)


def eval_l2(dog: Dog, attribution: Attribution, config: Mapping[str, bool],
            psi: FormulaL2, limits: Limits = DEFAULT_LIMITS,
            trace: list | None = None) -> bool:
    """Truth value of a probability-threshold formula.

    Equality comparisons tolerate 1e-9 of float noise; the strict and
    non-strict orders compare exactly.  ``trace`` collects one entry per
    threshold actually evaluated: (formula text, probability, verdict).
    """
    if isinstance(psi, PThreshold):
        value = rho(dog, attribution, config, psi.inner, limits)
        verdict = compare_threshold(value, psi.op, psi.bound)
        if trace is not None:
            trace.append((l2_to_text(psi), value, verdict))
        return verdict
    if isinstance(psi, PNot):
        return not eval_l2(dog, attribution, config, psi.inner, limits, trace)
    if isinstance(psi, PAnd):
        left = eval_l2(dog, attribution, config, psi.left, limits, trace)
        right = eval_l2(dog, attribution, config, psi.right, limits, trace)
        return left and right
    if isinstance(psi, PEvidence):
        new_dog, new_attr = apply_prob_evidence(dog, attribution, psi.target,
                                                psi.value, psi.inner)
        return eval_l2(new_dog, new_attr, config, psi.inner, limits, trace)
    raise TypeError(f"not a layer-2 formula: {psi!r}")


def compare_threshold(value: float, op: str, bound: float) -> bool:
    if op == "=":
        return abs(value - bound) <= EQUALITY_TOLERANCE
    if op == "<":
        return value < bound
    if op == "<=":
        return value <= bound
    if op == ">=":
        return value >= bound
    if op == ">":
        return value > bound
    raise QueryError(f"unknown comparator {op!r}")


def apply_prob_evidence(dog: Dog, attribution: Attribution, target: str,
                        value: float,
                        inner: FormulaL2 | FormulaL1 | None = None
                        ) -> tuple[Dog, Attribution]:
    """Model and attribution after re-attributing ``target`` to ``value``.

    Targets must be basic events or module intermediate elements; modules
    are pruned to a fresh basic event carrying the new probability.
    """
    if not 0.0 <= value <= 1.0:
        raise QueryError(f"probability {value} for {target} outside [0, 1]")
    side = dog.side_of(target)
    if side is None:
        raise QueryError(
            f"probabilistic evidence targets basic events or modules, "
            f"{target} is neither")
    if dog.tree(side).node(target).gate is GateKind.LEAF:
        return dog, attribution.override(target, value)
    if inner is not None:
        _scope_check_l2(dog, target, inner)
    if not is_module(dog, target):
        raise QueryError(
            f"evidence on {target} needs a module: some element outside its "
            f"subtree shares a part of it")
    pruned = prune_to_module(dog, target)
    new_attr = attribution.restrict(pruned.risk_leaves).override(target, value)
    return pruned, new_attr


def _scope_check_l2(dog: Dog, target: str,
                    inner: FormulaL2 | FormulaL1) -> None:
    side = dog.side_of(target)
    tree = dog.tree(side)
    below = (tree.descendants(target) - {target}) & _l2_atoms(inner)
    if below:
        raise QueryError(
            f"evidence on {target} conflicts with its descendants "
            f"{', '.join(sorted(below))} used in the same formula")


def _l2_atoms(psi) -> frozenset[str]:
    if isinstance(psi, PThreshold):
        return l1_atoms(psi.inner)
    if isinstance(psi, PNot):
        return _l2_atoms(psi.inner)
    if isinstance(psi, PAnd):
        return _l2_atoms(psi.left) | _l2_atoms(psi.right)
    if isinstance(psi, PEvidence):
        return _l2_atoms(psi.inner) | {psi.target}
    return l1_atoms(psi)
