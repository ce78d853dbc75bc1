"""Brute-force reference semantics for the test suite.

Everything here recomputes query answers by exhaustive enumeration: truth
values by recursion, scenario sets by iterating all of them, probabilities
by summing over every fault scenario, rankings by trying every
configuration.  The only things shared with the package are the frozen data
types; pruning, module detection, participation and all arithmetic are
reimplemented so a bug would have to be made twice to go unnoticed.

Products run over labels in sorted order and sums go through math.fsum, so
values that the package compares for exact tie equality come out bit
identical here too.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import replace
from typing import Iterator, Mapping

from dogwatch.conditions import CAnd, CFalse, CNot, COr, CProp, CTrue, Cond
from dogwatch.logic import (FormulaL1, FormulaL2, LAnd, LAtom, LConst,
                            LEvidence, LMrs, LNot, PAnd, PEvidence, PNot,
                            PThreshold)
from dogwatch.model import (ATTACK, FAULT, Attribution, Dog, DisruptionTree,
                            GateKind, TreeNode)

EQ_TOL = 1e-9


class OracleError(Exception):
    """The oracle rejects an input the package should reject too."""


# ---------------------------------------------------------------------------
# Structure plumbing (own walks, no package helpers)


def descendants(tree: DisruptionTree, label: str) -> set[str]:
    seen: set[str] = set()
    stack = [label]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        stack.extend(tree.node(cur).children)
    return seen


def parents_of(tree: DisruptionTree, label: str) -> set[str]:
    return {n.label for n in tree.nodes if label in n.children}


def is_module(dog: Dog, label: str) -> bool:
    tree = dog.tree(dog.side_of(label))
    desc = descendants(tree, label)
    return all(parents_of(tree, d) <= desc for d in desc if d != label)


def prune(dog: Dog, target: str) -> Dog:
    """Collapse module ``target`` to a leaf, dropping its strict subtree."""
    side = dog.side_of(target)
    tree = dog.tree(side)
    removed = descendants(tree, target) - {target}
    if not removed:
        return dog
    kept = []
    for n in tree.nodes:
        if n.label in removed:
            continue
        if n.label == target:
            n = TreeNode(n.label, GateKind.LEAF, (), n.display)
        kept.append(n)
    new_tree = DisruptionTree(side, tree.root, tuple(kept))
    kb = replace(
        dog.kb,
        impact={k: v for k, v in dog.kb.impact.items() if k not in removed},
        participants={k: v for k, v in dog.kb.participants.items()
                      if k not in removed},
        cond={k: v for k, v in dog.kb.cond.items() if k not in removed})
    out = replace(dog, kb=kb)
    if side == ATTACK:
        return replace(out, attack=new_tree)
    return replace(out, fault=new_tree)


def parts_closure(dog: Dog, obj: str) -> set[str]:
    seen: set[str] = set()
    stack = [obj]
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        stack.extend(dog.objects.node(cur).parts)
    return seen


def effective(dog: Dog, label: str) -> set[str]:
    out: set[str] = set()
    for obj in dog.kb.participants_of(label):
        out |= parts_closure(dog, obj)
    return out


# ---------------------------------------------------------------------------
# Layer 1: one world at a time


def cond_holds(cond: Cond, config: Mapping[str, bool]) -> bool:
    if isinstance(cond, CTrue):
        return True
    if isinstance(cond, CFalse):
        return False
    if isinstance(cond, CProp):
        return bool(config[cond.label])
    if isinstance(cond, CNot):
        return not cond_holds(cond.inner, config)
    if isinstance(cond, CAnd):
        return cond_holds(cond.left, config) and cond_holds(cond.right, config)
    if isinstance(cond, COr):
        return cond_holds(cond.left, config) or cond_holds(cond.right, config)
    raise OracleError(f"not a condition: {cond!r}")


def chi(dog: Dog, scenario: Mapping[str, bool], config: Mapping[str, bool],
        label: str, _memo: dict | None = None) -> bool:
    """Extended structure function by direct recursion."""
    memo = _memo if _memo is not None else {}
    if label in memo:
        return memo[label]
    tree = dog.tree(dog.side_of(label))
    node = tree.node(label)
    if node.gate is GateKind.LEAF:
        fires = bool(scenario.get(label, False))
    elif node.gate is GateKind.OR:
        fires = any(chi(dog, scenario, config, c, memo) for c in node.children)
    else:
        fires = all(chi(dog, scenario, config, c, memo) for c in node.children)
    value = fires and cond_holds(dog.kb.cond_of(label), config)
    memo[label] = value
    return value


def atoms(phi: FormulaL1) -> set[str]:
    if isinstance(phi, LAtom):
        return {phi.label}
    if isinstance(phi, LNot):
        return atoms(phi.inner)
    if isinstance(phi, LAnd):
        return atoms(phi.left) | atoms(phi.right)
    if isinstance(phi, LEvidence):
        return atoms(phi.inner) | {phi.target}
    if isinstance(phi, LMrs):
        return atoms(phi.inner)
    return set()


def contains_mrs(phi: FormulaL1) -> bool:
    if isinstance(phi, LMrs):
        return True
    if isinstance(phi, (LNot, LEvidence)):
        return contains_mrs(phi.inner)
    if isinstance(phi, LAnd):
        return contains_mrs(phi.left) or contains_mrs(phi.right)
    return False


def nested_mrs(phi: FormulaL1) -> bool:
    if isinstance(phi, LMrs):
        return contains_mrs(phi.inner)
    if isinstance(phi, (LNot, LEvidence)):
        return nested_mrs(phi.inner)
    if isinstance(phi, LAnd):
        return nested_mrs(phi.left) or nested_mrs(phi.right)
    return False


def sat(dog: Dog, scenario: Mapping[str, bool], config: Mapping[str, bool],
        phi: FormulaL1) -> bool:
    if isinstance(phi, LConst):
        return phi.value
    if isinstance(phi, LAtom):
        if dog.is_property(phi.label):
            return bool(config[phi.label])
        if dog.is_element(phi.label):
            return chi(dog, scenario, config, phi.label)
        raise OracleError(f"unknown atom {phi.label}")
    if isinstance(phi, LNot):
        return not sat(dog, scenario, config, phi.inner)
    if isinstance(phi, LAnd):
        return (sat(dog, scenario, config, phi.left)
                and sat(dog, scenario, config, phi.right))
    if isinstance(phi, LEvidence):
        target, value = phi.target, phi.value
        if dog.is_property(target):
            return sat(dog, scenario, {**config, target: value}, phi.inner)
        side = dog.side_of(target)
        if side is None:
            raise OracleError(f"unknown evidence target {target}")
        if dog.tree(side).node(target).gate is GateKind.LEAF:
            return sat(dog, {**scenario, target: value}, config, phi.inner)
        below = (descendants(dog.tree(side), target) - {target}) & atoms(phi.inner)
        if below:
            raise OracleError(f"evidence on {target} shadows {sorted(below)}")
        if not is_module(dog, target):
            raise OracleError(f"{target} is not a module")
        pruned = prune(dog, target)
        sub = {leaf: bool(scenario.get(leaf, False))
               for leaf in pruned.risk_leaves}
        sub[target] = value
        return sat(pruned, sub, config, phi.inner)
    if isinstance(phi, LMrs):
        fired = frozenset(l for l in dog.risk_leaves
                          if scenario.get(l, False))
        return fired in {frozenset(l for l, v in s.items() if v)
                         for s in min_scenarios(dog, config, phi.inner)}
    raise OracleError(f"not a layer-1 formula: {phi!r}")


def eval_l1(dog: Dog, scenario: Mapping[str, bool],
            config: Mapping[str, bool], phi: FormulaL1) -> bool:
    if nested_mrs(phi):
        raise OracleError("nested MRS")
    return sat(dog, scenario, config, phi)


def assignments(labels: tuple[str, ...]) -> Iterator[dict[str, bool]]:
    """All Boolean assignments, last label flipping fastest."""
    order = sorted(labels)
    for bits in itertools.product((False, True), repeat=len(order)):
        yield dict(zip(order, bits))


def minimal_antichain(sets: list[frozenset[str]]) -> list[frozenset[str]]:
    """Inclusion-minimal members: visiting by rising size, anything
    containing an already kept set is covered."""
    kept: list[frozenset[str]] = []
    for s in sorted(sets, key=len):
        if not any(t <= s for t in kept):
            kept.append(s)
    return kept


def min_scenarios(dog: Dog, config: Mapping[str, bool],
                  phi: FormulaL1) -> list[dict[str, bool]]:
    """Minimal satisfying scenarios, ordered by their sorted fired tuples."""
    if contains_mrs(phi):
        raise OracleError("MRS inside a scenario minimality body")
    sats: list[frozenset[str]] = []
    for scenario in assignments(dog.risk_leaves):
        if sat(dog, scenario, config, phi):
            sats.append(frozenset(l for l, v in scenario.items() if v))
    minimal = sorted(minimal_antichain(sats), key=lambda s: tuple(sorted(s)))
    return [{leaf: leaf in s for leaf in dog.risk_leaves} for s in minimal]


# ---------------------------------------------------------------------------
# Layer 2: probabilities by full enumeration


def scenario_probability(dog: Dog, attribution: Attribution,
                         scenario: Mapping[str, bool]) -> float:
    out = 1.0
    for leaf in sorted(dog.fault.leaves):
        p = attribution.prob.get(leaf, 0.0)
        out *= p if scenario.get(leaf, False) else 1.0 - p
    return out


def _attack_value(dog: Dog, attribution: Attribution,
                  winners: list[frozenset[str]]) -> float:
    best = 0.0
    for aset in winners:
        product = 1.0
        for leaf in sorted(dog.attack.leaves):
            if leaf in aset:
                product *= attribution.prob.get(leaf, 0.0)
        best = max(best, product)
    return best


def rho(dog: Dog, attribution: Attribution, config: Mapping[str, bool],
        phi: FormulaL1) -> float:
    """Risk probability: for every fault scenario, the best minimal attack."""
    if nested_mrs(phi):
        raise OracleError("nested MRS")
    contributions = []
    for fault_bits in assignments(dog.fault.leaves):
        sats = []
        for attack_bits in assignments(dog.attack.leaves):
            scenario = {**attack_bits, **fault_bits}
            if sat(dog, scenario, config, phi):
                sats.append(frozenset(l for l, v in attack_bits.items() if v))
        if not sats:
            continue
        best = _attack_value(dog, attribution, minimal_antichain(sats))
        contributions.append(
            scenario_probability(dog, attribution, fault_bits) * best)
    return math.fsum(contributions)


def threshold_holds(value: float, op: str, bound: float) -> bool:
    if op == "=":
        return abs(value - bound) <= EQ_TOL
    return {"<": value < bound, "<=": value <= bound,
            ">=": value >= bound, ">": value > bound}[op]


def l2_atoms(psi: FormulaL2) -> set[str]:
    if isinstance(psi, PThreshold):
        return atoms(psi.inner)
    if isinstance(psi, PNot):
        return l2_atoms(psi.inner)
    if isinstance(psi, PAnd):
        return l2_atoms(psi.left) | l2_atoms(psi.right)
    if isinstance(psi, PEvidence):
        return l2_atoms(psi.inner) | {psi.target}
    raise OracleError(f"not a layer-2 formula: {psi!r}")


def with_prob_evidence(dog: Dog, attribution: Attribution, target: str,
                       value: float,
                       inner: FormulaL2 | None = None
                       ) -> tuple[Dog, Attribution]:
    if not 0.0 <= value <= 1.0:
        raise OracleError(f"probability {value} outside [0, 1]")
    side = dog.side_of(target)
    if side is None:
        raise OracleError(f"{target} is not a disruption element")
    if dog.tree(side).node(target).gate is GateKind.LEAF:
        return dog, Attribution({**attribution.prob, target: value})
    if inner is not None:
        below = (descendants(dog.tree(side), target) - {target}) & l2_atoms(inner)
        if below:
            raise OracleError(f"evidence on {target} shadows {sorted(below)}")
    if not is_module(dog, target):
        raise OracleError(f"{target} is not a module")
    pruned = prune(dog, target)
    keep = set(pruned.risk_leaves)
    probs = {k: v for k, v in attribution.prob.items() if k in keep}
    probs[target] = value
    return pruned, Attribution(probs)


def eval_l2(dog: Dog, attribution: Attribution, config: Mapping[str, bool],
            psi: FormulaL2) -> bool:
    if isinstance(psi, PThreshold):
        return threshold_holds(rho(dog, attribution, config, psi.inner),
                               psi.op, psi.bound)
    if isinstance(psi, PNot):
        return not eval_l2(dog, attribution, config, psi.inner)
    if isinstance(psi, PAnd):
        left = eval_l2(dog, attribution, config, psi.left)
        right = eval_l2(dog, attribution, config, psi.right)
        return left and right
    if isinstance(psi, PEvidence):
        new_dog, new_attr = with_prob_evidence(dog, attribution, psi.target,
                                               psi.value, psi.inner)
        return eval_l2(new_dog, new_attr, config, psi.inner)
    raise OracleError(f"not a layer-2 formula: {psi!r}")


# ---------------------------------------------------------------------------
# Layer 3: rankings by trying every configuration


def configurations(dog: Dog, fixed: Mapping[str, bool] | None = None
                   ) -> Iterator[dict[str, bool]]:
    """All configurations agreeing with ``fixed``, canonical order: binary
    counting over the sorted free properties, all-false first."""
    fixed = dict(fixed or {})
    free = [p for p in sorted(dog.properties) if p not in fixed]
    for bits in itertools.product((False, True), repeat=len(free)):
        config = dict(fixed)
        config.update(zip(free, bits))
        yield config


def participation(dog: Dog, obj: str, side: str) -> frozenset[str]:
    """Elements of one tree that ``obj`` effectively participates in and
    that fire in at least one world, found by trying all worlds."""
    tree = dog.tree(side)
    out = set()
    for label in tree.labels:
        if obj not in effective(dog, label):
            continue
        fires = any(
            chi(dog, scenario, config, label)
            for config in configurations(dog)
            for scenario in assignments(tree.leaves))
        if fires:
            out.add(label)
    return frozenset(out)


def obj_risk(dog: Dog, attribution: Attribution, obj: str,
             config: Mapping[str, bool]) -> float:
    part = sorted(participation(dog, obj, ATTACK)
                  | participation(dog, obj, FAULT))
    return math.fsum(rho(dog, attribution, config, LAtom(label))
                     * dog.kb.impact_of(label) for label in part)


def most_risky(dog: Dog, attribution: Attribution, obj: str, side: str,
               fixed: Mapping[str, bool] | None = None
               ) -> tuple[float, list[str], dict[str, bool], dict[str, float]]:
    """Max impact-weighted risk per participating element over all admitted
    configurations; returns the top value, all tied winners, the first
    configuration where the first winner peaks, and every score."""
    part = participation(dog, obj, side)
    if not part:
        raise OracleError(f"{obj} participates in nothing on the {side} side")
    best: dict[str, tuple[float, dict[str, bool]]] = {}
    for label in sorted(part):
        impact = dog.kb.impact_of(label)
        top_val: float | None = None
        top_cfg: dict[str, bool] | None = None
        for config in configurations(dog, fixed):
            value = rho(dog, attribution, config, LAtom(label)) * impact
            if top_val is None or value > top_val:
                top_val, top_cfg = value, config
        best[label] = (top_val, top_cfg)
    top = max(value for value, _ in best.values())
    winners = [label for label in sorted(part) if best[label][0] == top]
    risks = {label: best[label][0] for label in sorted(part)}
    return top, winners, best[winners[0]][1], risks


def total_risk(dog: Dog, attribution: Attribution, obj: str, mode: str,
               fixed: Mapping[str, bool] | None = None
               ) -> tuple[float, dict[str, bool]]:
    assert mode in ("max", "min")
    best_val: float | None = None
    best_cfg: dict[str, bool] | None = None
    for config in configurations(dog, fixed):
        value = obj_risk(dog, attribution, obj, config)
        if best_val is None or (mode == "max" and value > best_val) \
                or (mode == "min" and value < best_val):
            best_val, best_cfg = value, config
    return best_val, best_cfg


def optimal_conf(dog: Dog, attribution: Attribution, obj: str,
                 fixed: Mapping[str, bool] | None = None
                 ) -> tuple[float, list[dict[str, bool]]]:
    scored = [(obj_risk(dog, attribution, obj, config), config)
              for config in configurations(dog, fixed)]
    best = min(value for value, _ in scored)
    return best, [config for value, config in scored if value == best]


# ---------------------------------------------------------------------------
# Classical single-tree metrics (tree-shaped, condition-free graphs)


def classical_fault_probability(tree: DisruptionTree,
                                attribution: Attribution) -> float:
    """Bottom-up unreliability under independence; valid on trees only."""
    def walk(label: str) -> float:
        node = tree.node(label)
        if node.gate is GateKind.LEAF:
            return attribution.prob.get(label, 0.0)
        child = [walk(c) for c in node.children]
        if node.gate is GateKind.AND:
            return math.prod(child)
        out = 1.0
        for p in child:
            out *= 1.0 - p
        return 1.0 - out
    return walk(tree.root)


def classical_attack_value(tree: DisruptionTree,
                           attribution: Attribution) -> float:
    """Bottom-up best-attack probability: OR picks the likeliest branch,
    AND needs every branch; valid on trees only."""
    def walk(label: str) -> float:
        node = tree.node(label)
        if node.gate is GateKind.LEAF:
            return attribution.prob.get(label, 0.0)
        child = [walk(c) for c in node.children]
        if node.gate is GateKind.AND:
            return math.prod(child)
        return max(child)
    return walk(tree.root)
