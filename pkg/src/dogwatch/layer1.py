"""Layer-1 evaluation: Boolean queries about one fixed world.

A layer-1 model is a disruption graph together with a risk scenario (bits
for every basic event of both trees) and a configuration (bits for every
property).  Formulas ask whether elements fire, combine answers with
negation and conjunction, rewrite the world through evidence, and test
scenario minimality with MRS.

Scenario spaces are enumerated as numpy bit arrays; evidence on an
intermediate element switches the evaluation context to a pruned graph, so
different subformulas may see different graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .conditions import eval_cond
from .enumspace import BitSpace, minimal_masks
from .errors import QueryError
from .limits import Limits
from .logic import (FormulaL1, LAnd, LAtom, LConst, LEvidence, LMrs, LNot,
                    l1_atoms, l1_contains_mrs, l1_nested_mrs)
from .model import Dog, GateKind
from .ops import (default_config, default_scenario, eval_element, is_module,
                  prune_to_module)

DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class ModelL1:
    """A fully specified world: graph, risk scenario, configuration."""

    dog: Dog
    scenario: Mapping[str, bool]
    config: Mapping[str, bool]


def ambient_model(dog: Dog) -> ModelL1:
    """The neutral world: nothing fired, every property false."""
    return ModelL1(dog, default_scenario(dog), default_config(dog))


def evidence_scope_check(dog: Dog, target: str, inner: FormulaL1) -> None:
    """Reject evidence on an intermediate element when the subformula still
    mentions anything strictly below it; the pruned graph could not give
    those atoms a meaning."""
    side = dog.side_of(target)
    if side is None:
        return
    tree = dog.tree(side)
    if tree.node(target).gate is GateKind.LEAF:
        return
    below = (tree.descendants(target) - {target}) & l1_atoms(inner)
    if below:
        raise QueryError(
            f"evidence on {target} conflicts with its descendants "
            f"{', '.join(sorted(below))} used in the same formula")


def apply_evidence(m: ModelL1, target: str, value: bool) -> ModelL1:
    """The world after forcing ``target`` to ``value``.

    Basic events flip their scenario bit, properties their configuration
    bit.  An intermediate element must be a module of its tree; its subtree
    is pruned away and the element becomes a basic event fixed to ``value``.
    """
    dog = m.dog
    if dog.is_property(target):
        config = dict(m.config)
        config[target] = value
        return ModelL1(dog, m.scenario, config)
    side = dog.side_of(target)
    if side is None:
        raise QueryError(f"unknown evidence target {target}")
    if dog.tree(side).node(target).gate is GateKind.LEAF:
        scenario = dict(m.scenario)
        scenario[target] = value
        return ModelL1(dog, scenario, m.config)
    if not is_module(dog, target):
        raise QueryError(
            f"evidence on {target} needs a module: some element outside its "
            f"subtree shares a part of it")
    pruned = prune_to_module(dog, target)
    scenario = {leaf: bool(m.scenario.get(leaf, False))
                for leaf in pruned.risk_leaves}
    scenario[target] = value
    return ModelL1(pruned, scenario, m.config)


def eval_l1(m: ModelL1, phi: FormulaL1,
            limits: Limits = DEFAULT_LIMITS) -> bool:
    """Truth value of ``phi`` in world ``m``."""
    if l1_nested_mrs(phi):
        raise QueryError("MRS cannot appear inside another MRS")
    return _sat(m, phi, limits)


def _sat(m: ModelL1, phi: FormulaL1, limits: Limits) -> bool:
    if isinstance(phi, LConst):
        return phi.value
    if isinstance(phi, LAtom):
        label = phi.label
        if m.dog.is_property(label):
            return bool(m.config[label])
        if m.dog.is_element(label):
            return eval_element(m.dog, m.scenario, m.config, label)
        raise QueryError(f"unknown atom {label}")
    if isinstance(phi, LNot):
        return not _sat(m, phi.inner, limits)
    if isinstance(phi, LAnd):
        return _sat(m, phi.left, limits) and _sat(m, phi.right, limits)
    if isinstance(phi, LEvidence):
        evidence_scope_check(m.dog, phi.target, phi.inner)
        return _sat(apply_evidence(m, phi.target, phi.value), phi.inner, limits)
    if isinstance(phi, LMrs):
        space, masks = _min_sat_masks(m.dog, dict(m.config), phi.inner, limits)
        current = space.mask_of({leaf: bool(m.scenario.get(leaf, False))
                                 for leaf in space.dims})
        return current in set(int(x) for x in masks)
    raise TypeError(f"not a layer-1 formula: {phi!r}")


def min_sat_set(dog: Dog, config: Mapping[str, bool], phi: FormulaL1,
                limits: Limits = DEFAULT_LIMITS) -> list[dict[str, bool]]:
    """The minimal risk scenarios satisfying ``phi`` under ``config``.

    A scenario is minimal when no strict subset of its fired events still
    satisfies the formula.  Scenarios come back totally ordered: each is
    read as the sorted tuple of its fired labels and the tuples are
    compared lexicographically.
    """
    if l1_contains_mrs(phi):
        raise QueryError("most-risky-scenario bodies must be MRS-free")
    space, masks = _min_sat_masks(dog, dict(config), phi, limits)
    scenarios = []
    for mask in masks:
        point = space.point(int(mask))
        fired = tuple(sorted(d for d, v in point.items() if v))
        scenarios.append((fired, {leaf: point[leaf] for leaf in dog.risk_leaves}))
    scenarios.sort(key=lambda item: item[0])
    return [assignment for _, assignment in scenarios]


# ---------------------------------------------------------------------------
# Vectorized evaluation core


class _Ctx:
    """Evaluation context for one formula subtree.

    Evidence rewrites the context: property evidence changes ``config``,
    leaf evidence pins a bit in ``forced``, module evidence swaps ``dog``
    for a pruned graph.  ``key`` identifies the context for memoization.
    """

    __slots__ = ("dog", "config", "forced", "limits", "key")

    def __init__(self, dog: Dog, config: dict[str, bool],
                 forced: dict[str, bool], limits: Limits):
        self.dog = dog
        self.config = config
        self.forced = forced
        self.limits = limits
        self.key = (id(dog),
                    tuple(sorted(config.items())),
                    tuple(sorted(forced.items())))

    def with_config(self, prop: str, value: bool) -> "_Ctx":
        config = dict(self.config)
        config[prop] = value
        return _Ctx(self.dog, config, self.forced, self.limits)

    def with_forced(self, leaf: str, value: bool) -> "_Ctx":
        forced = dict(self.forced)
        forced[leaf] = value
        return _Ctx(self.dog, self.config, forced, self.limits)

    def with_pruned(self, target: str, value: bool) -> "_Ctx":
        pruned = prune_to_module(self.dog, target)
        surviving = set(pruned.risk_leaves)
        forced = {k: v for k, v in self.forced.items() if k in surviving}
        forced[target] = value
        return _Ctx(pruned, self.config, forced, self.limits)


def _vec_formula(ctx: _Ctx, phi: FormulaL1, space: BitSpace,
                 start: int, stop: int, memo: dict):
    """Truth values of ``phi`` over scenario indices [start, stop).

    Returns a uint8 array or a plain 0/1 int when the value is uniform.
    """
    if isinstance(phi, LConst):
        return 1 if phi.value else 0
    if isinstance(phi, LAtom):
        label = phi.label
        if ctx.dog.is_property(label):
            if label not in ctx.config:
                raise QueryError(f"unknown atom {label}")
            return int(ctx.config[label])
        if ctx.dog.is_element(label):
            return _vec_element(ctx, label, space, start, stop, memo)
        raise QueryError(f"unknown atom {label}")
    if isinstance(phi, LNot):
        return 1 - _vec_formula(ctx, phi.inner, space, start, stop, memo)
    if isinstance(phi, LAnd):
        left = _vec_formula(ctx, phi.left, space, start, stop, memo)
        if isinstance(left, int) and left == 0:
            return 0
        return left & _vec_formula(ctx, phi.right, space, start, stop, memo)
    if isinstance(phi, LEvidence):
        target = phi.target
        dog = ctx.dog
        if dog.is_property(target):
            sub = ctx.with_config(target, phi.value)
        elif dog.is_element(target):
            side = dog.side_of(target)
            if dog.tree(side).node(target).gate is GateKind.LEAF:
                sub = ctx.with_forced(target, phi.value)
            else:
                evidence_scope_check(dog, target, phi.inner)
                if not is_module(dog, target):
                    raise QueryError(
                        f"evidence on {target} needs a module: some element "
                        f"outside its subtree shares a part of it")
                sub = ctx.with_pruned(target, phi.value)
        else:
            raise QueryError(f"unknown evidence target {target}")
        return _vec_formula(sub, phi.inner, space, start, stop, memo)
    if isinstance(phi, LMrs):
        inner_space, masks = _min_sat_masks(ctx.dog, ctx.config, phi.inner,
                                            ctx.limits)
        # Rebuild each point's scenario as the inner space sees it: forced
        # bits win, everything else comes from the enumeration index.
        idx = np.zeros(stop - start, dtype=np.int64)
        for i, dim in enumerate(inner_space.dims):
            if dim in ctx.forced:
                if ctx.forced[dim]:
                    idx |= 1 << i
            elif dim in space.index:
                idx |= space.column(dim, start, stop).astype(np.int64) << i
        return np.isin(idx, masks).astype(np.uint8)
    raise TypeError(f"not a layer-1 formula: {phi!r}")


def _vec_element(ctx: _Ctx, label: str, space: BitSpace,
                 start: int, stop: int, memo: dict):
    key = (ctx.key, label)
    if key in memo:
        return memo[key]
    tree = ctx.dog.tree(ctx.dog.side_of(label))
    node = tree.node(label)
    if node.gate is GateKind.LEAF:
        if label in ctx.forced:
            fires = int(ctx.forced[label])
        elif label in space.index:
            fires = space.column(label, start, stop)
        else:
            raise QueryError(f"basic event {label} outside the enumerated scope")
    elif node.gate is GateKind.OR:
        fires = 0
        for child in node.children:
            fires = fires | _vec_element(ctx, child, space, start, stop, memo)
    else:
        fires = 1
        for child in node.children:
            fires = fires & _vec_element(ctx, child, space, start, stop, memo)
    if not eval_cond(ctx.dog.kb.cond_of(label), ctx.config):
        fires = 0
    memo[key] = fires
    return fires


def _min_sat_masks(dog: Dog, config: dict[str, bool], phi: FormulaL1,
                   limits: Limits) -> tuple[BitSpace, np.ndarray]:
    """Minimal satisfying scenario masks of ``phi`` over the graph's own
    risk leaves (sorted), under a fixed configuration."""
    space = BitSpace(tuple(sorted(dog.risk_leaves)))
    limits.check_leaves(len(space), "scenario minimality search")
    ctx = _Ctx(dog, config, {}, limits)
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
