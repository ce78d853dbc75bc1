"""Layer-3 evaluation: ranking risks per object and optimizing worlds.

An object is charged with every disruption element it effectively
participates in, as long as that element can fire in at least one world.
Its risk value in a configuration is the impact-weighted sum of those
elements' risk probabilities; the operators below rank elements, extremize
the risk value over a configuration set, and report the optima.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .conditions import CAnd, CFalse, CNot, COr, CProp, CTrue, Cond, eval_cond
from .enumspace import BitSpace, scenario_prob_chunk
from .errors import EmptyParticipationError, QueryError
from .layer1 import DEFAULT_LIMITS
from .layer2 import best_attack_scenario, rho
from .limits import Limits
from .logic import LAtom
from .model import (ATTACK, FAULT, Attribution, Dog, GateKind,
                    effective_participants, relevant_props)


@dataclass(frozen=True)
class ConfigSet:
    """An intensionally represented set of configurations.

    ``fixed`` pins some properties; the free ones range over all values.
    Iteration is binary counting over the free properties in sorted order,
    the last one flipping fastest, so the all-false assignment comes first.
    """

    props: tuple[str, ...]
    fixed: Mapping[str, bool] = field(default_factory=dict)
    empty: bool = False

    @property
    def free(self) -> tuple[str, ...]:
        return tuple(p for p in self.props if p not in self.fixed)

    @property
    def size(self) -> int:
        return 0 if self.empty else 1 << len(self.free)

    def __iter__(self) -> Iterator[dict[str, bool]]:
        if self.empty:
            return
        free = self.free
        for bits in itertools.product((False, True), repeat=len(free)):
            config = dict(self.fixed)
            config.update(zip(free, bits))
            yield config

    def first(self) -> dict[str, bool]:
        if self.empty:
            raise QueryError("empty configuration set")
        return dict(self.fixed, **{p: False for p in self.free})

    def contains(self, config: Mapping[str, bool]) -> bool:
        if self.empty:
            return False
        return all(bool(config[p]) == v for p, v in self.fixed.items())


def full_config_set(dog: Dog) -> ConfigSet:
    return ConfigSet(tuple(sorted(dog.properties)))


def restrict_configs(configs: ConfigSet, prop: str, value: bool) -> ConfigSet:
    """Configurations of ``configs`` where ``prop`` equals ``value``.

    Contradicting an earlier restriction empties the set; downstream
    operators report that as a query error.
    """
    if prop not in configs.props:
        raise QueryError(f"unknown property {prop}")
    if configs.empty:
        return configs
    if prop in configs.fixed:
        if configs.fixed[prop] == value:
            return configs
        return ConfigSet(configs.props, dict(configs.fixed), empty=True)
    fixed = dict(configs.fixed)
    fixed[prop] = value
    return ConfigSet(configs.props, fixed)


# ---------------------------------------------------------------------------
# Participation


def _vec_cond(cond: Cond, space: BitSpace, start: int, stop: int,
              base: Mapping[str, bool]):
    if isinstance(cond, CTrue):
        return 1
    if isinstance(cond, CFalse):
        return 0
    if isinstance(cond, CProp):
        if cond.label in space.index:
            return space.column(cond.label, start, stop)
        return int(base[cond.label])
    if isinstance(cond, CNot):
        return 1 - _vec_cond(cond.inner, space, start, stop, base)
    if isinstance(cond, CAnd):
        return (_vec_cond(cond.left, space, start, stop, base)
                & _vec_cond(cond.right, space, start, stop, base))
    if isinstance(cond, COr):
        return (_vec_cond(cond.left, space, start, stop, base)
                | _vec_cond(cond.right, space, start, stop, base))
    raise TypeError(f"not a condition: {cond!r}")


def can_fire(dog: Dog, label: str, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether some scenario and configuration make ``label`` fire.

    The structure function is monotone in the scenario, so only the all-set
    scenario matters; the search ranges over the properties occurring in
    conditions below ``label``.
    """
    side = dog.side_of(label)
    if side is None:
        raise QueryError(f"not a disruption element: {label}")
    tree = dog.tree(side)
    relevant = tuple(sorted(relevant_props(dog, label)))
    limits.check_props(len(relevant), f"activation check for {label}")
    space = BitSpace(relevant)
    base = {p: False for p in dog.properties}
    for start, stop in space.chunks():
        memo: dict[str, object] = {}

        def walk(lab: str):
            if lab in memo:
                return memo[lab]
            node = tree.node(lab)
            if node.gate is GateKind.LEAF:
                fires = 1
            elif node.gate is GateKind.OR:
                fires = 0
                for child in node.children:
                    fires = fires | walk(child)
            else:
                fires = 1
                for child in node.children:
                    fires = fires & walk(child)
            value = fires & _vec_cond(dog.kb.cond_of(lab), space,
                                      start, stop, base)
            memo[lab] = value
            return value

        result = walk(label)
        if isinstance(result, int):
            if result:
                return True
        elif bool(np.any(result)):
            return True
    return False


def participation_set(dog: Dog, obj: str, side: str,
                      limits: Limits = DEFAULT_LIMITS) -> frozenset[str]:
    """Disruption elements of one tree that ``obj`` is on the hook for:
    it participates effectively and the element can actually fire."""
    if obj not in dog.objects:
        raise QueryError(f"unknown object {obj}")
    out = set()
    for label in dog.tree(side).labels:
        if obj in effective_participants(dog, label) and \
                can_fire(dog, label, limits):
            out.add(label)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Risk values


class _RiskCache:
    """Per-element risk probabilities, memoized on the slice of the
    configuration the element's conditions can see."""

    def __init__(self, dog: Dog, attribution: Attribution, limits: Limits):
        self.dog = dog
        self.attribution = attribution
        self.limits = limits
        self._relevant: dict[str, tuple[str, ...]] = {}
        self._cache: dict[tuple, float] = {}

    def element_rho(self, label: str, config: Mapping[str, bool]) -> float:
        if label not in self._relevant:
            self._relevant[label] = tuple(sorted(relevant_props(self.dog, label)))
        key = (label,) + tuple(bool(config[p]) for p in self._relevant[label])
        if key not in self._cache:
            self._cache[key] = rho(self.dog, self.attribution, config,
                                   LAtom(label), self.limits)
        return self._cache[key]


def obj_risk_val(dog: Dog, attribution: Attribution, obj: str,
                 config: Mapping[str, bool],
                 limits: Limits = DEFAULT_LIMITS,
                 cache: _RiskCache | None = None) -> float:
    """Impact-weighted total risk charged to ``obj`` in one configuration."""
    cache = cache or _RiskCache(dog, attribution, limits)
    elems = sorted(participation_set(dog, obj, ATTACK, limits)
                   | participation_set(dog, obj, FAULT, limits))
    return math.fsum(cache.element_rho(a, config) * dog.kb.impact_of(a)
                     for a in elems)


def _extremize(configs: ConfigSet, relevant: set[str], value_of, mode: str
               ) -> tuple[float, dict[str, bool]]:
    """Extremal value over a configuration set, with the first achieving
    configuration in canonical order.

    ``value_of`` may only depend on the ``relevant`` properties, so the
    search walks the projection onto them; the witness is completed with
    all other free properties false, which is exactly the canonically
    first configuration in its fiber.
    """
    free_rel = [p for p in configs.free if p in relevant]
    base = dict(configs.fixed)
    for p in configs.free:
        if p not in relevant:
            base[p] = False
    best_value: float | None = None
    best_config: dict[str, bool] | None = None
    for bits in itertools.product((False, True), repeat=len(free_rel)):
        config = dict(base)
        config.update(zip(free_rel, bits))
        value = value_of(config)
        if best_value is None or (mode == "max" and value > best_value) \
                or (mode == "min" and value < best_value):
            best_value = value
            best_config = config
    assert best_value is not None and best_config is not None
    return best_value, best_config


def most_risky(dog: Dog, attribution: Attribution, obj: str, side: str,
               configs: ConfigSet, limits: Limits = DEFAULT_LIMITS
               ) -> tuple[float, list[str], dict[str, bool], dict[str, float]]:
    """The maximal-risk elements ``obj`` participates in on one side.

    Each element is scored by its best impact-weighted risk probability
    over the configuration set; ties are all reported, sorted by label,
    together with the configuration at which the first winner peaks and
    every contender's score.
    """
    if configs.empty:
        raise QueryError("empty configuration set")
    part = participation_set(dog, obj, side, limits)
    if not part:
        raise EmptyParticipationError(
            f"{obj} does not participate in any {side} element that can fire")
    limits.check_props(len(configs.free), "configuration search")
    cache = _RiskCache(dog, attribution, limits)
    best: dict[str, tuple[float, dict[str, bool]]] = {}
    for label in sorted(part):
        impact = dog.kb.impact_of(label)
        best[label] = _extremize(
            configs, relevant_props(dog, label),
            lambda config: cache.element_rho(label, config) * impact, "max")
    top = max(value for value, _ in best.values())
    winners = [label for label in sorted(part) if best[label][0] == top]
    risks = {label: best[label][0] for label in sorted(part)}
    return top, winners, best[winners[0]][1], risks


def total_risk(dog: Dog, attribution: Attribution, obj: str, mode: str,
               configs: ConfigSet, limits: Limits = DEFAULT_LIMITS
               ) -> tuple[float, dict[str, bool]]:
    """Extremal risk value of ``obj`` over a configuration set, with the
    first configuration (in canonical order) achieving it."""
    if mode not in ("max", "min"):
        raise QueryError(f"unknown total-risk mode {mode!r}")
    if configs.empty:
        raise QueryError("empty configuration set")
    limits.check_props(len(configs.free), "configuration search")
    part = sorted(participation_set(dog, obj, ATTACK, limits)
                  | participation_set(dog, obj, FAULT, limits))
    cache = _RiskCache(dog, attribution, limits)
    relevant: set[str] = set()
    for label in part:
        relevant |= relevant_props(dog, label)
    return _extremize(
        configs, relevant,
        lambda config: math.fsum(
            cache.element_rho(label, config) * dog.kb.impact_of(label)
            for label in part),
        mode)


def optimal_conf(dog: Dog, attribution: Attribution, obj: str,
                 configs: ConfigSet, limits: Limits = DEFAULT_LIMITS
                 ) -> tuple[float, list[dict[str, bool]]]:
    """All configurations minimizing the risk value of ``obj``, in
    canonical order, with the minimum itself."""
    if configs.empty:
        raise QueryError("empty configuration set")
    limits.check_props(len(configs.free), "configuration search")
    part = sorted(participation_set(dog, obj, ATTACK, limits)
                  | participation_set(dog, obj, FAULT, limits))
    cache = _RiskCache(dog, attribution, limits)
    relevant: set[str] = set()
    for label in part:
        relevant |= relevant_props(dog, label)
    free_rel = [p for p in configs.free if p in relevant]
    base = dict(configs.fixed)
    for p in configs.free:
        if p not in relevant:
            base[p] = False
    values: dict[tuple[bool, ...], float] = {}
    for bits in itertools.product((False, True), repeat=len(free_rel)):
        config = dict(base)
        config.update(zip(free_rel, bits))
        values[bits] = math.fsum(
            cache.element_rho(label, config) * dog.kb.impact_of(label)
            for label in part)
    best_value = min(values.values())
    winners = [config for config in configs
               if values[tuple(config[p] for p in free_rel)] == best_value]
    return best_value, winners


def witness_scenario(dog: Dog, attribution: Attribution, label: str,
                     config: Mapping[str, bool],
                     limits: Limits = DEFAULT_LIMITS
                     ) -> dict[str, bool] | None:
    """A scenario showing how ``label`` fires at ``config``: the likeliest
    minimal attack for attack elements, the most probable firing scenario
    for fault elements.  None when the element cannot fire there."""
    if dog.side_of(label) == ATTACK:
        return best_attack_scenario(dog, attribution, config, LAtom(label),
                                    limits)
    return likely_scenario(dog, attribution, label, config, limits)


def likely_scenario(dog: Dog, attribution: Attribution, label: str,
                    config: Mapping[str, bool],
                    limits: Limits = DEFAULT_LIMITS
                    ) -> dict[str, bool] | None:
    """The most probable scenario of ``label``'s own tree that makes it
    fire, or None when it never does.  Ties resolve to the lowest
    enumeration index, which prefers fewer fired events."""
    side = dog.side_of(label)
    if side is None:
        raise QueryError(f"not a disruption element: {label}")
    tree = dog.tree(side)
    dims = tuple(sorted(tree.leaves))
    limits.check_leaves(len(dims), f"scenario search for {label}")
    space = BitSpace(dims)
    probs = np.array([attribution.of(l) for l in dims], dtype=np.float64)
    best_prob = -1.0
    best_index: int | None = None
    base = dict(config)
    for start, stop in space.chunks():
        memo: dict[str, object] = {}

        def walk(lab: str):
            if lab in memo:
                return memo[lab]
            node = tree.node(lab)
            if node.gate is GateKind.LEAF:
                fires = space.column(lab, start, stop)
            elif node.gate is GateKind.OR:
                fires = 0
                for child in node.children:
                    fires = fires | walk(child)
            else:
                fires = 1
                for child in node.children:
                    fires = fires & walk(child)
            if not eval_cond(dog.kb.cond_of(lab), base):
                fires = 0
            memo[lab] = fires
            return fires

        sat = walk(label)
        if isinstance(sat, int):
            sat = np.full(stop - start, sat, dtype=np.uint8)
        hits = np.nonzero(sat)[0]
        if hits.size == 0:
            continue
        weights = scenario_prob_chunk(start, stop, probs)[hits]
        local_best = int(np.argmax(weights))
        if weights[local_best] > best_prob:
            best_prob = float(weights[local_best])
            best_index = int(hits[local_best]) + start
    if best_index is None:
        return None
    return space.point(best_index)
