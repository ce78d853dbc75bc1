"""Core data types for object-oriented disruption graphs.

A disruption graph bundles four parts:

* an attack tree and a fault tree (rooted DAGs of AND/OR gates and leaves),
* an object graph (a rooted parthood DAG whose nodes own Boolean properties),
* a knowledge base attaching impact, participating objects and an activation
  condition to every disruption element.

All labels (tree nodes, objects, properties) share one global namespace.
Instances are frozen and treated as immutable snapshots; every "update"
(evidence, pruning) builds a new instance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .conditions import TRUE, Cond, cond_atoms

ATTACK = "attack"
FAULT = "fault"


class GateKind(enum.Enum):
    LEAF = "LEAF"
    AND = "AND"
    OR = "OR"


@dataclass(frozen=True)
class TreeNode:
    """One disruption element: a gate over children or a basic leaf event."""

    label: str
    gate: GateKind
    children: tuple[str, ...] = ()
    display: str = ""

    def __post_init__(self):
        if not self.display:
            object.__setattr__(self, "display", self.label)


@dataclass(frozen=True)
class DisruptionTree:
    """A rooted DAG of disruption elements (attack or fault side)."""

    side: str  # ATTACK or FAULT
    root: str
    nodes: tuple[TreeNode, ...]

    def __post_init__(self):
        by_label = {n.label: n for n in self.nodes}
        object.__setattr__(self, "_by_label", by_label)
        parents: dict[str, tuple[str, ...]] = {n.label: () for n in self.nodes}
        for n in self.nodes:
            for c in n.children:
                if c in parents:
                    parents[c] = parents[c] + (n.label,)
        object.__setattr__(self, "_parents", parents)

    def node(self, label: str) -> TreeNode:
        return self._by_label[label]

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.nodes)

    @property
    def leaves(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.nodes if n.gate is GateKind.LEAF)

    def parents(self, label: str) -> tuple[str, ...]:
        return self._parents[label]

    def descendants(self, label: str) -> frozenset[str]:
        """``label`` and everything reachable below it."""
        seen: set[str] = set()
        stack = [label]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.node(cur).children)
        return frozenset(seen)


@dataclass(frozen=True)
class ObjectNode:
    label: str
    display: str = ""
    props: tuple[str, ...] = ()
    parts: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.display:
            object.__setattr__(self, "display", self.label)


@dataclass(frozen=True)
class ObjectGraph:
    """Rooted parthood DAG; each property belongs to exactly one object."""

    root: str
    nodes: tuple[ObjectNode, ...]

    def __post_init__(self):
        by_label = {n.label: n for n in self.nodes}
        object.__setattr__(self, "_by_label", by_label)
        owner: dict[str, str] = {}
        for n in self.nodes:
            for p in n.props:
                owner.setdefault(p, n.label)
        object.__setattr__(self, "_owner", owner)

    def node(self, label: str) -> ObjectNode:
        return self._by_label[label]

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.nodes)

    @property
    def properties(self) -> tuple[str, ...]:
        """All property labels, in declaration order."""
        out: list[str] = []
        for n in self.nodes:
            out.extend(n.props)
        return tuple(out)

    def owner(self, prop: str) -> str:
        """The object that declares ``prop``."""
        return self._owner[prop]

    def closure(self, label: str) -> frozenset[str]:
        """``label`` and all its transitive parts."""
        seen: set[str] = set()
        stack = [label]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(self.node(cur).parts)
        return frozenset(seen)

    def closure_props(self, label: str) -> frozenset[str]:
        """Properties owned by ``label`` or any of its transitive parts."""
        out: set[str] = set()
        for o in self.closure(label):
            out.update(self.node(o).props)
        return frozenset(out)


@dataclass(frozen=True)
class KnowledgeBase:
    """Per-element annotations: impact, declared participants, condition.

    Absent entries default to impact 0, no participants and the constant
    true condition.
    """

    impact: Mapping[str, float] = field(default_factory=dict)
    participants: Mapping[str, frozenset[str]] = field(default_factory=dict)
    cond: Mapping[str, Cond] = field(default_factory=dict)

    def impact_of(self, label: str) -> float:
        return self.impact.get(label, 0.0)

    def participants_of(self, label: str) -> frozenset[str]:
        return self.participants.get(label, frozenset())

    def cond_of(self, label: str) -> Cond:
        return self.cond.get(label, TRUE)


@dataclass(frozen=True)
class Attribution:
    """Disruption probabilities for the basic (leaf) events of both trees."""

    prob: Mapping[str, float] = field(default_factory=dict)

    def of(self, label: str) -> float:
        return self.prob.get(label, 0.0)

    def override(self, label: str, value: float) -> "Attribution":
        merged = dict(self.prob)
        merged[label] = value
        return Attribution(merged)

    def restrict(self, labels: Iterable[str]) -> "Attribution":
        keep = set(labels)
        return Attribution({k: v for k, v in self.prob.items() if k in keep})


@dataclass(frozen=True)
class Dog:
    """A full disruption graph: both trees, object graph, knowledge base."""

    name: str
    attack: DisruptionTree
    fault: DisruptionTree
    objects: ObjectGraph
    kb: KnowledgeBase

    def tree(self, side: str) -> DisruptionTree:
        if side == ATTACK:
            return self.attack
        if side == FAULT:
            return self.fault
        raise ValueError(f"unknown tree side: {side!r}")

    def side_of(self, label: str) -> str | None:
        """Which tree a disruption element lives in, or None."""
        if label in self.attack:
            return ATTACK
        if label in self.fault:
            return FAULT
        return None

    def is_element(self, label: str) -> bool:
        return label in self.attack or label in self.fault

    def is_property(self, label: str) -> bool:
        return label in self.objects._owner

    @property
    def elements(self) -> tuple[str, ...]:
        return self.attack.labels + self.fault.labels

    @property
    def risk_leaves(self) -> tuple[str, ...]:
        """Leaves of both trees, attack side first (declaration order)."""
        return self.attack.leaves + self.fault.leaves

    @property
    def properties(self) -> tuple[str, ...]:
        return self.objects.properties

    def with_trees(self, attack: DisruptionTree | None = None,
                   fault: DisruptionTree | None = None) -> "Dog":
        return replace(self, attack=attack or self.attack,
                       fault=fault or self.fault)


def effective_participants(dog: Dog, label: str) -> frozenset[str]:
    """Declared participants of ``label`` closed downward under parthood.

    Parts of a participating object participate too; wholes never join on
    behalf of their parts.
    """
    out: set[str] = set()
    for obj in dog.kb.participants_of(label):
        out.update(dog.objects.closure(obj))
    return frozenset(out)


def preconditions(dog: Dog, label: str) -> frozenset[str]:
    """Properties visible to ``label``: everything owned by its effective
    participants or their parts."""
    out: set[str] = set()
    for obj in effective_participants(dog, label):
        out.update(dog.objects.node(obj).props)
    return frozenset(out)


def relevant_props(dog: Dog, label: str) -> frozenset[str]:
    """Properties that actually occur in conditions below ``label``."""
    tree = dog.tree(dog.side_of(label))
    out: set[str] = set()
    for v in tree.descendants(label):
        out.update(cond_atoms(dog.kb.cond_of(v)))
    return frozenset(out)
