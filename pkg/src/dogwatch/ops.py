"""Semantic operations on disruption graphs.

The extended structure function evaluates a disruption element under a
scenario (Boolean assignment to basic events) and a configuration (Boolean
assignment to all properties): a leaf goes off when its scenario bit is set
and its condition holds; a gate combines its children with AND/OR and is
additionally gated by its own condition.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Mapping

from .conditions import eval_cond
from .errors import ModelError
from .model import Dog, DisruptionTree, GateKind, TreeNode, effective_participants


def eval_property(config: Mapping[str, bool], prop: str) -> bool:
    """Value of one property under a total configuration."""
    return bool(config[prop])


def eval_condition(dog: Dog, config: Mapping[str, bool], label: str) -> bool:
    """Value of ``label``'s activation condition under ``config``."""
    return eval_cond(dog.kb.cond_of(label), config)


def eval_element(dog: Dog, scenario: Mapping[str, bool],
                 config: Mapping[str, bool], label: str) -> bool:
    """Extended structure function of element ``label``.

    ``scenario`` must cover the leaves of the element's tree; ``config``
    must be total over the properties.  Shared subtrees are evaluated once.
    """
    side = dog.side_of(label)
    if side is None:
        raise ModelError(f"not a disruption element: {label!r}")
    tree = dog.tree(side)
    memo: dict[str, bool] = {}

    def walk(lab: str) -> bool:
        if lab in memo:
            return memo[lab]
        node = tree.node(lab)
        if node.gate is GateKind.LEAF:
            fires = bool(scenario.get(lab, False))
        elif node.gate is GateKind.OR:
            fires = any(walk(c) for c in node.children)
        else:
            fires = all(walk(c) for c in node.children)
        value = fires and eval_condition(dog, config, lab)
        memo[lab] = value
        return value

    return walk(label)


def is_module(dog: Dog, label: str) -> bool:
    """Whether every path between the strict descendants of ``label`` and
    the rest of its tree passes through ``label``.

    In a DAG this fails exactly when some strict descendant has a parent
    outside the descendant set.  Leaves and the root are always modules.
    """
    side = dog.side_of(label)
    if side is None:
        raise ModelError(f"not a disruption element: {label!r}")
    tree = dog.tree(side)
    desc = tree.descendants(label)
    for d in desc:
        if d == label:
            continue
        for p in tree.parents(d):
            if p not in desc:
                return False
    return True


def prune_to_module(dog: Dog, label: str) -> Dog:
    """Replace the subtree under module ``label`` by a single leaf.

    The strict descendants disappear together with their knowledge-base
    entries; ``label`` keeps its own condition, participants and impact.
    """
    if not is_module(dog, label):
        raise ModelError(f"{label} is not a module of its tree", )
    side = dog.side_of(label)
    tree = dog.tree(side)
    removed = tree.descendants(label) - {label}
    if not removed:
        return dog
    kept_nodes = []
    for n in tree.nodes:
        if n.label in removed:
            continue
        if n.label == label:
            n = TreeNode(n.label, GateKind.LEAF, (), n.display)
        kept_nodes.append(n)
    new_tree = DisruptionTree(side, tree.root, tuple(kept_nodes))
    kb = dog.kb
    new_kb = replace(
        kb,
        impact={k: v for k, v in kb.impact.items() if k not in removed},
        participants={k: v for k, v in kb.participants.items() if k not in removed},
        cond={k: v for k, v in kb.cond.items() if k not in removed},
    )
    new_dog = replace(dog, kb=new_kb)
    if side == "attack":
        return replace(new_dog, attack=new_tree)
    return replace(new_dog, fault=new_tree)


def default_scenario(dog: Dog) -> dict[str, bool]:
    """All basic events intact: nothing has gone off yet."""
    return {leaf: False for leaf in dog.risk_leaves}


def default_config(dog: Dog) -> dict[str, bool]:
    """All properties false; the neutral world for what-if exploration."""
    return {p: False for p in dog.properties}


def check_participant_closure(dog: Dog) -> list[tuple[str, str]]:
    """Pairs (parent, child) where the parent's effective participants do
    not cover the child's.  Empty on well-formed graphs."""
    bad: list[tuple[str, str]] = []
    for side in ("attack", "fault"):
        tree = dog.tree(side)
        for n in tree.nodes:
            parent_eff = effective_participants(dog, n.label)
            for c in n.children:
                if not effective_participants(dog, c) <= parent_eff:
                    bad.append((n.label, c))
    return bad
