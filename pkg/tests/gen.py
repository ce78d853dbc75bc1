"""Seeded random generators for models, formulas and worlds.

All generation goes through ``random.Random`` instances handed in by the
caller, so every test failure reproduces from its seed.  Generated models
always satisfy the validator: trees are built bottom-up (children exist
before their gates, so DAGs stay acyclic), participants are repaired upward
to respect closure, and conditions only draw from an element's
preconditions.
"""

from __future__ import annotations

import random

from dogwatch.conditions import (CAnd, CNot, COr, CProp, Cond, TRUE)
from dogwatch.logic import (FormulaL1, LAnd, LAtom, LConst, LEvidence, LMrs,
                            LNot, l_impl, l_or)
from dogwatch.model import (ATTACK, FAULT, Attribution, Dog, DisruptionTree,
                            GateKind, KnowledgeBase, ObjectGraph, ObjectNode,
                            TreeNode, effective_participants, preconditions)


def gen_objects(rng: random.Random, max_objects: int = 4,
                max_props: int = 5) -> ObjectGraph:
    """A rooted parthood DAG; parthood edges only point at younger objects."""
    count = rng.randint(1, max_objects)
    names = [f"O{i}" for i in range(1, count + 1)]
    parts: dict[str, list[str]] = {name: [] for name in names}
    for i in range(1, count):
        parent = names[rng.randrange(i)]
        parts[parent].append(names[i])
        if i >= 2 and rng.random() < 0.2:
            extra = names[rng.randrange(i)]
            if names[i] not in parts[extra]:
                parts[extra].append(names[i])
    props: dict[str, list[str]] = {name: [] for name in names}
    for i in range(1, rng.randint(0, max_props) + 1):
        props[rng.choice(names)].append(f"p{i}")
    nodes = tuple(ObjectNode(name, "", tuple(props[name]), tuple(parts[name]))
                  for name in names)
    return ObjectGraph(names[0], nodes)


def gen_tree(rng: random.Random, side: str, prefix: str,
             max_leaves: int = 6, sharing: bool = True) -> DisruptionTree:
    """A rooted AND/OR DAG built by coalescing a pool of subtrees."""
    n_leaves = rng.randint(1, max_leaves)
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"{prefix}{counter[0]}"

    nodes: list[TreeNode] = [TreeNode(fresh(), GateKind.LEAF)
                             for _ in range(n_leaves)]
    pool = [n.label for n in nodes]
    consumed: list[str] = []
    while len(pool) > 1:
        k = min(len(pool), rng.choice((2, 2, 2, 3)))
        children = [pool.pop(rng.randrange(len(pool))) for _ in range(k)]
        if sharing and consumed and rng.random() < 0.25:
            extra = rng.choice(consumed)
            if extra not in children:
                children.append(extra)
        consumed.extend(children)
        gate = TreeNode(fresh(), rng.choice((GateKind.AND, GateKind.OR)),
                        tuple(children))
        nodes.append(gate)
        pool.append(gate.label)
    return DisruptionTree(side, pool[0], tuple(nodes))


def gen_cond(rng: random.Random, pool: list[str], depth: int = 2) -> Cond:
    if depth == 0 or rng.random() < 0.5:
        return CProp(rng.choice(pool))
    pick = rng.random()
    if pick < 0.4:
        return CNot(gen_cond(rng, pool, depth - 1))
    left = gen_cond(rng, pool, depth - 1)
    right = gen_cond(rng, pool, depth - 1)
    return CAnd(left, right) if pick < 0.7 else COr(left, right)


def gen_dog(rng: random.Random, max_leaves: int = 6, max_props: int = 5,
            max_objects: int = 4, sharing: bool = True,
            with_conds: bool = True) -> tuple[Dog, Attribution]:
    """A valid random model with probabilities on (almost) every leaf."""
    objects = gen_objects(rng, max_objects, max_props)
    attack = gen_tree(rng, ATTACK, "A", max_leaves, sharing)
    fault = gen_tree(rng, FAULT, "F", max_leaves, sharing)

    declared: dict[str, set[str]] = {}
    for tree in (attack, fault):
        for n in tree.nodes:
            declared[n.label] = {o for o in objects.labels
                                 if rng.random() < 0.3}
        # Children come first in node order, so one pass closes participants
        # upward: a gate covers everything its children declared.
        for n in tree.nodes:
            for c in n.children:
                declared[n.label] |= declared[c]

    participants = {lab: frozenset(objs) for lab, objs in declared.items()
                    if objs}
    impact = {}
    for tree in (attack, fault):
        for n in tree.nodes:
            if rng.random() < 0.9:
                impact[n.label] = round(rng.uniform(0.0, 100.0), 1)

    dog = Dog("generated", attack, fault, objects,
              KnowledgeBase(impact, participants, {}))
    cond: dict[str, Cond] = {}
    if with_conds:
        for lab in dog.elements:
            pool = sorted(preconditions(dog, lab))
            if pool and rng.random() < 0.5:
                cond[lab] = gen_cond(rng, pool)
    dog = Dog(dog.name, attack, fault, objects,
              KnowledgeBase(impact, participants, cond))

    prob = {leaf: round(rng.random(), 3) for leaf in dog.risk_leaves
            if rng.random() < 0.95}
    return dog, Attribution(prob)


def gen_classical(rng: random.Random, side: str, max_leaves: int = 6
                  ) -> tuple[Dog, Attribution]:
    """A condition-free, sharing-free, single-interesting-side model whose
    root metric has a textbook bottom-up value."""
    attack = gen_tree(rng, ATTACK, "A", max_leaves if side == ATTACK else 1,
                      sharing=False)
    fault = gen_tree(rng, FAULT, "F", max_leaves if side == FAULT else 1,
                     sharing=False)
    objects = ObjectGraph("O1", (ObjectNode("O1"),))
    dog = Dog("classical", attack, fault, objects, KnowledgeBase())
    prob = {leaf: round(rng.random(), 3) for leaf in dog.risk_leaves}
    return dog, Attribution(prob)


# ---------------------------------------------------------------------------
# Formulas and worlds


def gen_scenario(rng: random.Random, dog: Dog) -> dict[str, bool]:
    return {leaf: rng.random() < 0.5 for leaf in dog.risk_leaves}


def gen_config(rng: random.Random, dog: Dog) -> dict[str, bool]:
    return {p: rng.random() < 0.5 for p in dog.properties}


def gen_l1(rng: random.Random, dog: Dog, depth: int = 3,
           evidence: bool = True, mrs: bool = True) -> FormulaL1:
    """A random layer-1 formula over the model's elements and properties.

    Evidence targets lean heavily on properties and basic events;
    intermediate elements appear rarely, to also exercise the module and
    scope rejections.
    """
    leaves_or_atoms = list(dog.elements) + list(dog.properties)
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < 0.05:
            return LConst(rng.random() < 0.5)
        return LAtom(rng.choice(leaves_or_atoms))
    pick = rng.random()
    if pick < 0.2:
        return LNot(gen_l1(rng, dog, depth - 1, evidence, mrs))
    if pick < 0.45:
        return LAnd(gen_l1(rng, dog, depth - 1, evidence, mrs),
                    gen_l1(rng, dog, depth - 1, evidence, mrs))
    if pick < 0.6:
        return l_or(gen_l1(rng, dog, depth - 1, evidence, mrs),
                    gen_l1(rng, dog, depth - 1, evidence, mrs))
    if pick < 0.7:
        return l_impl(gen_l1(rng, dog, depth - 1, evidence, mrs),
                      gen_l1(rng, dog, depth - 1, evidence, mrs))
    if evidence and pick < 0.9:
        roll = rng.random()
        if roll < 0.45 and dog.properties:
            target = rng.choice(dog.properties)
        elif roll < 0.9:
            target = rng.choice(dog.risk_leaves)
        else:
            target = rng.choice(dog.elements)
        return LEvidence(gen_l1(rng, dog, depth - 1, evidence, mrs),
                         target, rng.random() < 0.5)
    if mrs:
        return LMrs(gen_l1(rng, dog, depth - 1, evidence, mrs=False))
    return LAtom(rng.choice(leaves_or_atoms))


def gen_l1_positive(rng: random.Random, dog: Dog, depth: int = 3) -> FormulaL1:
    """Negation-free formula: atoms joined by conjunction and disjunction."""
    if depth == 0 or rng.random() < 0.4:
        return LAtom(rng.choice(list(dog.elements)))
    if rng.random() < 0.5:
        return LAnd(gen_l1_positive(rng, dog, depth - 1),
                    gen_l1_positive(rng, dog, depth - 1))
    return l_or(gen_l1_positive(rng, dog, depth - 1),
                gen_l1_positive(rng, dog, depth - 1))
