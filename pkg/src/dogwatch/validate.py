"""Structural and semantic validation of disruption graphs.

``validate`` never raises; it returns a report listing every violated rule
with severity, so tooling can show all problems at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .conditions import cond_atoms
from .model import (ATTACK, FAULT, Attribution, Dog, DisruptionTree, GateKind,
                    ObjectGraph, effective_participants, preconditions)


@dataclass(frozen=True)
class Violation:
    rule: str
    severity: str  # "error" or "warning"
    message: str
    labels: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"rule": self.rule, "severity": self.severity,
                "message": self.message, "labels": list(self.labels)}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(v.severity == "error" for v in self.violations)

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "warning"]

    def add(self, rule: str, severity: str, message: str,
            labels: tuple[str, ...] = ()) -> None:
        self.violations.append(Violation(rule, severity, message, labels))

    def to_json(self) -> dict:
        return {"valid": self.ok,
                "violations": [v.to_json() for v in self.violations]}

    def render(self) -> str:
        if not self.violations:
            return "valid: no problems found"
        lines = [f"{'valid' if self.ok else 'invalid'}: "
                 f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)"]
        for v in self.violations:
            lines.append(f"  [{v.severity}] {v.rule}: {v.message}")
        return "\n".join(lines)


def _check_tree(report: ValidationReport, tree: DisruptionTree, side: str) -> None:
    labels = set()
    for n in tree.nodes:
        if n.label in labels:
            report.add("unique-labels", "error",
                       f"{side} tree declares {n.label} twice", (n.label,))
        labels.add(n.label)
    if tree.root not in labels:
        report.add("tree-root", "error",
                   f"{side} tree root {tree.root} is not declared", (tree.root,))
        return
    for n in tree.nodes:
        if (n.gate is GateKind.LEAF) != (len(n.children) == 0):
            report.add("gate-arity", "error",
                       f"{n.label}: leaves take no children, gates take at least one",
                       (n.label,))
        for c in n.children:
            if c not in labels:
                report.add("tree-edges", "error",
                           f"{n.label} references undeclared child {c}",
                           (n.label, c))
    if tree.parents(tree.root):
        report.add("tree-root", "error",
                   f"{side} tree root {tree.root} has a parent", (tree.root,))
    # Acyclicity via iterative DFS with a colour map.
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {lab: WHITE for lab in labels}
    for start in labels:
        if colour[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        colour[start] = GREY
        while stack:
            lab, idx = stack[-1]
            children = tree.node(lab).children
            if idx < len(children):
                stack[-1] = (lab, idx + 1)
                c = children[idx]
                if c not in colour:
                    continue
                if colour[c] == GREY:
                    report.add("tree-acyclic", "error",
                               f"{side} tree has a cycle through {c}", (c,))
                    return
                if colour[c] == WHITE:
                    colour[c] = GREY
                    stack.append((c, 0))
            else:
                colour[lab] = BLACK
                stack.pop()
    # Local walk instead of tree.descendants: edges may dangle here.
    seen = {tree.root}
    frontier = [tree.root]
    while frontier:
        cur = frontier.pop()
        for c in tree.node(cur).children:
            if c in labels and c not in seen:
                seen.add(c)
                frontier.append(c)
    for lab in sorted(labels - seen):
        report.add("tree-connected", "error",
                   f"{lab} is not reachable from {side} root {tree.root}", (lab,))


def _check_objects(report: ValidationReport, og: ObjectGraph) -> None:
    labels = set()
    for n in og.nodes:
        if n.label in labels:
            report.add("unique-labels", "error",
                       f"object {n.label} declared twice", (n.label,))
        labels.add(n.label)
    if og.root not in labels:
        report.add("object-root", "error",
                   f"object root {og.root} is not declared", (og.root,))
        return
    for n in og.nodes:
        for part in n.parts:
            if part not in labels:
                report.add("object-edges", "error",
                           f"object {n.label} references undeclared part {part}",
                           (n.label, part))
    seen_props: dict[str, str] = {}
    for n in og.nodes:
        for p in n.props:
            if p in seen_props:
                report.add("prop-owner", "error",
                           f"property {p} belongs to both {seen_props[p]} and {n.label}",
                           (p,))
            seen_props[p] = n.label
    # Parthood must be acyclic; reuse the closure and look for self-loops.
    for n in og.nodes:
        if any(n.label in og.closure(part) for part in n.parts
               if part in labels):
            report.add("object-acyclic", "error",
                       f"parthood cycle through {n.label}", (n.label,))
            return
    unreachable = labels - set(og.closure(og.root))
    for lab in sorted(unreachable):
        report.add("object-connected", "error",
                   f"object {lab} is not a transitive part of root {og.root}",
                   (lab,))


def validate(dog: Dog, attribution: Attribution | None = None) -> ValidationReport:
    """Check every well-formedness rule; errors make the graph unusable,
    warnings flag defaulted data."""
    report = ValidationReport()
    _check_tree(report, dog.attack, ATTACK)
    _check_tree(report, dog.fault, FAULT)
    _check_objects(report, dog.objects)

    # One namespace across trees, objects and properties.
    seen: dict[str, str] = {}
    groups = [("attack element", dog.attack.labels),
              ("fault element", dog.fault.labels),
              ("object", dog.objects.labels),
              ("property", dog.objects.properties)]
    for kind, labels in groups:
        for lab in labels:
            # Duplicates within one group are reported by the per-part checks.
            if lab in seen and seen[lab] != kind:
                report.add("unique-labels", "error",
                           f"{lab} is declared as both {seen[lab]} and {kind}",
                           (lab,))
            seen.setdefault(lab, kind)
    if not report.ok:
        return report

    object_labels = set(dog.objects.labels)
    elements = set(dog.elements)
    for lab, objs in dog.kb.participants.items():
        if lab not in elements:
            report.add("kb-refs", "error",
                       f"participants listed for unknown element {lab}", (lab,))
        for o in objs:
            if o not in object_labels:
                report.add("kb-refs", "error",
                           f"{lab} lists unknown participant {o}", (lab, o))
    for lab in dog.kb.impact:
        if lab not in elements:
            report.add("kb-refs", "error",
                       f"impact given for unknown element {lab}", (lab,))
    for lab in dog.kb.cond:
        if lab not in elements:
            report.add("kb-refs", "error",
                       f"condition given for unknown element {lab}", (lab,))
    if not report.ok:
        return report

    for lab in dog.elements:
        impact = dog.kb.impact_of(lab)
        if impact < 0:
            report.add("impact-range", "error",
                       f"{lab} has negative impact {impact}", (lab,))
        if lab not in dog.kb.impact:
            report.add("impact-missing", "warning",
                       f"{lab} has no impact value, defaulting to 0", (lab,))
        pre = preconditions(dog, lab)
        loose = cond_atoms(dog.kb.cond_of(lab)) - pre
        if loose:
            report.add("cond-scope", "error",
                       f"condition of {lab} uses properties outside its "
                       f"preconditions: {', '.join(sorted(loose))}",
                       (lab,) + tuple(sorted(loose)))

    # Participants must not shrink upward: a gate covers its children.
    for side in (ATTACK, FAULT):
        tree = dog.tree(side)
        for n in tree.nodes:
            eff = effective_participants(dog, n.label)
            for c in n.children:
                missing = effective_participants(dog, c) - eff
                if missing:
                    report.add("participant-closure", "error",
                               f"{n.label} does not cover participants of "
                               f"child {c}: {', '.join(sorted(missing))}",
                               (n.label, c))

    if attribution is not None:
        risk_leaves = set(dog.risk_leaves)
        for lab, p in attribution.prob.items():
            if lab not in risk_leaves:
                report.add("prob-refs", "error",
                           f"probability given for non-leaf {lab}", (lab,))
            elif not (0.0 <= p <= 1.0):
                report.add("prob-range", "error",
                           f"{lab} has probability {p} outside [0, 1]", (lab,))
        for lab in dog.risk_leaves:
            if lab not in attribution.prob:
                report.add("prob-missing", "warning",
                           f"leaf {lab} has no probability, defaulting to 0",
                           (lab,))
    return report
