"""Build a small model in code, validate it and query it.

A pump fails when either of two seals leaks (fault side) while a saboteur
can also jam it outright (attack side); the seals only matter while the
pump is pressurized.
"""

from dogwatch import (Attribution, Dog, DisruptionTree, GateKind,
                      KnowledgeBase, ObjectGraph, ObjectNode, Session,
                      TreeNode, print_model, validate)
from dogwatch.conditions import CProp

attack = DisruptionTree("attack", "Jam", (
    TreeNode("Jam", GateKind.LEAF, display="Saboteur jams the pump"),
))
fault = DisruptionTree("fault", "PumpFails", (
    TreeNode("PumpFails", GateKind.OR, ("SealA", "SealB"),
             display="Pump loses containment"),
    TreeNode("SealA", GateKind.LEAF, display="Primary seal leaks"),
    TreeNode("SealB", GateKind.LEAF, display="Backup seal leaks"),
))
objects = ObjectGraph("Pump", (
    ObjectNode("Pump", "Coolant pump", props=("Pressurized",),
               parts=("Seals",)),
    ObjectNode("Seals", "Seal assembly"),
))
kb = KnowledgeBase(
    impact={"Jam": 80.0, "PumpFails": 200.0, "SealA": 25.0, "SealB": 25.0},
    participants={"Jam": frozenset({"Pump"}),
                  "PumpFails": frozenset({"Pump"}),
                  "SealA": frozenset({"Pump"}),
                  "SealB": frozenset({"Pump"})},
    cond={"SealA": CProp("Pressurized"), "SealB": CProp("Pressurized")},
)
dog = Dog("coolant-pump", attack, fault, objects, kb)
attribution = Attribution({"Jam": 0.02, "SealA": 0.1, "SealB": 0.08})

report = validate(dog, attribution)
print("validation:", "ok" if report.ok else "FAILED")
for violation in report.errors + report.warnings:
    print(" ", violation.render())

print()
print(print_model(dog, attribution))

session = Session(dog, attribution)
for text in ("compute: Prob[PumpFails]",
             "assume:\n  set Pressurized = 1\ncompute: Prob[PumpFails]",
             "compute: MaxTotalRisk[Seals]",
             "computeall: OptimalConf[Pump]"):
    result = session.run_text(text)
    print(f"{text.splitlines()[-1]}  ->  {result.value}")
