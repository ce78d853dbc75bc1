import { describe, expect, test } from "vitest";

import { ObjectGraphJson, TreeJson, TreeNodeJson } from "../src/api.js";
import { layoutObjects, layoutTree } from "../src/layout.js";

function node(label: string, gate: TreeNodeJson["gate"],
  children: string[] = []): TreeNodeJson {
  return {
    label, display: label, gate, children,
    participants: [], effective_participants: [],
    impact: null, cond: null, prob: null,
  };
}

const diamond: TreeJson = {
  root: "R",
  nodes: [
    node("R", "AND", ["G1", "G2"]),
    node("G1", "OR", ["S", "L1"]),
    node("G2", "OR", ["S", "L2"]),
    node("S", "LEAF"),
    node("L1", "LEAF"),
    node("L2", "LEAF"),
  ],
};

describe("tree layout", () => {
  test("places every node exactly once", () => {
    const layout = layoutTree(diamond);
    const labels = layout.nodes.map((n) => n.label).sort();
    expect(labels).toEqual(["G1", "G2", "L1", "L2", "R", "S"]);
  });

  test("edges always point one layer down or more", () => {
    const layout = layoutTree(diamond);
    const layer = new Map(layout.nodes.map((n) => [n.label, n.layer]));
    expect(layout.edges).toHaveLength(6);
    for (const edge of layout.edges) {
      expect(layer.get(edge.to)!).toBeGreaterThan(layer.get(edge.from)!);
    }
  });

  test("a shared child sits below all of its parents", () => {
    const layout = layoutTree(diamond);
    const spot = new Map(layout.nodes.map((n) => [n.label, n]));
    expect(spot.get("S")!.y).toBeGreaterThan(spot.get("G1")!.y);
    expect(spot.get("S")!.y).toBeGreaterThan(spot.get("G2")!.y);
  });

  test("nodes on one layer never collide", () => {
    const layout = layoutTree(diamond);
    const seen = new Set<string>();
    for (const placed of layout.nodes) {
      const key = `${placed.layer}:${placed.x}`;
      expect(seen.has(key)).toBe(false);
      seen.add(key);
    }
  });

  test("geometry stays inside the reported canvas", () => {
    const layout = layoutTree(diamond);
    for (const placed of layout.nodes) {
      expect(placed.x).toBeGreaterThan(0);
      expect(placed.x).toBeLessThan(layout.width);
      expect(placed.y).toBeGreaterThan(0);
      expect(placed.y).toBeLessThanOrEqual(layout.height);
    }
  });

  test("layout is deterministic", () => {
    expect(layoutTree(diamond)).toEqual(layoutTree(diamond));
  });

  test("a single node tree still gets a canvas", () => {
    const layout = layoutTree({ root: "A", nodes: [node("A", "LEAF")] });
    expect(layout.nodes).toHaveLength(1);
    expect(layout.width).toBeGreaterThan(0);
    expect(layout.height).toBeGreaterThan(0);
  });
});

describe("object graph layout", () => {
  const objects: ObjectGraphJson = {
    root: "House",
    nodes: [
      { label: "House", display: "Smart house",
        props: ["Operational_Sprinklers"], parts: ["Door", "Inhab."] },
      { label: "Door", display: "Front door",
        props: ["DiF"], parts: ["Lock"] },
      { label: "Lock", display: "Smart lock",
        props: ["LiL", "LH"], parts: [] },
      { label: "Inhab.", display: "Inhabitant",
        props: ["Inhabitant_Unaware"], parts: [] },
    ],
  };

  test("parts hang under their wholes", () => {
    const layout = layoutObjects(objects);
    const spot = new Map(layout.nodes.map((n) => [n.label, n]));
    expect(spot.get("Door")!.y).toBeGreaterThan(spot.get("House")!.y);
    expect(spot.get("Lock")!.y).toBeGreaterThan(spot.get("Door")!.y);
    expect(layout.edges).toContainEqual({ from: "Door", to: "Lock" });
  });
});
