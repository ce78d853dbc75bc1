/**
 * Diagram geometry, kept free of the DOM so it can be tested headless.
 *
 * Both disruption trees and the object graph are rooted DAGs; nodes sit on
 * layers by their longest distance from the root, so an edge always points
 * at a strictly lower layer and shared subtrees stay below every parent.
 */

import { ModelJson, ObjectGraphJson, TreeJson } from "./api.js";

export interface PlacedNode {
  label: string;
  x: number;
  y: number;
  layer: number;
}

export interface PlacedEdge {
  from: string;
  to: string;
}

export interface Layout {
  width: number;
  height: number;
  nodes: PlacedNode[];
  edges: PlacedEdge[];
}

const COLUMN = 130;
const ROW = 90;
const MARGIN = 60;

interface GraphLike {
  root: string;
  children: Map<string, string[]>;
}

function layers(graph: GraphLike): Map<string, number> {
  const depth = new Map<string, number>();
  const place = (label: string, at: number): void => {
    const seen = depth.get(label) ?? -1;
    if (at <= seen) return;
    depth.set(label, at);
    for (const child of graph.children.get(label) ?? []) {
      place(child, at + 1);
    }
  };
  place(graph.root, 0);
  return depth;
}

function arrange(graph: GraphLike): Layout {
  const depth = layers(graph);

  // First-visit order within a layer follows a depth-first walk, which
  // keeps siblings together and shared nodes under their first parent.
  const order: string[] = [];
  const seen = new Set<string>();
  const walk = (label: string): void => {
    if (seen.has(label)) return;
    seen.add(label);
    order.push(label);
    for (const child of graph.children.get(label) ?? []) {
      walk(child);
    }
  };
  walk(graph.root);

  const byLayer = new Map<number, string[]>();
  for (const label of order) {
    const layer = depth.get(label) ?? 0;
    const row = byLayer.get(layer) ?? [];
    row.push(label);
    byLayer.set(layer, row);
  }

  const widest = Math.max(1, ...[...byLayer.values()].map((r) => r.length));
  const width = 2 * MARGIN + (widest - 1) * COLUMN;
  const nodes: PlacedNode[] = [];
  for (const [layer, row] of byLayer) {
    const span = (row.length - 1) * COLUMN;
    row.forEach((label, index) => {
      nodes.push({
        label,
        layer,
        x: width / 2 - span / 2 + index * COLUMN,
        y: MARGIN + layer * ROW,
      });
    });
  }

  const edges: PlacedEdge[] = [];
  for (const [parent, kids] of graph.children) {
    for (const child of kids) {
      edges.push({ from: parent, to: child });
    }
  }

  return {
    width,
    height: 2 * MARGIN + (byLayer.size - 1) * ROW,
    nodes,
    edges,
  };
}

export function layoutTree(tree: TreeJson): Layout {
  return arrange({
    root: tree.root,
    children: new Map(tree.nodes.map((n) => [n.label, n.children])),
  });
}

export function layoutObjects(objects: ObjectGraphJson): Layout {
  return arrange({
    root: objects.root,
    children: new Map(objects.nodes.map((n) => [n.label, n.parts])),
  });
}

export interface ModelLayout {
  attack: Layout;
  fault: Layout;
  objects: Layout;
}

export function layoutModel(model: ModelJson): ModelLayout {
  return {
    attack: layoutTree(model.attack),
    fault: layoutTree(model.fault),
    objects: layoutObjects(model.objects),
  };
}
