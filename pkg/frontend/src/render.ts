/**
 * DOM and SVG appliers. Everything here takes data prepared elsewhere
 * (layouts, display models, assumption state) and only touches elements;
 * no risk math, no query-text assembly.
 */

import { ModelJson, TreeJson, TreeNodeJson } from "./api.js";
import { SessionAssumptions } from "./assumptions.js";
import { DisplayModel, diagnosticText } from "./display.js";
import { Layout, ModelLayout } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface DiagramHandlers {
  onToggleProperty: (label: string) => void;
  onToggleLeaf: (label: string) => void;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string>): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function nodeTooltip(node: TreeNodeJson): string {
  const parts = [`${node.label}: ${node.display}`];
  if (node.cond !== null) {
    parts.push(`cond: ${node.cond}`);
  }
  if (node.impact !== null) {
    parts.push(`impact: ${node.impact}`);
  }
  if (node.prob !== null) {
    parts.push(`prob: ${node.prob}`);
  }
  if (node.effective_participants.length > 0) {
    parts.push(`participants: ${node.effective_participants.join(", ")}`);
  }
  return parts.join("\n");
}

function drawTree(group: SVGGElement, tree: TreeJson, layout: Layout,
  title: string, assumptions: SessionAssumptions,
  handlers: DiagramHandlers): void {
  const byLabel = new Map(tree.nodes.map((n) => [n.label, n]));
  const placed = new Map(layout.nodes.map((n) => [n.label, n]));

  group.appendChild(Object.assign(
    svgEl("text", { x: "12", y: "24", class: "diagram-title" }),
    { textContent: title }));

  for (const edge of layout.edges) {
    const from = placed.get(edge.from);
    const to = placed.get(edge.to);
    if (from === undefined || to === undefined) continue;
    group.appendChild(svgEl("line", {
      x1: String(from.x), y1: String(from.y + 18),
      x2: String(to.x), y2: String(to.y - 18),
      class: "edge",
    }));
  }

  for (const spot of layout.nodes) {
    const node = byLabel.get(spot.label);
    if (node === undefined) continue;
    const pinned = assumptions.evidenceOn(node.label);
    const g = svgEl("g", {
      class: `node gate-${node.gate.toLowerCase()}`
        + (pinned === null ? "" : ` pinned pinned-${pinned}`),
      transform: `translate(${spot.x}, ${spot.y})`,
    });
    g.appendChild(svgEl("rect", {
      x: "-52", y: "-18", width: "104", height: "36", rx: "6",
    }));
    g.appendChild(Object.assign(
      svgEl("text", { y: "-2", class: "node-label" }),
      { textContent: node.label }));
    g.appendChild(Object.assign(
      svgEl("text", { y: "13", class: "node-kind" }),
      {
        textContent: node.gate === "LEAF"
          ? (pinned === null ? "leaf" : `leaf = ${pinned}`)
          : node.gate,
      }));
    if (node.effective_participants.length > 0) {
      const badge = svgEl("g", { class: "badge" });
      badge.appendChild(svgEl("circle", { cx: "52", cy: "-18", r: "9" }));
      badge.appendChild(Object.assign(
        svgEl("text", { x: "52", y: "-14.5", class: "badge-count" }),
        { textContent: String(node.effective_participants.length) }));
      g.appendChild(badge);
    }
    g.appendChild(Object.assign(document.createElementNS(SVG_NS, "title"),
      { textContent: nodeTooltip(node) }));
    if (node.gate === "LEAF") {
      g.addEventListener("click", () => handlers.onToggleLeaf(node.label));
    }
    group.appendChild(g);
  }
}

function drawObjects(group: SVGGElement, model: ModelJson, layout: Layout,
  assumptions: SessionAssumptions, handlers: DiagramHandlers): void {
  const byLabel = new Map(model.objects.nodes.map((n) => [n.label, n]));
  const placed = new Map(layout.nodes.map((n) => [n.label, n]));

  group.appendChild(Object.assign(
    svgEl("text", { x: "12", y: "24", class: "diagram-title" }),
    { textContent: "objects" }));

  for (const edge of layout.edges) {
    const from = placed.get(edge.from);
    const to = placed.get(edge.to);
    if (from === undefined || to === undefined) continue;
    const line = svgEl("line", {
      x1: String(from.x), y1: String(from.y + 26),
      x2: String(to.x), y2: String(to.y - 26),
      class: "edge parthood",
      "marker-end": "url(#part-arrow)",
    });
    line.appendChild(Object.assign(
      document.createElementNS(SVG_NS, "title"),
      { textContent: `${edge.to} is part of ${edge.from}` }));
    group.appendChild(line);
  }

  for (const spot of layout.nodes) {
    const node = byLabel.get(spot.label);
    if (node === undefined) continue;
    const g = svgEl("g", {
      class: "object",
      transform: `translate(${spot.x}, ${spot.y})`,
    });
    g.appendChild(svgEl("rect", {
      x: "-56", y: "-26", width: "112", height: "52", rx: "10",
    }));
    g.appendChild(Object.assign(
      svgEl("text", { y: "-10", class: "node-label" }),
      { textContent: node.label }));
    node.props.forEach((prop, index) => {
      const pinned = assumptions.evidenceOn(prop);
      const chip = svgEl("text", {
        y: String(8 + index * 13),
        class: "prop-chip" + (pinned === null ? "" : ` pinned-${pinned}`),
      });
      chip.textContent = pinned === null ? prop : `${prop} = ${pinned}`;
      chip.appendChild(Object.assign(
        document.createElementNS(SVG_NS, "title"),
        { textContent: `toggle evidence on ${prop}` }));
      chip.addEventListener("click", (event) => {
        event.stopPropagation();
        handlers.onToggleProperty(prop);
      });
      g.appendChild(chip);
    });
    g.appendChild(Object.assign(document.createElementNS(SVG_NS, "title"),
      { textContent: `${node.label}: ${node.display}` }));
    group.appendChild(g);
  }
}

/** Redraws the whole diagram: attack and fault trees plus the object graph
 * side by side, with parthood arrows and participation badges. */
export function drawModel(svg: SVGSVGElement, model: ModelJson,
  layouts: ModelLayout, assumptions: SessionAssumptions,
  handlers: DiagramHandlers): void {
  svg.replaceChildren();

  const defs = svgEl("defs", {});
  const marker = svgEl("marker", {
    id: "part-arrow", viewBox: "0 0 10 10", refX: "9", refY: "5",
    markerWidth: "7", markerHeight: "7", orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const panels: [string, Layout][] = [
    ["attack tree", layouts.attack],
    ["fault tree", layouts.fault],
    ["objects", layouts.objects],
  ];
  let offset = 0;
  let height = 0;
  for (const [title, layout] of panels) {
    const group = svgEl("g", { transform: `translate(${offset}, 0)` });
    if (title === "objects") {
      drawObjects(group, model, layout, assumptions, handlers);
    } else {
      const tree = title === "attack tree" ? model.attack : model.fault;
      drawTree(group, tree, layout, title, assumptions, handlers);
    }
    svg.appendChild(group);
    offset += layout.width + 40;
    height = Math.max(height, layout.height);
  }
  svg.setAttribute("viewBox", `0 0 ${offset} ${height + 40}`);
  svg.setAttribute("width", String(offset));
  svg.setAttribute("height", String(height + 40));
}

export function drawPlaceholder(svg: SVGSVGElement, message: string): void {
  svg.replaceChildren();
  svg.setAttribute("viewBox", "0 0 600 120");
  svg.appendChild(Object.assign(
    svgEl("text", { x: "24", y: "60", class: "placeholder" }),
    { textContent: message }));
}

function el<K extends keyof HTMLElementTagNameMap>(tag: K, className: string,
  text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderTable(table: { title: string; columns: string[];
  rows: string[][] }): HTMLElement {
  const wrap = el("div", "result-table");
  wrap.appendChild(el("div", "table-title", table.title));
  const tableEl = document.createElement("table");
  const head = tableEl.createTHead().insertRow();
  for (const column of table.columns) {
    head.appendChild(Object.assign(document.createElement("th"),
      { textContent: column }));
  }
  const body = tableEl.createTBody();
  for (const row of table.rows) {
    const tr = body.insertRow();
    for (const cell of row) {
      tr.insertCell().textContent = cell;
    }
  }
  wrap.appendChild(tableEl);
  return wrap;
}

/** One card in the session log: the query as sent, then the answer. */
export function renderResultCard(query: string, display: DisplayModel,
  onBranch: (() => void) | null): HTMLElement {
  const card = el("section", "result-card");

  const pre = el("pre", "query-text", query);
  card.appendChild(pre);

  const headline = el("div", "headline", display.headline);
  headline.title = `raw value: ${display.raw}`;
  if (display.badge !== null) {
    headline.classList.add(display.badge ? "holds" : "fails");
  }
  card.appendChild(headline);

  for (const gauge of display.gauges) {
    const row = el("div", `gauge ${gauge.holds ? "holds" : "fails"}`);
    const bar = el("div", "gauge-bar");
    const fill = el("div", "gauge-fill");
    fill.style.width = `${Math.min(1, gauge.probability) * 100}%`;
    bar.appendChild(fill);
    row.appendChild(el("span", "gauge-label", gauge.formula));
    row.appendChild(bar);
    const value = el("span", "gauge-value", String(gauge.probability));
    value.title = `raw value: ${JSON.stringify(gauge.probability)}`;
    row.appendChild(value);
    card.appendChild(row);
  }

  for (const table of display.tables) {
    card.appendChild(renderTable(table));
  }

  for (const diagnostic of display.diagnostics) {
    card.appendChild(el("div", `diagnostic ${diagnostic.severity}`,
      diagnosticText(diagnostic)));
  }

  if (onBranch !== null) {
    const branch = el("button", "branch", "branch from here");
    branch.type = "button";
    branch.title = "restore the assumptions this query was asked under";
    branch.addEventListener("click", onBranch);
    card.appendChild(branch);
  }
  return card;
}
