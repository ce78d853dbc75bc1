/**
 * Workbench wiring: fetch the model, draw it, keep the assumption state,
 * compile the form to query text, submit, and log answers. At most one
 * query is in flight; anything that outlives a newer submission is
 * discarded by the sequence gate.
 */

import { ApiClient, ModelJson, SequenceGate } from "./api.js";
import { Assumption, SessionAssumptions } from "./assumptions.js";
import { describeResult } from "./display.js";
import { layoutModel } from "./layout.js";
import {
  Connective, Comparator, FormulaForm, QUERY_KINDS, QueryForm,
  buildQuery, formComplete,
} from "./queryform.js";
import { drawModel, drawPlaceholder, renderResultCard } from "./render.js";

interface FormState {
  kind: QueryForm["kind"];
  atoms: { label: string; negated: boolean }[];
  connective: Connective;
  comparator: Comparator;
  threshold: number;
  object: string;
  side: "attack" | "fault";
  extreme: "max" | "min";
}

function need<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function needSvg(id: string): SVGSVGElement {
  const node = document.getElementById(id);
  if (!(node instanceof SVGSVGElement)) {
    throw new Error(`missing svg #${id}`);
  }
  return node;
}

class Workbench {
  private api: ApiClient;
  private model: ModelJson | null = null;
  private readonly assumptions = new SessionAssumptions();
  private readonly gate = new SequenceGate();
  private inFlight = false;
  private form: FormState = {
    kind: "check",
    atoms: [{ label: "", negated: false }],
    connective: "and",
    comparator: "<",
    threshold: 0.05,
    object: "",
    side: "attack",
    extreme: "max",
  };

  private readonly svg = needSvg("diagram");
  private readonly controls = need<HTMLDivElement>("form-controls");
  private readonly preview = need<HTMLPreElement>("query-preview");
  private readonly submit = need<HTMLButtonElement>("submit");
  private readonly log = need<HTMLDivElement>("log");
  private readonly stickyList = need<HTMLDivElement>("sticky-list");

  constructor() {
    this.api = new ApiClient(
      need<HTMLInputElement>("service-url").value);
  }

  async start(): Promise<void> {
    need<HTMLButtonElement>("connect").addEventListener("click", () => {
      this.api = new ApiClient(need<HTMLInputElement>("service-url").value);
      void this.loadModel();
    });
    need<HTMLButtonElement>("clear-assumptions")
      .addEventListener("click", () => {
        this.assumptions.clear();
        this.refreshAssumptions();
      });
    this.submit.addEventListener("click", () => void this.runQuery());
    await this.loadModel();
  }

  private async loadModel(): Promise<void> {
    try {
      this.model = await this.api.fetchModel();
    } catch {
      this.model = null;
      drawPlaceholder(this.svg,
        "service unreachable; check the URL and connect again");
      return;
    }
    if (this.model.attack.nodes.length === 0
      && this.model.fault.nodes.length === 0) {
      drawPlaceholder(this.svg, "the served model is empty");
      return;
    }
    const first = this.allAtoms()[0] ?? "";
    this.form.atoms = [{ label: first, negated: false }];
    this.form.object = this.model.objects.root;
    this.redraw();
    this.renderForm();
    this.refreshAssumptions();
  }

  private allAtoms(): string[] {
    if (this.model === null) return [];
    const elements = [
      ...this.model.attack.nodes.map((n) => n.label),
      ...this.model.fault.nodes.map((n) => n.label),
    ];
    const props = this.model.objects.nodes.flatMap((n) => n.props);
    return [...elements, ...props];
  }

  private leaves(): string[] {
    if (this.model === null) return [];
    return [...this.model.attack.nodes, ...this.model.fault.nodes]
      .filter((n) => n.gate === "LEAF")
      .map((n) => n.label);
  }

  private redraw(): void {
    if (this.model === null) return;
    drawModel(this.svg, this.model, layoutModel(this.model),
      this.assumptions, {
        onToggleProperty: (label) => this.cycleEvidence(label),
        onToggleLeaf: (label) => this.cycleEvidence(label),
      });
  }

  /** Clicking cycles a target through unpinned, pinned 1, pinned 0. */
  private cycleEvidence(label: string): void {
    const current = this.assumptions.evidenceOn(label);
    this.assumptions.setEvidence(label,
      current === null ? 1 : current === 1 ? 0 : null);
    this.refreshAssumptions();
  }

  private refreshAssumptions(): void {
    this.redraw();
    this.stickyList.replaceChildren();
    for (const line of this.assumptions.lines()) {
      const chip = document.createElement("code");
      chip.className = "sticky-chip";
      chip.textContent = line;
      this.stickyList.appendChild(chip);
    }
    if (this.assumptions.isEmpty()) {
      const none = document.createElement("span");
      none.className = "sticky-none";
      none.textContent = "none: the neutral world";
      this.stickyList.appendChild(none);
    }
    this.renderProbabilityInputs();
    this.refreshPreview();
  }

  private renderProbabilityInputs(): void {
    const host = need<HTMLDivElement>("attributions");
    host.replaceChildren();
    for (const leaf of this.leaves()) {
      const row = document.createElement("label");
      row.className = "attribution-row";
      const text = document.createElement("span");
      text.textContent = leaf;
      const input = document.createElement("input");
      input.type = "number";
      input.min = "0";
      input.max = "1";
      input.step = "0.05";
      input.placeholder = "engine";
      const pinned = this.assumptions.probabilityOn(leaf);
      if (pinned !== null) {
        input.value = String(pinned);
      }
      input.addEventListener("change", () => {
        const raw = input.value.trim();
        const parsed = raw === "" ? null : Number(raw);
        if (parsed !== null && !(parsed >= 0 && parsed <= 1)) {
          input.value = "";
          return;
        }
        this.assumptions.setProbability(leaf, parsed);
        this.refreshAssumptions();
      });
      row.append(text, input);
      host.appendChild(row);
    }
  }

  private currentQuery(): QueryForm | null {
    const f = this.form;
    const formula: FormulaForm = {
      atoms: f.atoms, connective: f.connective,
    };
    const candidate: Partial<QueryForm> =
      f.kind === "check" ? { kind: f.kind, formula }
        : f.kind === "check-prob"
          ? { kind: f.kind, formula, comparator: f.comparator,
              threshold: f.threshold }
          : f.kind === "prob" || f.kind === "mrs"
            ? { kind: f.kind, formula }
            : f.kind === "most-risky"
              ? { kind: f.kind, object: f.object, side: f.side }
              : f.kind === "total-risk"
                ? { kind: f.kind, object: f.object, extreme: f.extreme }
                : { kind: f.kind, object: f.object };
    return formComplete(candidate) ? candidate : null;
  }

  private refreshPreview(): void {
    const query = this.currentQuery();
    if (query === null) {
      this.preview.textContent = "(complete the form to build a query)";
      this.submit.disabled = true;
      return;
    }
    this.preview.textContent = buildQuery(query, this.assumptions);
    this.submit.disabled = this.inFlight;
  }

  private renderForm(): void {
    this.controls.replaceChildren();
    const kind = document.createElement("select");
    for (const { kind: value, title } of QUERY_KINDS) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = title;
      option.selected = value === this.form.kind;
      kind.appendChild(option);
    }
    kind.addEventListener("change", () => {
      this.form.kind = kind.value as QueryForm["kind"];
      this.renderForm();
    });
    this.controls.appendChild(this.labelled("question", kind));

    const usesFormula = ["check", "check-prob", "prob", "mrs"]
      .includes(this.form.kind);
    if (usesFormula) {
      this.renderFormulaEditor();
      if (this.form.kind === "check-prob") {
        this.renderThresholdEditor();
      }
    } else {
      this.renderObjectEditor();
    }
    this.refreshPreview();
  }

  private labelled(text: string, control: HTMLElement): HTMLLabelElement {
    const label = document.createElement("label");
    label.className = "form-row";
    const caption = document.createElement("span");
    caption.textContent = text;
    label.append(caption, control);
    return label;
  }

  private renderFormulaEditor(): void {
    const atoms = document.createElement("div");
    atoms.className = "atoms";
    this.form.atoms.forEach((atom, index) => {
      const row = document.createElement("div");
      row.className = "atom-row";
      const negate = document.createElement("input");
      negate.type = "checkbox";
      negate.checked = atom.negated;
      negate.title = "negate";
      negate.addEventListener("change", () => {
        atom.negated = negate.checked;
        this.refreshPreview();
      });
      const pick = document.createElement("select");
      for (const label of this.allAtoms()) {
        const option = document.createElement("option");
        option.value = label;
        option.textContent = label;
        option.selected = label === atom.label;
        pick.appendChild(option);
      }
      pick.addEventListener("change", () => {
        atom.label = pick.value;
        this.refreshPreview();
      });
      row.append(negate, pick);
      if (this.form.atoms.length > 1) {
        const drop = document.createElement("button");
        drop.type = "button";
        drop.textContent = "×";
        drop.addEventListener("click", () => {
          this.form.atoms.splice(index, 1);
          this.renderForm();
        });
        row.appendChild(drop);
      }
      atoms.appendChild(row);
    });
    const add = document.createElement("button");
    add.type = "button";
    add.textContent = "+ atom";
    add.addEventListener("click", () => {
      this.form.atoms.push({
        label: this.allAtoms()[0] ?? "", negated: false,
      });
      this.renderForm();
    });
    atoms.appendChild(add);
    this.controls.appendChild(this.labelled("over", atoms));

    const connective = document.createElement("select");
    for (const value of ["and", "or", "impl"] as const) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      option.selected = value === this.form.connective;
      connective.appendChild(option);
    }
    connective.addEventListener("change", () => {
      this.form.connective = connective.value as Connective;
      this.refreshPreview();
    });
    this.controls.appendChild(this.labelled("joined by", connective));
  }

  private renderThresholdEditor(): void {
    const comparator = document.createElement("select");
    for (const value of ["<", "<=", "=", ">=", ">"] as const) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      option.selected = value === this.form.comparator;
      comparator.appendChild(option);
    }
    comparator.addEventListener("change", () => {
      this.form.comparator = comparator.value as Comparator;
      this.refreshPreview();
    });
    this.controls.appendChild(this.labelled("compares", comparator));

    const threshold = document.createElement("input");
    threshold.type = "number";
    threshold.min = "0";
    threshold.max = "1";
    threshold.step = "0.01";
    threshold.value = String(this.form.threshold);
    threshold.addEventListener("change", () => {
      this.form.threshold = Number(threshold.value);
      this.refreshPreview();
    });
    this.controls.appendChild(this.labelled("against", threshold));
  }

  private renderObjectEditor(): void {
    const object = document.createElement("select");
    for (const node of this.model?.objects.nodes ?? []) {
      const option = document.createElement("option");
      option.value = node.label;
      option.textContent = `${node.label} (${node.display})`;
      option.selected = node.label === this.form.object;
      object.appendChild(option);
    }
    object.addEventListener("change", () => {
      this.form.object = object.value;
      this.refreshPreview();
    });
    this.controls.appendChild(this.labelled("object", object));

    if (this.form.kind === "most-risky") {
      const side = document.createElement("select");
      for (const value of ["attack", "fault"] as const) {
        const option = document.createElement("option");
        option.value = value;
        option.textContent = `${value} side`;
        option.selected = value === this.form.side;
        side.appendChild(option);
      }
      side.addEventListener("change", () => {
        this.form.side = side.value as "attack" | "fault";
        this.refreshPreview();
      });
      this.controls.appendChild(this.labelled("among", side));
    }
    if (this.form.kind === "total-risk") {
      const extreme = document.createElement("select");
      for (const value of ["max", "min"] as const) {
        const option = document.createElement("option");
        option.value = value;
        option.textContent = value === "max" ? "worst case" : "best case";
        option.selected = value === this.form.extreme;
        extreme.appendChild(option);
      }
      extreme.addEventListener("change", () => {
        this.form.extreme = extreme.value as "max" | "min";
        this.refreshPreview();
      });
      this.controls.appendChild(this.labelled("extreme", extreme));
    }
  }

  private async runQuery(): Promise<void> {
    const query = this.currentQuery();
    if (query === null || this.inFlight) return;
    const text = buildQuery(query, this.assumptions);
    const snapshot = this.assumptions.snapshot();
    const ticket = this.gate.issue();
    this.inFlight = true;
    this.submit.disabled = true;
    try {
      const result = await this.api.query(text);
      if (!this.gate.admit(ticket)) {
        return;
      }
      this.appendLog(text, snapshot, result);
    } catch (error) {
      if (this.gate.admit(ticket)) {
        this.appendLog(text, snapshot, {
          mode: null, layer: null, value: null, witnesses: {},
          diagnostics: [{
            severity: "error",
            message: error instanceof Error
              ? error.message : String(error),
            line: null, column: null,
          }],
          elapsed_ms: 0,
        });
      }
    } finally {
      this.inFlight = false;
      this.refreshPreview();
    }
  }

  private appendLog(text: string, snapshot: Assumption[],
    result: Parameters<typeof describeResult>[0]): void {
    const card = renderResultCard(text, describeResult(result), () => {
      this.assumptions.restore(snapshot);
      this.refreshAssumptions();
    });
    this.log.prepend(card);
  }
}

new Workbench().start().catch((error) => {
  console.error(error);
});
