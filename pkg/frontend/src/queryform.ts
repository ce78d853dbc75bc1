/**
 * Query construction: a small form state compiled to query text.
 *
 * The text is shown to the analyst before submission and must always be
 * something the engine parses, so everything here is assembled from model
 * labels and fixed templates; there is no free-text path. Formulas are a
 * flat chain of optionally negated atoms under one connective, which is
 * enough for every workbench interaction and keeps the builder total.
 */

import { SessionAssumptions } from "./assumptions.js";

export type Connective = "and" | "or" | "impl";
export type Comparator = "<" | "<=" | "=" | ">=" | ">";

export interface FormulaForm {
  atoms: { label: string; negated: boolean }[];
  connective: Connective;
}

export type QueryForm =
  | { kind: "check"; formula: FormulaForm }
  | { kind: "check-prob"; formula: FormulaForm; comparator: Comparator;
      threshold: number }
  | { kind: "prob"; formula: FormulaForm }
  | { kind: "mrs"; formula: FormulaForm }
  | { kind: "most-risky"; object: string; side: "attack" | "fault" }
  | { kind: "total-risk"; object: string; extreme: "max" | "min" }
  | { kind: "optimal-conf"; object: string };

export const QUERY_KINDS: { kind: QueryForm["kind"]; title: string }[] = [
  { kind: "check", title: "Check a formula" },
  { kind: "check-prob", title: "Check a probability threshold" },
  { kind: "prob", title: "Compute a probability" },
  { kind: "mrs", title: "Minimal risk scenarios" },
  { kind: "most-risky", title: "Most risky element for an object" },
  { kind: "total-risk", title: "Total risk extreme for an object" },
  { kind: "optimal-conf", title: "Optimal configurations for an object" },
];

export function formulaText(formula: FormulaForm): string {
  return formula.atoms
    .map((a) => (a.negated ? `not ${a.label}` : a.label))
    .join(` ${formula.connective} `);
}

function usesFormula(form: QueryForm):
  form is Extract<QueryForm, { formula: FormulaForm }> {
  return form.kind === "check" || form.kind === "check-prob"
    || form.kind === "prob" || form.kind === "mrs";
}

/** Whether the form has everything it needs; submit stays disabled until
 * this holds. */
export function formComplete(form: Partial<QueryForm>): form is QueryForm {
  switch (form.kind) {
    case "check":
    case "prob":
    case "mrs":
      return hasAtoms(form.formula);
    case "check-prob":
      return hasAtoms(form.formula)
        && form.comparator !== undefined
        && typeof form.threshold === "number"
        && Number.isFinite(form.threshold)
        && form.threshold >= 0;
    case "most-risky":
      return form.object !== undefined && form.object !== ""
        && (form.side === "attack" || form.side === "fault");
    case "total-risk":
      return form.object !== undefined && form.object !== ""
        && (form.extreme === "max" || form.extreme === "min");
    case "optimal-conf":
      return form.object !== undefined && form.object !== "";
    default:
      return false;
  }
}

function hasAtoms(formula: FormulaForm | undefined): boolean {
  return formula !== undefined && formula.atoms.length > 0
    && formula.atoms.every((a) => a.label !== "");
}

function directive(form: QueryForm): string {
  switch (form.kind) {
    case "check":
      return `check: ${formulaText(form.formula)}`;
    case "check-prob":
      return `check: Prob[${formulaText(form.formula)}] `
        + `${form.comparator} ${form.threshold}`;
    case "prob":
      return `compute: Prob[${formulaText(form.formula)}]`;
    case "mrs":
      return `computeall: MRS[${formulaText(form.formula)}]`;
    case "most-risky":
      return `computeall: MostRisky`
        + `${form.side === "attack" ? "A" : "F"}[${form.object}]`;
    case "total-risk":
      return `compute: ${form.extreme === "max" ? "Max" : "Min"}`
        + `TotalRisk[${form.object}]`;
    case "optimal-conf":
      return `computeall: OptimalConf[${form.object}]`;
  }
}

/**
 * The full query text: the sticky assumptions as an `assume:` block (left
 * out entirely when there are none, matching the plain directive shape),
 * then the directive.
 */
export function buildQuery(form: QueryForm,
  assumptions: SessionAssumptions): string {
  const body = directive(form);
  if (assumptions.isEmpty()) {
    return body;
  }
  const block = assumptions.lines().map((line) => `  ${line}`).join("\n");
  return `assume:\n${block}\n${body}`;
}
