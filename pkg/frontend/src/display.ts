/**
 * Turns a wire result into a neutral description of what to show: one
 * headline, optional badge or threshold gauges, zero or more tables, and
 * the diagnostics. Rendering applies this to the DOM elsewhere; nothing
 * here recomputes risk, and every number is passed through verbatim so
 * the displayed value is exactly the engine's.
 */

import { DiagnosticJson, QueryResultJson } from "./api.js";

export interface DisplayTable {
  title: string;
  columns: string[];
  rows: string[][];
}

export interface ThresholdGauge {
  formula: string;
  probability: number;
  holds: boolean;
}

export interface DisplayModel {
  headline: string;
  /** JSON text of the raw value, surfaced on hover. */
  raw: string;
  badge: boolean | null;
  gauges: ThresholdGauge[];
  tables: DisplayTable[];
  diagnostics: DiagnosticJson[];
}

/** Shortest exact decimal form; never rounds away from the wire value. */
export function numberText(value: number): string {
  return String(value);
}

export function diagnosticText(d: DiagnosticJson): string {
  const at = d.line !== null && d.column !== null
    ? `${d.line}:${d.column}: ` : "";
  return `${at}${d.severity}: ${d.message}`;
}

type Bits = Record<string, number>;

function bitsTable(title: string, assignments: Bits[],
  firstColumn: string | null = null): DisplayTable {
  const columns = assignments.length > 0
    ? Object.keys(assignments[0]!) : [];
  return {
    title,
    columns: firstColumn === null ? columns : [firstColumn, ...columns],
    rows: assignments.map((bits, index) => {
      const cells = columns.map((c) => String(bits[c] ?? 0));
      return firstColumn === null ? cells : [String(index + 1), ...cells];
    }),
  };
}

function describeError(result: QueryResultJson): DisplayModel {
  return {
    headline: "query rejected",
    raw: "null",
    badge: null,
    gauges: [],
    tables: [],
    diagnostics: result.diagnostics,
  };
}

function describeCheck(result: QueryResultJson): DisplayModel {
  const value = result.value as boolean;
  const model: DisplayModel = {
    headline: value ? "true" : "false",
    raw: JSON.stringify(result.value),
    badge: value,
    gauges: [],
    tables: [],
    diagnostics: result.diagnostics,
  };
  if (result.layer === 2) {
    const thresholds = (result.witnesses["thresholds"] ?? []) as {
      formula: string; probability: number; holds: boolean;
    }[];
    model.gauges = thresholds.map((t) => ({ ...t }));
  } else {
    const scenario = result.witnesses["scenario"] as Bits | undefined;
    const config = result.witnesses["config"] as Bits | undefined;
    if (scenario !== undefined) {
      model.tables.push(bitsTable("world: scenario", [scenario]));
    }
    if (config !== undefined) {
      model.tables.push(bitsTable("world: configuration", [config]));
    }
  }
  return model;
}

function describeScenarios(result: QueryResultJson): DisplayModel {
  const scenarios = result.value as Bits[];
  const config = result.witnesses["config"] as Bits | undefined;
  const tables: DisplayTable[] = [];
  if (scenarios.length > 0) {
    tables.push(bitsTable("minimal risk scenarios", scenarios, "#"));
  }
  if (config !== undefined) {
    tables.push(bitsTable("under configuration", [config]));
  }
  return {
    headline: scenarios.length === 0 ? "no satisfying scenario"
      : `${scenarios.length} minimal scenario`
        + `${scenarios.length === 1 ? "" : "s"}`,
    raw: JSON.stringify(result.value),
    badge: null,
    gauges: [],
    tables,
    diagnostics: result.diagnostics,
  };
}

function describeNumber(result: QueryResultJson): DisplayModel {
  const value = result.value as number;
  const config = result.witnesses["config"] as Bits | undefined;
  return {
    headline: numberText(value),
    raw: JSON.stringify(result.value),
    badge: null,
    gauges: [],
    tables: config === undefined ? []
      : [bitsTable("achieved by configuration", [config])],
    diagnostics: result.diagnostics,
  };
}

function describeMostRisky(result: QueryResultJson): DisplayModel {
  const winners = result.value as string[];
  const risk = result.witnesses["risk"] as number;
  const config = result.witnesses["config"] as Bits | undefined;
  const risks = (result.witnesses["risks"] ?? {}) as Record<string, number>;
  const scenarios = (result.witnesses["scenarios"] ?? {}) as
    Record<string, Bits | null>;

  const tables: DisplayTable[] = [{
    title: "risk per participating element",
    columns: ["element", "risk", "top"],
    rows: Object.entries(risks).map(([label, r]) => [
      label, numberText(r), winners.includes(label) ? "*" : "",
    ]),
  }];
  if (config !== undefined) {
    tables.push(bitsTable("at configuration", [config]));
  }
  const fired = Object.entries(scenarios)
    .filter((pair): pair is [string, Bits] => pair[1] !== null)
    .map(([label, bits]) => ({ label, bits }));
  if (fired.length > 0) {
    tables.push({
      title: "a scenario firing each top element",
      columns: ["element", ...Object.keys(fired[0]!.bits)],
      rows: fired.map(({ label, bits }) => [
        label, ...Object.values(bits).map(String),
      ]),
    });
  }
  return {
    headline: `${winners.join(", ")} at risk ${numberText(risk)}`,
    raw: JSON.stringify(result.value),
    badge: null,
    gauges: [],
    tables,
    diagnostics: result.diagnostics,
  };
}

function describeOptimal(result: QueryResultJson): DisplayModel {
  const configs = result.value as Bits[];
  const risk = result.witnesses["risk"] as number;
  return {
    headline: `${configs.length} optimal configuration`
      + `${configs.length === 1 ? "" : "s"} at risk ${numberText(risk)}`,
    raw: JSON.stringify(result.value),
    badge: null,
    gauges: [],
    tables: [bitsTable("optimal configurations", configs, "#")],
    diagnostics: result.diagnostics,
  };
}

export function describeResult(result: QueryResultJson): DisplayModel {
  if (result.value === null) {
    return describeError(result);
  }
  if (result.mode === "check") {
    return describeCheck(result);
  }
  if (result.mode === "compute") {
    return describeNumber(result);
  }
  // computeall: scenario lists, ranked elements or optimal configurations.
  if (result.layer === 1) {
    return describeScenarios(result);
  }
  if (Array.isArray(result.value)
    && result.value.every((v) => typeof v === "string")) {
    return describeMostRisky(result);
  }
  return describeOptimal(result);
}
