import { describe, expect, test } from "vitest";

import { SessionAssumptions } from "../src/assumptions.js";
import {
  QueryForm, buildQuery, formComplete, formulaText,
} from "../src/queryform.js";

function assuming(...sets: [string, 0 | 1][]): SessionAssumptions {
  const assumptions = new SessionAssumptions();
  for (const [target, value] of sets) {
    assumptions.setEvidence(target, value);
  }
  return assumptions;
}

const none = new SessionAssumptions();

describe("reference queries come out verbatim", () => {
  test("world check under event evidence", () => {
    const form: QueryForm = {
      kind: "check",
      formula: {
        atoms: [
          { label: "TLE1", negated: false },
          { label: "TLE2", negated: false },
        ],
        connective: "or",
      },
    };
    expect(buildQuery(form, assuming(["ADD", 1], ["FBO", 0])))
      .toBe("assume:\n  set ADD = 1\n  set FBO = 0\ncheck: TLE1 or TLE2");
  });

  test("minimal scenarios under configuration evidence", () => {
    const form: QueryForm = {
      kind: "mrs",
      formula: {
        atoms: [
          { label: "TLE1", negated: false },
          { label: "TLE2", negated: false },
        ],
        connective: "and",
      },
    };
    expect(buildQuery(form, assuming(["LiL", 1], ["DiF", 1])))
      .toBe("assume:\n  set LiL = 1\n  set DiF = 1\n"
        + "computeall: MRS[TLE1 and TLE2]");
  });

  test("probability threshold", () => {
    const form: QueryForm = {
      kind: "check-prob",
      formula: {
        atoms: [
          { label: "AFD", negated: false },
          { label: "FBO", negated: false },
        ],
        connective: "and",
      },
      comparator: "<",
      threshold: 0.05,
    };
    expect(buildQuery(form, none))
      .toBe("check: Prob[AFD and FBO] < 0.05");
  });

  test("most risky fault element", () => {
    const form: QueryForm = {
      kind: "most-risky", object: "Inhab.", side: "fault",
    };
    expect(buildQuery(form, assuming(["LiL", 1])))
      .toBe("assume:\n  set LiL = 1\ncomputeall: MostRiskyF[Inhab.]");
  });

  test("total risk extremes", () => {
    expect(buildQuery(
      { kind: "total-risk", object: "Door", extreme: "max" }, none))
      .toBe("compute: MaxTotalRisk[Door]");
    expect(buildQuery(
      { kind: "total-risk", object: "Door", extreme: "min" },
      assuming(["LH", 1])))
      .toBe("assume:\n  set LH = 1\ncompute: MinTotalRisk[Door]");
  });

  test("optimal configurations", () => {
    expect(buildQuery(
      { kind: "optimal-conf", object: "House" }, assuming(["DiF", 1])))
      .toBe("assume:\n  set DiF = 1\ncomputeall: OptimalConf[House]");
  });
});

describe("query text assembly", () => {
  test("no assumptions means no assume block at all", () => {
    const text = buildQuery(
      { kind: "optimal-conf", object: "House" }, none);
    expect(text).toBe("computeall: OptimalConf[House]");
    expect(text).not.toContain("assume");
  });

  test("negated atoms and attack side", () => {
    expect(buildQuery({
      kind: "check",
      formula: {
        atoms: [
          { label: "DiF", negated: true },
          { label: "AEDU", negated: false },
        ],
        connective: "impl",
      },
    }, none)).toBe("check: not DiF impl AEDU");
    expect(buildQuery(
      { kind: "most-risky", object: "Lock", side: "attack" }, none))
      .toBe("computeall: MostRiskyA[Lock]");
  });

  test("single atom needs no connective text", () => {
    expect(formulaText({
      atoms: [{ label: "TLE1", negated: false }], connective: "and",
    })).toBe("TLE1");
  });

  test("probability overrides join the assume block in order", () => {
    const assumptions = assuming(["LiL", 1]);
    assumptions.setProbability("ADD", 0.9);
    expect(buildQuery({
      kind: "prob",
      formula: { atoms: [{ label: "TLE1", negated: false }],
        connective: "and" },
    }, assumptions)).toBe(
      "assume:\n  set LiL = 1\n  set_prob ADD = 0.9\n"
      + "compute: Prob[TLE1]");
  });
});

describe("completeness gates the submit button", () => {
  test("formula kinds need at least one picked atom", () => {
    expect(formComplete({ kind: "check" })).toBe(false);
    expect(formComplete({
      kind: "check",
      formula: { atoms: [], connective: "and" },
    })).toBe(false);
    expect(formComplete({
      kind: "check",
      formula: { atoms: [{ label: "", negated: false }],
        connective: "and" },
    })).toBe(false);
    expect(formComplete({
      kind: "check",
      formula: { atoms: [{ label: "TLE1", negated: false }],
        connective: "and" },
    })).toBe(true);
  });

  test("threshold checks need a comparator and a sane number", () => {
    const formula = {
      atoms: [{ label: "TLE1", negated: false }],
      connective: "and" as const,
    };
    expect(formComplete({ kind: "check-prob", formula })).toBe(false);
    expect(formComplete({
      kind: "check-prob", formula, comparator: "<", threshold: NaN,
    })).toBe(false);
    expect(formComplete({
      kind: "check-prob", formula, comparator: "<", threshold: -1,
    })).toBe(false);
    expect(formComplete({
      kind: "check-prob", formula, comparator: "<", threshold: 0.05,
    })).toBe(true);
  });

  test("rankings need an object and their mode", () => {
    expect(formComplete({ kind: "most-risky", object: "Door" }))
      .toBe(false);
    expect(formComplete({
      kind: "most-risky", object: "Door", side: "fault",
    })).toBe(true);
    expect(formComplete({ kind: "total-risk", object: "" })).toBe(false);
    expect(formComplete({
      kind: "total-risk", object: "Door", extreme: "min",
    })).toBe(true);
    expect(formComplete({ kind: "optimal-conf", object: "House" }))
      .toBe(true);
  });
});
