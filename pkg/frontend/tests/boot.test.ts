// @vitest-environment jsdom
/**
 * Boots the real page against a live engine: loads index.html into jsdom,
 * imports the entry module, and drives the session the way a user would
 * (click to pin, build a query, submit, branch). Needs dogwatch on PATH.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { afterAll, beforeAll, expect, test } from "vitest";

// vitest runs with the package root as cwd
const MODEL = resolve(process.cwd(), "../models/smart-house.dog");
const PAGE = resolve(process.cwd(), "index.html");
const PORT = 8932;
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;

async function serviceUp(): Promise<boolean> {
  try {
    return (await fetch(`${BASE}/health`)).ok;
  } catch {
    return false;
  }
}

async function until(probe: () => boolean, what: string): Promise<void> {
  const deadline = Date.now() + 10_000;
  while (!probe()) {
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
}

function texts(selector: string): string[] {
  return Array.from(document.querySelectorAll(selector),
    (node) => node.textContent ?? "");
}

function click(target: Element): void {
  target.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

function preview(): string {
  return document.getElementById("query-preview")?.textContent ?? "";
}

function leafGroup(label: string): Element {
  const group = Array.from(
    document.querySelectorAll("#diagram g.node.gate-leaf"))
    .find((g) => g.querySelector(".node-label")?.textContent === label);
  if (group === undefined) {
    throw new Error(`no leaf ${label} in the diagram`);
  }
  return group;
}

// the chip's own text; textContent would drag in the <title> tooltip
function chipText(chip: Element): string {
  return chip.childNodes[0]?.nodeValue ?? "";
}

function propChip(label: string): Element {
  const chip = Array.from(document.querySelectorAll("#diagram .prop-chip"))
    .find((c) => chipText(c).split(" =")[0] === label);
  if (chip === undefined) {
    throw new Error(`no property chip ${label} in the diagram`);
  }
  return chip;
}

function cards(): Element[] {
  return Array.from(document.querySelectorAll("#log .result-card"));
}

beforeAll(async () => {
  service = spawn("dogwatch", ["serve", MODEL, "--port", String(PORT)],
    { stdio: "ignore" });
  const deadline = Date.now() + 20_000;
  while (!(await serviceUp())) {
    if (Date.now() > deadline) {
      throw new Error("service did not come up; is dogwatch installed?");
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  const html = readFileSync(PAGE, "utf8")
    .replace("http://127.0.0.1:8000", BASE);
  document.open();
  document.write(html);
  document.close();
  await import("../src/main.js");
  await until(
    () => document.querySelectorAll("#diagram g.node").length > 0,
    "the diagram to render");
}, 30_000);

afterAll(() => {
  service.kill();
});

test("boots into a drawn model and a neutral session", () => {
  expect(document.querySelectorAll("#diagram g.node").length).toBe(10);
  expect(document.querySelectorAll("#diagram g.node.gate-leaf").length)
    .toBe(6);
  expect(document.querySelectorAll("#diagram g.object").length).toBe(4);
  expect(texts("#sticky-list .sticky-none"))
    .toEqual(["none: the neutral world"]);
  expect(preview()).toBe("check: TLE1");
  const submit = document.getElementById("submit") as HTMLButtonElement;
  expect(submit.disabled).toBe(false);
});

test("clicking a leaf cycles its pin and rewrites the preview", () => {
  click(leafGroup("ADD"));
  expect(texts("#sticky-list .sticky-chip")).toEqual(["set ADD = 1"]);
  expect(preview()).toBe("assume:\n  set ADD = 1\ncheck: TLE1");
  expect(leafGroup("ADD").getAttribute("class"))
    .toContain("pinned pinned-1");
  expect(leafGroup("ADD").querySelector(".node-kind")?.textContent)
    .toBe("leaf = 1");

  click(leafGroup("ADD"));
  expect(texts("#sticky-list .sticky-chip")).toEqual(["set ADD = 0"]);
  expect(leafGroup("ADD").getAttribute("class"))
    .toContain("pinned pinned-0");

  click(leafGroup("ADD"));
  expect(texts("#sticky-list .sticky-none"))
    .toEqual(["none: the neutral world"]);
  expect(preview()).toBe("check: TLE1");

  click(leafGroup("ADD"));
  expect(texts("#sticky-list .sticky-chip")).toEqual(["set ADD = 1"]);
});

test("clicking a property chip pins it alongside", () => {
  click(propChip("DiF"));
  expect(texts("#sticky-list .sticky-chip"))
    .toEqual(["set ADD = 1", "set DiF = 1"]);
  expect(preview())
    .toBe("assume:\n  set ADD = 1\n  set DiF = 1\ncheck: TLE1");
  expect(chipText(propChip("DiF"))).toBe("DiF = 1");
  expect(propChip("DiF").getAttribute("class")).toContain("pinned-1");
});

test("submitting logs the engine's answer verbatim", async () => {
  const asked = preview();
  click(document.getElementById("submit")!);
  await until(() => cards().length === 1, "the first result card");
  const card = cards()[0]!;
  expect(card.querySelector(".query-text")?.textContent).toBe(asked);
  const headline = card.querySelector(".headline")!;
  expect(headline.textContent).toBe("true");
  expect(headline.classList.contains("holds")).toBe(true);
  expect(headline.getAttribute("title")).toBe("raw value: true");
  expect(card.querySelectorAll(".result-table").length).toBeGreaterThan(0);
  expect(card.querySelectorAll(".diagnostic").length).toBe(0);
});

test("probability overrides and a kind switch build a compute query",
  async () => {
    const row = Array.from(
      document.querySelectorAll("#attributions .attribution-row"))
      .find((r) => r.querySelector("span")?.textContent === "FBO")!;
    const input = row.querySelector("input")!;
    input.value = "0.4";
    input.dispatchEvent(new Event("change"));
    expect(texts("#sticky-list .sticky-chip"))
      .toEqual(["set ADD = 1", "set DiF = 1", "set_prob FBO = 0.4"]);

    const kind = document.querySelector(
      "#form-controls select") as HTMLSelectElement;
    kind.value = "prob";
    kind.dispatchEvent(new Event("change"));
    expect(preview()).toBe("assume:\n  set ADD = 1\n  set DiF = 1\n"
      + "  set_prob FBO = 0.4\ncompute: Prob[TLE1]");

    click(document.getElementById("submit")!);
    await until(() => cards().length === 2, "the second result card");
    const newest = cards()[0]!;
    const headline = newest.querySelector(".headline")!;
    // the exact engine float, one ulp shy of 1; rounding would show "1"
    expect(headline.textContent).toBe("0.9999999999999999");
    expect(headline.getAttribute("title"))
      .toBe("raw value: 0.9999999999999999");
  });

test("branch restores the assumptions a query was asked under", () => {
  click(document.getElementById("clear-assumptions")!);
  expect(texts("#sticky-list .sticky-none"))
    .toEqual(["none: the neutral world"]);
  expect(preview()).toBe("compute: Prob[TLE1]");

  const oldest = cards()[cards().length - 1]!;
  click(oldest.querySelector("button.branch")!);
  expect(texts("#sticky-list .sticky-chip"))
    .toEqual(["set ADD = 1", "set DiF = 1"]);
  expect(preview())
    .toBe("assume:\n  set ADD = 1\n  set DiF = 1\ncompute: Prob[TLE1]");
});

test("an unreachable service shows the placeholder; reconnect recovers",
  async () => {
    const url = document.getElementById(
      "service-url") as HTMLInputElement;
    url.value = "http://127.0.0.1:9";
    click(document.getElementById("connect")!);
    await until(
      () => document.querySelector("#diagram .placeholder") !== null,
      "the unreachable placeholder");
    expect(document.querySelector("#diagram .placeholder")?.textContent)
      .toBe("service unreachable; check the URL and connect again");

    url.value = BASE;
    click(document.getElementById("connect")!);
    await until(
      () => document.querySelectorAll("#diagram g.node").length > 0,
      "the diagram to come back");
    expect(texts("#sticky-list .sticky-chip"))
      .toEqual(["set ADD = 1", "set DiF = 1"]);
  });
