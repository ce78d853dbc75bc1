/**
 * Sticky what-if state: the evidence the analyst has toggled on the
 * diagram, composed into the `assume:` block of every generated query.
 *
 * The engine is stateless, so this list is the whole session. Entries keep
 * insertion order because the engine treats earlier assumptions as the
 * inner evidence; re-toggling a target updates it in place rather than
 * moving it to the end.
 */

export type Assumption =
  | { kind: "set"; target: string; value: 0 | 1 }
  | { kind: "set_prob"; target: string; value: number };

export function assumptionLine(entry: Assumption): string {
  return `set${entry.kind === "set_prob" ? "_prob" : ""} ` +
    `${entry.target} = ${entry.value}`;
}

export class SessionAssumptions {
  private entries: Assumption[] = [];

  /** Pin a property or basic event to 0 or 1; null removes the pin. */
  setEvidence(target: string, value: 0 | 1 | null): void {
    this.put("set", target, value);
  }

  /** Override a basic event's probability; null removes the override. */
  setProbability(target: string, value: number | null): void {
    if (value !== null && !(value >= 0 && value <= 1)) {
      throw new RangeError(`probability for ${target} must be in [0, 1]`);
    }
    this.put("set_prob", target, value);
  }

  private put(kind: Assumption["kind"], target: string,
    value: number | null): void {
    const at = this.entries.findIndex(
      (e) => e.kind === kind && e.target === target);
    if (value === null) {
      if (at >= 0) this.entries.splice(at, 1);
      return;
    }
    const entry = { kind, target, value } as Assumption;
    if (at >= 0) {
      this.entries[at] = entry;
    } else {
      this.entries.push(entry);
    }
  }

  evidenceOn(target: string): 0 | 1 | null {
    const hit = this.entries.find(
      (e) => e.kind === "set" && e.target === target);
    return hit === undefined ? null : (hit.value as 0 | 1);
  }

  probabilityOn(target: string): number | null {
    const hit = this.entries.find(
      (e) => e.kind === "set_prob" && e.target === target);
    return hit === undefined ? null : hit.value;
  }

  clear(): void {
    this.entries = [];
  }

  isEmpty(): boolean {
    return this.entries.length === 0;
  }

  list(): readonly Assumption[] {
    return this.entries;
  }

  lines(): string[] {
    return this.entries.map(assumptionLine);
  }

  snapshot(): Assumption[] {
    return this.entries.map((e) => ({ ...e }));
  }

  restore(entries: Assumption[]): void {
    this.entries = entries.map((e) => ({ ...e }));
  }
}
