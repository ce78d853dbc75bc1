/**
 * Typed client for the dogwatch HTTP service.
 *
 * The service is stateless, so everything session-like (assumptions, the
 * result log) lives in the browser. The client adds nothing on top of the
 * wire format except a sequence guard: answers that arrive after a newer
 * question has been asked are dropped, never rendered.
 */

export type GateKind = "AND" | "OR" | "LEAF";

export interface TreeNodeJson {
  label: string;
  display: string;
  gate: GateKind;
  children: string[];
  participants: string[];
  effective_participants: string[];
  impact: number | null;
  cond: string | null;
  prob: number | null;
}

export interface TreeJson {
  root: string;
  nodes: TreeNodeJson[];
}

export interface ObjectNodeJson {
  label: string;
  display: string;
  props: string[];
  parts: string[];
}

export interface ObjectGraphJson {
  root: string;
  nodes: ObjectNodeJson[];
}

export interface ModelJson {
  name: string;
  attack: TreeJson;
  fault: TreeJson;
  objects: ObjectGraphJson;
}

export interface DiagnosticJson {
  severity: string;
  message: string;
  line: number | null;
  column: number | null;
}

/** Answer shape shared by every query mode; `value` is mode-dependent. */
export interface QueryResultJson {
  mode: string | null;
  layer: number | null;
  value: unknown;
  witnesses: Record<string, unknown>;
  diagnostics: DiagnosticJson[];
  elapsed_ms: number;
}

export interface ViolationJson {
  rule: string;
  severity: string;
  message: string;
  labels: string[];
}

export interface ValidateJson {
  valid: boolean;
  violations: ViolationJson[];
}

/**
 * Monotonic ticket counter for in-flight queries. `issue` hands out the
 * next ticket; `admit` accepts a ticket only if nothing newer has been
 * issued since, so a slow response for an old question is discarded.
 */
export class SequenceGate {
  private issued = 0;
  private admitted = 0;

  issue(): number {
    this.issued += 1;
    return this.issued;
  }

  admit(ticket: number): boolean {
    if (ticket < this.issued || ticket <= this.admitted) {
      return false;
    }
    this.admitted = ticket;
    return true;
  }
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly diagnostics: DiagnosticJson[],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/+$/, "") + path;
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(this.url("/health"));
      return response.ok && (await response.text()) === "ok";
    } catch {
      return false;
    }
  }

  async fetchModel(): Promise<ModelJson> {
    const response = await fetch(this.url("/model"));
    if (!response.ok) {
      throw new ApiError(`model fetch failed: ${response.status}`,
        response.status, []);
    }
    return (await response.json()) as ModelJson;
  }

  /**
   * Run one query. Engine-side rejections (bad query text, capacity) come
   * back as a normal QueryResultJson whose diagnostics are populated; only
   * transport problems reject the promise.
   */
  async query(doglang: string): Promise<QueryResultJson> {
    const response = await fetch(this.url("/query"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ doglang }),
    });
    const body = (await response.json()) as QueryResultJson;
    if (!response.ok && !Array.isArray(body.diagnostics)) {
      throw new ApiError(`query failed: ${response.status}`,
        response.status, []);
    }
    return body;
  }

  async validate(model: string): Promise<ValidateJson> {
    const response = await fetch(this.url("/validate"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ model }),
    });
    if (!response.ok) {
      throw new ApiError(`validate failed: ${response.status}`,
        response.status, []);
    }
    return (await response.json()) as ValidateJson;
  }
}
