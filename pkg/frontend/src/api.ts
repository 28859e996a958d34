// Typed client for the workbench service. The UI holds no authoritative
// state: every mutation goes through these versioned endpoints and every
// number shown is fetched, never computed locally.

import type {
  AgreementPayload,
  Assignment,
  CoveragePayload,
  DisagreementsPayload,
  FinalLabel,
  IrrResult,
  Issue,
  LabelRecord,
  SessionStatus,
  Taxonomy,
} from "./types";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ConflictError extends ApiError {
  constructor(message: string, readonly currentVersion: number) {
    super(message, 409);
  }
}

async function parseError(res: Response): Promise<never> {
  let detail = `${res.status} ${res.statusText}`;
  let currentVersion: number | undefined;
  try {
    const body = await res.json();
    if (typeof body.detail === "string") detail = body.detail;
    if (typeof body.current_version === "number") currentVersion = body.current_version;
  } catch {
    // non-JSON error body; keep the status text
  }
  if (res.status === 409 && currentVersion !== undefined) {
    throw new ConflictError(detail, currentVersion);
  }
  throw new ApiError(detail, res.status);
}

export class Api {
  constructor(readonly baseUrl: string) {}

  private async get<T>(path: string): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`);
    if (!res.ok) await parseError(res);
    return res.json() as Promise<T>;
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) await parseError(res);
    return res.json() as Promise<T>;
  }

  getTaxonomy(): Promise<Taxonomy> {
    return this.get("/v1/taxonomy");
  }

  getTrace(requirementId: string): Promise<{ requirement: string; refs: Record<string, string[]> }> {
    return this.get(`/v1/taxonomy/${encodeURIComponent(requirementId)}/trace`);
  }

  getIssues(): Promise<Issue[]> {
    return this.get("/v1/issues");
  }

  getIssue(issueId: string): Promise<Issue> {
    return this.get(`/v1/issues/${encodeURIComponent(issueId)}`);
  }

  createSession(body: {
    id: string;
    coders: string[];
    corpus_ref?: string;
    scheme?: string;
    issues?: string[];
  }): Promise<SessionStatus> {
    return this.post("/v1/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionStatus> {
    return this.get(`/v1/sessions/${encodeURIComponent(sessionId)}`);
  }

  getAssignment(sessionId: string, coder: string): Promise<Assignment> {
    return this.get(
      `/v1/sessions/${encodeURIComponent(sessionId)}/assignments/${encodeURIComponent(coder)}`,
    );
  }

  submitLabels(
    sessionId: string,
    issueId: string,
    coder: string,
    labels: string[],
    expectedVersion: number,
  ): Promise<LabelRecord> {
    return this.post(
      `/v1/sessions/${encodeURIComponent(sessionId)}/issues/${encodeURIComponent(issueId)}/labels`,
      { coder, labels, expected_version: expectedVersion },
    );
  }

  getDisagreements(sessionId: string): Promise<DisagreementsPayload> {
    return this.get(`/v1/sessions/${encodeURIComponent(sessionId)}/disagreements`);
  }

  beginAdjudication(sessionId: string): Promise<SessionStatus> {
    return this.post(`/v1/sessions/${encodeURIComponent(sessionId)}/begin-adjudication`);
  }

  adjudicate(
    sessionId: string,
    issueId: string,
    body: { final: string[]; resolution: string; adjudicators: string[]; note?: string },
  ): Promise<FinalLabel> {
    return this.post(
      `/v1/sessions/${encodeURIComponent(sessionId)}/issues/${encodeURIComponent(issueId)}/adjudicate`,
      body,
    );
  }

  resolveUnanimous(sessionId: string): Promise<{ confirmed: number }> {
    return this.post(`/v1/sessions/${encodeURIComponent(sessionId)}/resolve-unanimous`);
  }

  finalize(sessionId: string): Promise<{ session: string; gold: unknown[] }> {
    return this.post(`/v1/sessions/${encodeURIComponent(sessionId)}/finalize`);
  }

  getIrr(sessionId: string, pair: [string, string], distance = "masi"): Promise<IrrResult> {
    const params = new URLSearchParams({ pair: pair.join(","), distance });
    return this.get(`/v1/sessions/${encodeURIComponent(sessionId)}/irr?${params}`);
  }

  getAgreement(sessionId: string): Promise<AgreementPayload> {
    return this.get(`/v1/sessions/${encodeURIComponent(sessionId)}/agreement`);
  }

  getCoverage(sessionId: string): Promise<CoveragePayload> {
    const params = new URLSearchParams({ session: sessionId });
    return this.get(`/v1/reports/coverage?${params}`);
  }
}
