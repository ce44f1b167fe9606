/** Thin fetch wrapper around the audit service.
 *
 * Every method returns the server payload untouched: scores, severity
 * buckets and rank orders are rendered exactly as received, never
 * recomputed here.
 */

import type {
  ApiErrorBody,
  Catalog,
  EnvironmentEntry,
  ProjectDocument,
  ProjectSummary,
  RankedResponse,
  ScoreResponse,
  SurfaceResponse,
} from "./types.js";

export class ApiRequestError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: string;

  constructor(body: ApiErrorBody) {
    super(`${body.code}: ${body.detail}`);
    this.name = "ApiRequestError";
    this.status = body.status;
    this.code = body.code;
    this.detail = body.detail;
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "/api/v1", fetchImpl: FetchLike = (...args) =>
    fetch(...args)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(payload as ApiErrorBody);
    }
    return payload as T;
  }

  listProjects(): Promise<{ projects: ProjectSummary[] }> {
    return this.request("GET", "/projects");
  }

  getProject(projectId: string): Promise<ProjectDocument> {
    return this.request("GET", `/projects/${projectId}`);
  }

  createProject(body: {
    name: string;
    platform: string;
    environment: string;
  }): Promise<ProjectDocument> {
    return this.request("POST", "/projects", body);
  }

  getSurface(projectId: string): Promise<SurfaceResponse> {
    return this.request("GET", `/projects/${projectId}/surface`);
  }

  getRankedFindings(projectId: string): Promise<RankedResponse> {
    return this.request("GET", `/projects/${projectId}/findings?ranked=true`);
  }

  getCatalog(): Promise<Catalog> {
    return this.request("GET", "/catalog");
  }

  getEnvironments(): Promise<{ environments: EnvironmentEntry[] }> {
    return this.request("GET", "/environments");
  }

  score(vector: string): Promise<ScoreResponse> {
    return this.request("POST", "/score", { vector });
  }

  advancePhase(
    projectId: string,
    revision: number,
    auditor = "",
  ): Promise<ProjectDocument> {
    return this.request("POST", `/projects/${projectId}/phase:advance`, {
      revision,
      auditor,
    });
  }

  revisitPhase(
    projectId: string,
    revision: number,
    target: string,
    reason = "",
  ): Promise<ProjectDocument> {
    return this.request("POST", `/projects/${projectId}/phase:revisit`, {
      revision,
      target,
      reason,
    });
  }

  addFinding(
    projectId: string,
    revision: number,
    body: {
      phase_recorded: string;
      surface_item_id: string;
      threat_slug: string;
      title: string;
      description?: string;
      vector?: string;
    },
  ): Promise<ProjectDocument & { created_id: string }> {
    return this.request("POST", `/projects/${projectId}/findings`, {
      revision,
      ...body,
    });
  }
}
