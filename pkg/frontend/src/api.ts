/**
 * Thin typed client for the deliberation service.
 *
 * Every method validates the response body against the contract schema
 * and surfaces refusals as ApiRefusal carrying the structured
 * {code, message, locus} body the service emits.
 */

import {
  CellEdit,
  Comparison,
  ComparisonSchema,
  EditResponse,
  EditResponseSchema,
  RankingsPayload,
  RankingsPayloadSchema,
  ServiceError,
  ServiceErrorSchema,
  SessionExport,
  ExportSchema,
} from "./types.js";

export class ApiRefusal extends Error {
  readonly status: number;
  readonly body: ServiceError;

  constructor(status: number, body: ServiceError) {
    super(`${body.code}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

async function parseError(res: Response): Promise<ApiRefusal> {
  let body: ServiceError = { code: "unknown", message: `HTTP ${res.status}`, locus: null };
  try {
    body = ServiceErrorSchema.parse(await res.json());
  } catch {
    // non-JSON error body; keep the fallback
  }
  return new ApiRefusal(res.status, body);
}

export class DeliberationApi {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(
    path: string,
    parse: (body: unknown) => T,
    init?: RequestInit,
  ): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, {
      ...init,
      headers: init?.body !== undefined ? { "Content-Type": "application/json" } : undefined,
    });
    if (!res.ok) {
      throw await parseError(res);
    }
    return parse(await res.json());
  }

  async health(): Promise<boolean> {
    try {
      const res = await fetch(`${this.baseUrl}/health`);
      return res.ok;
    } catch {
      return false;
    }
  }

  createSession(fixture: string): Promise<RankingsPayload> {
    return this.request("/sessions", (b) => RankingsPayloadSchema.parse(b), {
      method: "POST",
      body: JSON.stringify({ fixture }),
    });
  }

  getRankings(sessionId: string, rules = "all", criteria = "all"): Promise<RankingsPayload> {
    const params = new URLSearchParams({ rules, criteria });
    return this.request(
      `/sessions/${sessionId}/rankings?${params}`,
      (b) => RankingsPayloadSchema.parse(b),
    );
  }

  editCell(sessionId: string, edit: CellEdit, actor = "workbench"): Promise<EditResponse> {
    return this.request(`/sessions/${sessionId}/cells`, (b) => EditResponseSchema.parse(b), {
      method: "PATCH",
      body: JSON.stringify({ ...edit, actor }),
    });
  }

  editWeights(
    sessionId: string,
    weights: Record<string, number>,
    actor = "workbench",
  ): Promise<EditResponse> {
    return this.request(`/sessions/${sessionId}/weights`, (b) => EditResponseSchema.parse(b), {
      method: "PUT",
      body: JSON.stringify({ weights, actor }),
    });
  }

  compare(sessionId: string, ranking: number[], rule = "topsis"): Promise<Comparison> {
    return this.request(`/sessions/${sessionId}/compare`, (b) => ComparisonSchema.parse(b), {
      method: "POST",
      body: JSON.stringify({ ranking, rule }),
    });
  }

  exportSession(sessionId: string): Promise<SessionExport> {
    return this.request(`/sessions/${sessionId}/export`, (b) => ExportSchema.parse(b));
  }
}
