import type {
  ApiError,
  BreakevenResponse,
  CellRef,
  HealthResponse,
  RankResponse,
  ScenarioDocument,
} from "./types.js";

/** Thrown for structured {code, field, message} service errors. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiError,
  ) {
    super(`${body.code} (${body.field}): ${body.message}`);
  }
}

/**
 * Thin typed client for the /v1 API. The only configuration is the base
 * URL; every number the UI shows comes back through here.
 */
export class ApiClient {
  constructor(
    readonly baseUrl: string = "http://127.0.0.1:8322",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, payload as ApiError);
    }
    return payload as T;
  }

  async health(): Promise<HealthResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/health`);
    return (await response.json()) as HealthResponse;
  }

  rank(scenario: ScenarioDocument): Promise<RankResponse> {
    return this.post("/v1/rank", { scenario });
  }

  breakeven(
    scenario: ScenarioDocument,
    pair: [CellRef, CellRef],
  ): Promise<BreakevenResponse> {
    return this.post("/v1/breakeven", { scenario, pair });
  }
}
