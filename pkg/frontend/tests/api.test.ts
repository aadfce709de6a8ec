import { describe, expect, it, vi } from "vitest";

import { ApiClient, ServiceError } from "../src/api.js";
import type { ScenarioDocument } from "../src/types.js";

import scenarioFixture from "../fixtures/scenario_fixture.json";
import rankFixture from "../fixtures/rank_fixture.json";

const scenario = scenarioFixture as ScenarioDocument;

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

describe("api client", () => {
  it("posts the scenario envelope to /v1/rank", async () => {
    const fetchFn = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
      expect(String(url)).toBe("http://svc:1/v1/rank");
      expect(JSON.parse(String(init?.body))).toEqual({ scenario });
      return jsonResponse(rankFixture);
    });
    const client = new ApiClient("http://svc:1", fetchFn as typeof fetch);
    const response = await client.rank(scenario);
    expect(response).toEqual(rankFixture);
    expect(fetchFn).toHaveBeenCalledTimes(1);
  });

  it("surfaces structured errors with status and field", async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse(
        { code: "domain", field: "mean_sentiment", message: "must be in [-1, 1]" },
        422,
      ),
    );
    const client = new ApiClient("http://svc:1", fetchFn as typeof fetch);
    const attempt = client.rank(scenario);
    await expect(attempt).rejects.toBeInstanceOf(ServiceError);
    await client.rank(scenario).catch((error: ServiceError) => {
      expect(error.status).toBe(422);
      expect(error.body.field).toBe("mean_sentiment");
    });
  });

  it("sends the pinned pair to /v1/breakeven", async () => {
    const fetchFn = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
      expect(String(url)).toContain("/v1/breakeven");
      const body = JSON.parse(String(init?.body));
      expect(body.pair).toHaveLength(2);
      return jsonResponse({ a: body.pair[0], b: body.pair[1], crossing: null });
    });
    const client = new ApiClient("http://svc:1", fetchFn as typeof fetch);
    const response = await client.breakeven(scenario, [
      { scope: "account", authority: "signer_set" },
      { scope: "network", authority: "governance" },
    ]);
    expect(response.crossing).toBeNull();
  });
});
