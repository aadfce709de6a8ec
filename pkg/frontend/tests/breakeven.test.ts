import { describe, expect, it } from "vitest";

import { buildBreakevenMarker } from "../src/breakeven.js";
import type { BreakevenResponse } from "../src/types.js";

import breakevenFixture from "../fixtures/breakeven_fixture.json";

describe("break-even marker", () => {
  it("places the marker exactly at the service's crossing value", () => {
    const response = breakevenFixture as BreakevenResponse;
    const marker = buildBreakevenMarker(response)!;
    expect(marker).not.toBeNull();
    expect(marker.crossing).toBe(response.crossing);
    // Recorded crossing for the bundled pair is 0.97: 98.5% along the axis.
    expect(marker.crossing).toBeCloseTo(0.97, 9);
    expect(marker.axisPct).toBeCloseTo(98.5, 6);
  });

  it("is absent when the service reports no crossing", () => {
    const response: BreakevenResponse = {
      a: { scope: "protocol", authority: "signer_set" },
      b: { scope: "module", authority: "signer_set" },
      crossing: null,
    };
    expect(buildBreakevenMarker(response)).toBeNull();
  });

  it("maps the sentiment range onto the axis ends", () => {
    const at = (crossing: number) =>
      buildBreakevenMarker({
        a: { scope: "account", authority: "governance" },
        b: { scope: "account", authority: "signer_set" },
        crossing,
      })!.axisPct;
    expect(at(-1)).toBe(0);
    expect(at(0)).toBe(50);
    expect(at(1)).toBe(100);
  });
});
