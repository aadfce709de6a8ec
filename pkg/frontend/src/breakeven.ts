import type { BreakevenResponse } from "./types.js";

/**
 * Marker on the sentiment axis [-1, +1]. Position comes verbatim from the
 * service's crossing value; absent when the service reports none, and the
 * degenerate case renders as a "no crossing" label upstream.
 */
export interface BreakevenMarker {
  crossing: number;
  axisPct: number; // 0 at sentiment -1, 100 at +1
  label: string;
}

export function buildBreakevenMarker(
  response: BreakevenResponse,
): BreakevenMarker | null {
  if (response.crossing === null) {
    return null;
  }
  return {
    crossing: response.crossing,
    axisPct: ((response.crossing + 1) / 2) * 100,
    label: `${response.a.scope}/${response.a.authority} vs ${response.b.scope}/${response.b.authority}`,
  };
}
