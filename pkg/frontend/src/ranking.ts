import type { RankResponse } from "./types.js";

/**
 * View model for the ranked-bar chart. Bars keep the exact response order;
 * each bar carries the three cost segments verbatim plus proportional
 * widths for layout. Widths are rendering geometry, not cost arithmetic:
 * every displayed number is a response field.
 */
export interface BarSegment {
  kind: "standing" | "containment" | "blast";
  valueUsd: number;
  widthPct: number;
}

export interface RankedBar {
  rank: number;
  scope: string;
  authority: string;
  totalUsd: number;
  segments: BarSegment[];
  lengthPct: number;
  isBest: boolean;
}

export function buildRankingView(response: RankResponse): RankedBar[] {
  const maxTotal = Math.max(...response.results.map((r) => r.cost.total_usd), 0);
  return response.results.map((entry, index) => {
    const { cost } = entry;
    const segments: BarSegment[] = [
      { kind: "standing", valueUsd: cost.standing_cost_usd, widthPct: 0 },
      {
        kind: "containment",
        valueUsd: cost.expected_containment_loss_usd,
        widthPct: 0,
      },
      { kind: "blast", valueUsd: cost.expected_blast_cost_usd, widthPct: 0 },
    ];
    for (const segment of segments) {
      segment.widthPct =
        cost.total_usd > 0 ? (100 * segment.valueUsd) / cost.total_usd : 0;
    }
    return {
      rank: entry.rank,
      scope: entry.architecture.scope,
      authority: entry.architecture.authority,
      totalUsd: cost.total_usd,
      segments,
      lengthPct: maxTotal > 0 ? (100 * cost.total_usd) / maxTotal : 0,
      isBest: index === 0,
    };
  });
}
