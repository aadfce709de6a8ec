// Wire types mirroring the /v1 JSON API, field for field.

export type Scope = "network" | "asset" | "protocol" | "module" | "account";
export type Authority = "signer_set" | "delegated_body" | "governance";

export interface ThreatEvent {
  label: string;
  probability: number;
  damage_rate_usd_per_min: number;
}

export interface ScenarioDocument {
  schema?: string;
  description?: string;
  threat: { events: ThreatEvent[] };
  market: {
    market_cap_usd: number;
    daily_volume_usd: number;
    culture_multiplier: number;
    mean_sentiment: number;
  };
  flags?: { blast_on_trigger_only?: boolean };
  architectures?: Record<string, unknown>[];
  dataset?: string;
}

export interface ArchitecturePayload {
  scope: Scope;
  authority: Authority;
  containment_time_min: number;
  discount_rate: number;
  scope_fraction: number;
  label: string;
}

export interface CostBreakdown {
  standing_cost_usd: number;
  expected_containment_loss_usd: number;
  expected_blast_cost_usd: number;
  total_usd: number;
}

export interface RankedEntry {
  rank: number;
  architecture: ArchitecturePayload;
  cost: CostBreakdown;
}

export interface RankResponse {
  results: RankedEntry[];
}

export interface CellRef {
  scope: Scope;
  authority: Authority;
}

export interface BreakevenResponse {
  a: CellRef;
  b: CellRef;
  crossing: number | null;
}

export interface HealthResponse {
  status: string;
  version: string;
  calibration_version: string;
}

export interface ApiError {
  code: string;
  field: string;
  message: string;
}
