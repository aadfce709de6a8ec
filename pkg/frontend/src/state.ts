import type {
  BreakevenResponse,
  CellRef,
  RankResponse,
  ScenarioDocument,
  ThreatEvent,
} from "./types.js";

/**
 * Client-side state: a scenario mirror the user edits, the last ranking
 * response, and a pinned pair for the break-even marker. All numbers in
 * the mirror are user input; all numbers in the responses are the
 * service's. Nothing here computes costs.
 */
export interface UiScenarioState {
  scenario: ScenarioDocument;
  lastRanking: RankResponse | null;
  pinnedPair: [CellRef, CellRef] | null;
  lastBreakeven: BreakevenResponse | null;
}

export function initialState(scenario: ScenarioDocument): UiScenarioState {
  return {
    scenario: structuredClone(scenario),
    lastRanking: null,
    pinnedPair: null,
    lastBreakeven: null,
  };
}

type MarketField = keyof ScenarioDocument["market"];

export function setMarketField(
  state: UiScenarioState,
  field: MarketField,
  value: number,
): UiScenarioState {
  const scenario = structuredClone(state.scenario);
  scenario.market[field] = value;
  return { ...state, scenario };
}

export function setEventField(
  state: UiScenarioState,
  label: string,
  field: "probability" | "damage_rate_usd_per_min",
  value: number,
): UiScenarioState {
  const scenario = structuredClone(state.scenario);
  const event = scenario.threat.events.find(
    (e: ThreatEvent) => e.label === label,
  );
  if (!event) {
    throw new Error(`no threat event labelled ${label}`);
  }
  event[field] = value;
  return { ...state, scenario };
}

export function pinPair(
  state: UiScenarioState,
  pair: [CellRef, CellRef] | null,
): UiScenarioState {
  return { ...state, pinnedPair: pair, lastBreakeven: null };
}
