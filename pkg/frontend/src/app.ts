import { ApiClient, ServiceError } from "./api.js";
import { buildBreakevenMarker } from "./breakeven.js";
import { debounce } from "./debounce.js";
import { cellName, sentimentLabel, usd } from "./format.js";
import { buildRankingView } from "./ranking.js";
import { LatestOnly } from "./requests.js";
import {
  UiScenarioState,
  initialState,
  pinPair,
  setEventField,
  setMarketField,
} from "./state.js";
import type { CellRef, RankResponse, ScenarioDocument } from "./types.js";

const SEGMENT_CLASSES = {
  standing: "seg-standing",
  containment: "seg-containment",
  blast: "seg-blast",
} as const;

interface SliderSpec {
  id: string;
  label: string;
  min: number;
  max: number;
  step: number;
  get: (s: ScenarioDocument) => number;
  apply: (state: UiScenarioState, value: number) => UiScenarioState;
  format: (value: number) => string;
}

export class WhatIfApp {
  private state: UiScenarioState;
  private readonly rankChannel = new LatestOnly<RankResponse | null>();
  private readonly breakevenChannel = new LatestOnly<void>();
  private readonly requestRank: () => void;
  private readonly sliders: SliderSpec[];

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    scenario: ScenarioDocument,
  ) {
    this.state = initialState(scenario);
    this.requestRank = debounce(() => void this.refreshRanking());
    const event = scenario.threat.events[0];
    this.sliders = [
      {
        id: "mean_sentiment",
        label: "community sentiment",
        min: -1,
        max: 1,
        step: 0.01,
        get: (s) => s.market.mean_sentiment,
        apply: (st, v) => setMarketField(st, "mean_sentiment", v),
        format: sentimentLabel,
      },
      {
        id: "culture_multiplier",
        label: "culture multiplier",
        min: 0,
        max: 5,
        step: 0.05,
        get: (s) => s.market.culture_multiplier,
        apply: (st, v) => setMarketField(st, "culture_multiplier", v),
        format: (v) => v.toFixed(2),
      },
      {
        id: "market_cap_usd",
        label: "market cap",
        min: 1e7,
        max: 1e10,
        step: 1e7,
        get: (s) => s.market.market_cap_usd,
        apply: (st, v) => setMarketField(st, "market_cap_usd", v),
        format: usd,
      },
      {
        id: "daily_volume_usd",
        label: "daily volume",
        min: 0,
        max: 1e9,
        step: 1e6,
        get: (s) => s.market.daily_volume_usd,
        apply: (st, v) => setMarketField(st, "daily_volume_usd", v),
        format: usd,
      },
      {
        id: "event_probability",
        label: `p(${event?.label ?? "incident"})`,
        min: 0,
        max: 1,
        step: 0.005,
        get: (s) => s.threat.events[0]?.probability ?? 0,
        apply: (st, v) =>
          setEventField(st, event.label, "probability", v),
        format: (v) => v.toFixed(3),
      },
      {
        id: "event_damage",
        label: `damage rate (${event?.label ?? "incident"})`,
        min: 0,
        max: 1e7,
        step: 1e4,
        get: (s) => s.threat.events[0]?.damage_rate_usd_per_min ?? 0,
        apply: (st, v) =>
          setEventField(st, event.label, "damage_rate_usd_per_min", v),
        format: (v) => `${usd(v)}/min`,
      },
    ];
  }

  async start(): Promise<void> {
    this.renderShell();
    try {
      const health = await this.api.health();
      this.text(
        "#health",
        `service ${health.version} · calibration ${health.calibration_version}`,
      );
    } catch {
      this.text("#health", `service unreachable at ${this.api.baseUrl}`);
    }
    await this.refreshRanking();
  }

  private renderShell(): void {
    this.root.innerHTML = `
      <header>
        <h1>override what-if explorer</h1>
        <p id="health">connecting…</p>
      </header>
      <section id="controls"></section>
      <section>
        <div id="error" class="error" hidden></div>
        <div id="ranking"></div>
      </section>
      <section id="breakeven-section">
        <h2>sentiment break-even</h2>
        <div id="pair-pickers"></div>
        <div id="axis"><div id="marker" hidden></div></div>
        <p id="breakeven-label"></p>
      </section>
    `;
    const controls = this.root.querySelector("#controls") as HTMLElement;
    for (const spec of this.sliders) {
      const row = document.createElement("label");
      row.className = "control";
      row.innerHTML = `
        <span class="control-name">${spec.label}</span>
        <input type="range" id="${spec.id}" min="${spec.min}" max="${spec.max}"
               step="${spec.step}" value="${spec.get(this.state.scenario)}">
        <span class="control-value" id="${spec.id}-value">
          ${spec.format(spec.get(this.state.scenario))}
        </span>
      `;
      controls.appendChild(row);
      const input = row.querySelector("input") as HTMLInputElement;
      input.addEventListener("input", () => {
        const value = Number(input.value);
        this.state = spec.apply(this.state, value);
        this.text(`#${spec.id}-value`, spec.format(value));
        this.requestRank();
      });
    }
    this.renderPairPickers();
  }

  private renderPairPickers(): void {
    const host = this.root.querySelector("#pair-pickers") as HTMLElement;
    const scopes = ["network", "asset", "protocol", "module", "account"];
    const authorities = ["signer_set", "delegated_body", "governance"];
    const cells = scopes.flatMap((s) =>
      authorities.map((a) => `${s}:${a}`),
    );
    const options = (selected: string) =>
      cells
        .map(
          (c) =>
            `<option value="${c}" ${c === selected ? "selected" : ""}>` +
            `${c.replace(":", "/")}</option>`,
        )
        .join("");
    host.innerHTML = `
      <select id="pair-a">${options("account:delegated_body")}</select>
      <span>vs</span>
      <select id="pair-b">${options("account:signer_set")}</select>
    `;
    const update = () => {
      const parse = (id: string): CellRef => {
        const [scope, authority] = (
          this.root.querySelector(id) as HTMLSelectElement
        ).value.split(":");
        return { scope, authority } as CellRef;
      };
      this.state = pinPair(this.state, [parse("#pair-a"), parse("#pair-b")]);
      void this.refreshBreakeven();
    };
    this.root.querySelector("#pair-a")!.addEventListener("change", update);
    this.root.querySelector("#pair-b")!.addEventListener("change", update);
    update();
  }

  private async refreshRanking(): Promise<void> {
    const scenario = this.state.scenario;
    const response = await this.rankChannel.issue(async () => {
      try {
        return await this.api.rank(scenario);
      } catch (error) {
        this.showError(error);
        return null;
      }
    });
    if (!response) {
      return; // superseded or failed; keep the last good view
    }
    this.clearError();
    this.state = { ...this.state, lastRanking: response };
    this.renderRanking(response);
    void this.refreshBreakeven();
  }

  private renderRanking(response: RankResponse): void {
    const bars = buildRankingView(response);
    const host = this.root.querySelector("#ranking") as HTMLElement;
    host.innerHTML = bars
      .map((bar) => {
        const segments = bar.segments
          .map(
            (seg) =>
              `<div class="${SEGMENT_CLASSES[seg.kind]}" ` +
              `style="width:${seg.widthPct}%" ` +
              `title="${seg.kind}: ${usd(seg.valueUsd)}"></div>`,
          )
          .join("");
        return `
          <div class="bar-row ${bar.isBest ? "best" : ""}">
            <span class="bar-rank">${bar.rank}</span>
            <span class="bar-cell">${cellName(bar.scope, bar.authority)}</span>
            <div class="bar-track">
              <div class="bar" style="width:${bar.lengthPct}%">${segments}</div>
            </div>
            <span class="bar-total">${usd(bar.totalUsd)}</span>
          </div>
        `;
      })
      .join("");
  }

  private async refreshBreakeven(): Promise<void> {
    const pair = this.state.pinnedPair;
    if (!pair) {
      return;
    }
    const scenario = this.state.scenario;
    await this.breakevenChannel.issue(async () => {
      const markerEl = this.root.querySelector("#marker") as HTMLElement;
      try {
        const response = await this.api.breakeven(scenario, pair);
        this.state = { ...this.state, lastBreakeven: response };
        const marker = buildBreakevenMarker(response);
        if (marker) {
          markerEl.hidden = false;
          markerEl.style.left = `${marker.axisPct}%`;
          this.text(
            "#breakeven-label",
            `${marker.label} swap order at sentiment ${sentimentLabel(marker.crossing)}`,
          );
        } else {
          markerEl.hidden = true;
          this.text("#breakeven-label", "no crossing inside [-1, +1]");
        }
      } catch (error) {
        markerEl.hidden = true;
        if (error instanceof ServiceError && error.body.code === "degenerate") {
          this.text("#breakeven-label", "no crossing (identical cost lines)");
        } else {
          this.showError(error);
        }
      }
    });
  }

  private showError(error: unknown): void {
    const el = this.root.querySelector("#error") as HTMLElement;
    el.hidden = false;
    if (error instanceof ServiceError) {
      el.textContent = `${error.body.code} on ${error.body.field}: ${error.body.message}`;
    } else {
      el.textContent = String(error);
    }
  }

  private clearError(): void {
    (this.root.querySelector("#error") as HTMLElement).hidden = true;
  }

  private text(selector: string, value: string): void {
    const el = this.root.querySelector(selector);
    if (el) {
      el.textContent = value;
    }
  }
}

export async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "http://127.0.0.1:8322";
  const api = new ApiClient(base);
  const response = await fetch("fixtures/scenario_fixture.json");
  const scenario = (await response.json()) as ScenarioDocument;
  const app = new WhatIfApp(
    document.getElementById("app") as HTMLElement,
    api,
    scenario,
  );
  await app.start();
}
