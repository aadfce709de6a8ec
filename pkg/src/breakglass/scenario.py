"""Scenario files: one JSON document describing a full what-if case.

A scenario bundles a threat profile, market context, evaluation flags,
optional per-cell architecture overrides, and an optional dataset
reference. The same document drives the library, the CLI, and the HTTP
service, and round-trips losslessly through to_dict/from_dict.

Schema (all floats are plain JSON numbers, never strings):

    {
      "schema": "breakglass-scenario/1",
      "description": "free text",
      "threat": {"events": [
          {"label": "major_exploit", "probability": 0.01,
           "damage_rate_usd_per_min": 1000000.0}
      ]},
      "market": {"market_cap_usd": 1e9, "daily_volume_usd": 1.44e6,
                 "culture_multiplier": 1.0, "mean_sentiment": 0.028},
      "flags": {"blast_on_trigger_only": false},
      "architectures": [  // optional per-cell overrides
          {"scope": "account", "authority": "delegated_body",
           "containment_time_min": 90.0}
      ],
      "dataset": "relative/or/absolute.csv"  // optional
    }

Unlisted events leave probability mass to an implicit no-incident event.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .costs import MarketContext, ThreatProfile, validate_context
from .errors import SchemaError
from .taxonomy import Architecture, Calibration, DEFAULT_CALIBRATION, patch_space

SCHEMA_ID = "breakglass-scenario/1"

BUNDLED_SCENARIOS = {
    "fixture": "data/scenario_fixture.json",
    "sweep": "data/scenario_sweep.json",
}


@dataclass(frozen=True)
class ScenarioDocument:
    threat: ThreatProfile
    market: MarketContext
    blast_on_trigger_only: bool = False
    architecture_overrides: tuple[dict, ...] = ()
    dataset: Optional[str] = None
    description: str = ""

    def space(self, calibration: Calibration = DEFAULT_CALIBRATION) -> list[Architecture]:
        base = calibration.design_space()
        if not self.architecture_overrides:
            return base
        return patch_space(base, self.architecture_overrides)

    def to_dict(self) -> dict:
        doc = {
            "schema": SCHEMA_ID,
            "description": self.description,
            "threat": {
                "events": [
                    {
                        "label": e.label,
                        "probability": e.probability,
                        "damage_rate_usd_per_min": e.damage_rate_usd_per_min,
                    }
                    for e in self.threat.events
                ]
            },
            "market": {
                "market_cap_usd": self.market.market_cap_usd,
                "daily_volume_usd": self.market.daily_volume_usd,
                "culture_multiplier": self.market.culture_multiplier,
                "mean_sentiment": self.market.mean_sentiment,
            },
            "flags": {"blast_on_trigger_only": self.blast_on_trigger_only},
        }
        if self.architecture_overrides:
            doc["architectures"] = [dict(p) for p in self.architecture_overrides]
        if self.dataset is not None:
            doc["dataset"] = self.dataset
        return doc


def _require(mapping: dict, key: str, kind, where: str):
    if key not in mapping:
        raise SchemaError(f"{where}: missing required key {key!r}")
    value = mapping[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"{where}.{key}: expected a number, got {value!r}")
        return float(value)
    if not isinstance(value, kind):
        raise SchemaError(f"{where}.{key}: expected {kind.__name__}, got {value!r}")
    return value


def from_dict(doc: dict) -> ScenarioDocument:
    if not isinstance(doc, dict):
        raise SchemaError("scenario must be a JSON object")
    if doc.get("schema", SCHEMA_ID) != SCHEMA_ID:
        raise SchemaError(f"unsupported scenario schema {doc.get('schema')!r}")
    threat_doc = _require(doc, "threat", dict, "scenario")
    events_doc = _require(threat_doc, "events", list, "scenario.threat")
    events = []
    for i, e in enumerate(events_doc):
        if not isinstance(e, dict):
            raise SchemaError(f"scenario.threat.events[{i}]: expected an object")
        where = f"scenario.threat.events[{i}]"
        events.append(
            (
                _require(e, "label", str, where),
                _require(e, "probability", float, where),
                _require(e, "damage_rate_usd_per_min", float, where),
            )
        )
    market_doc = _require(doc, "market", dict, "scenario")
    market = MarketContext(
        market_cap_usd=_require(market_doc, "market_cap_usd", float, "scenario.market"),
        daily_volume_usd=_require(
            market_doc, "daily_volume_usd", float, "scenario.market"
        ),
        culture_multiplier=float(market_doc.get("culture_multiplier", 1.0)),
        mean_sentiment=float(market_doc.get("mean_sentiment", 0.0)),
    )
    flags = doc.get("flags", {})
    if not isinstance(flags, dict):
        raise SchemaError("scenario.flags: expected an object")
    overrides = doc.get("architectures", [])
    if not isinstance(overrides, list):
        raise SchemaError("scenario.architectures: expected a list")
    dataset = doc.get("dataset")
    if dataset is not None and not isinstance(dataset, str):
        raise SchemaError("scenario.dataset: expected a string path")
    return ScenarioDocument(
        threat=ThreatProfile.from_events(events),
        market=validate_context(market),
        blast_on_trigger_only=bool(flags.get("blast_on_trigger_only", False)),
        architecture_overrides=tuple(overrides),
        dataset=dataset,
        description=str(doc.get("description", "")),
    )


def loads(text: str) -> ScenarioDocument:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid scenario JSON: {exc}") from None
    return from_dict(doc)


def load(name_or_path: str | Path) -> ScenarioDocument:
    """Load a scenario from a path, or by bundled name ('fixture', 'sweep')."""
    name = str(name_or_path)
    if name in BUNDLED_SCENARIOS:
        text = (
            resources.files("breakglass")
            .joinpath(BUNDLED_SCENARIOS[name])
            .read_text("utf-8")
        )
        return loads(text)
    return loads(Path(name_or_path).read_text(encoding="utf-8"))


def dumps(scenario: ScenarioDocument, indent: Optional[int] = 2) -> str:
    return json.dumps(scenario.to_dict(), indent=indent, sort_keys=True)


def save(scenario: ScenarioDocument, path: str | Path) -> None:
    Path(path).write_text(dumps(scenario) + "\n", encoding="utf-8")
