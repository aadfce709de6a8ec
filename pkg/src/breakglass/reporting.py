"""Canonical result payloads shared by the CLI and the HTTP service.

Both interfaces call the same builders below, so for identical inputs they
emit numerically identical structures; canonical_json then pins one byte
representation (sorted keys, shortest round-trip floats).
"""

from __future__ import annotations

import json
from . import __version__
from .costs import (
    CostBreakdown,
    breakeven_sentiment,
    expected_cost,
    rank_design_space,
    sweep,
)
from .scenario import ScenarioDocument
from .taxonomy import Architecture, AuthorityMode, Calibration, DEFAULT_CALIBRATION
from .taxonomy import ScopeLevel


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def architecture_payload(arch: Architecture) -> dict:
    return {
        "scope": arch.scope.value,
        "authority": arch.authority.value,
        "containment_time_min": arch.containment_time_min,
        "discount_rate": arch.discount_rate,
        "scope_fraction": arch.scope_fraction,
        "label": arch.label,
    }


def _entry(arch: Architecture, cost: CostBreakdown) -> dict:
    return {"architecture": architecture_payload(arch), "cost": cost.as_dict()}


def evaluate_payload(
    scenario: ScenarioDocument, calibration: Calibration = DEFAULT_CALIBRATION
) -> dict:
    space = scenario.space(calibration)
    results = [
        _entry(arch, expected_cost(arch, scenario.threat, scenario.market,
                                   scenario.blast_on_trigger_only))
        for arch in space
    ]
    return {"results": results}


def rank_payload(
    scenario: ScenarioDocument, calibration: Calibration = DEFAULT_CALIBRATION
) -> dict:
    ranked = rank_design_space(
        scenario.space(calibration),
        scenario.threat,
        scenario.market,
        scenario.blast_on_trigger_only,
    )
    results = [
        dict(_entry(arch, cost), rank=i + 1) for i, (arch, cost) in enumerate(ranked)
    ]
    return {"results": results}


def breakeven_payload(
    scenario: ScenarioDocument,
    cell_a: tuple[ScopeLevel, AuthorityMode],
    cell_b: tuple[ScopeLevel, AuthorityMode],
    calibration: Calibration = DEFAULT_CALIBRATION,
) -> dict:
    space = {arch.cell: arch for arch in scenario.space(calibration)}
    crossing = breakeven_sentiment(
        space[cell_a],
        space[cell_b],
        scenario.threat,
        scenario.market,
        scenario.blast_on_trigger_only,
    )
    return {
        "a": {"scope": cell_a[0].value, "authority": cell_a[1].value},
        "b": {"scope": cell_b[0].value, "authority": cell_b[1].value},
        "crossing": crossing,
    }


def sweep_payload(
    scenario: ScenarioDocument,
    param: str,
    start: float,
    stop: float,
    steps: int,
    calibration: Calibration = DEFAULT_CALIBRATION,
) -> dict:
    rows = sweep(
        param,
        start,
        stop,
        steps,
        scenario.threat,
        scenario.market,
        scenario.space(calibration),
        scenario.blast_on_trigger_only,
    )
    return {
        "param": param,
        "rows": [
            {
                "value": row.value,
                "best": architecture_payload(row.best),
                "cost": row.best_cost.as_dict(),
            }
            for row in rows
        ],
    }


def defaults_payload(calibration: Calibration = DEFAULT_CALIBRATION) -> dict:
    return {
        "version": __version__,
        "calibration_version": calibration.version(),
        "source": calibration.source,
        "rows": calibration.annotated_rows(),
    }


def format_usd(value: float) -> str:
    return f"{value:,.2f}"


def rank_table_text(payload: dict) -> str:
    """Fixed-width table for terminal output; numbers match the payload."""
    header = (
        f"{'rank':>4}  {'scope':<9} {'authority':<15} "
        f"{'standing':>18} {'containment':>18} {'blast':>16} {'total':>20}"
    )
    lines = [header, "-" * len(header)]
    for row in payload["results"]:
        arch, cost = row["architecture"], row["cost"]
        rank = row.get("rank", "")
        lines.append(
            f"{rank:>4}  {arch['scope']:<9} {arch['authority']:<15} "
            f"{format_usd(cost['standing_cost_usd']):>18} "
            f"{format_usd(cost['expected_containment_loss_usd']):>18} "
            f"{format_usd(cost['expected_blast_cost_usd']):>16} "
            f"{format_usd(cost['total_usd']):>20}"
        )
    return "\n".join(lines)
