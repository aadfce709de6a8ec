"""Incident dataset ingestion, stratification, and performance statistics.

The tabular schema is CSV (UTF-8, header row) with columns named exactly
like the IncidentRecord fields; a JSON list of objects with the same field
names is accepted interchangeably. Empty cells mean "unknown". Ingestion
never drops rows silently: bad rows come back as RowError entries next to
the successfully parsed records, and the round trip
ingest -> serialize -> ingest is bit-exact (floats are written in shortest
round-trip form).

Medians use the lower-median convention on even counts. Success is recorded
input data (was containment achieved), never derived from loss figures.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, fields as dc_fields
from datetime import date
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, SchemaError
from .taxonomy import AuthorityMode, ScopeLevel, AUTHORITY_ORDER, SCOPE_ORDER

ATTACK_VECTORS = (
    "logic_error",
    "access_control",
    "oracle_manipulation",
    "flash_loan",
    "reentrancy",
    "bridge",
    "key_compromise",
    "other",
)
CATEGORIES = ("systemic", "non_addressable", "eligible")


@dataclass(frozen=True)
class IncidentRecord:
    id: str
    date: date
    chain: str
    protocol: str
    loss_usd: float
    loss_prevented_usd: float
    attack_vector: str
    category: str
    intervened: bool
    authority: Optional[AuthorityMode] = None
    scope: Optional[ScopeLevel] = None
    time_to_detect_min: Optional[float] = None
    time_to_contain_min: Optional[float] = None
    success: Optional[bool] = None
    sentiment: Optional[float] = None


COLUMNS = tuple(f.name for f in dc_fields(IncidentRecord))


def validate_record(rec: IncidentRecord) -> IncidentRecord:
    if not rec.loss_usd >= 0:
        raise DomainError("loss_usd", f"must be >= 0, got {rec.loss_usd}")
    if not rec.loss_prevented_usd >= 0:
        raise DomainError(
            "loss_prevented_usd", f"must be >= 0, got {rec.loss_prevented_usd}"
        )
    if rec.attack_vector not in ATTACK_VECTORS:
        raise DomainError("attack_vector", f"unknown vector {rec.attack_vector!r}")
    if rec.category not in CATEGORIES:
        raise DomainError("category", f"unknown category {rec.category!r}")
    if rec.intervened and rec.category != "eligible":
        raise DomainError(
            "intervened",
            f"intervened rows must be intervention-eligible, got {rec.category!r}",
        )
    for name in ("time_to_detect_min", "time_to_contain_min"):
        value = getattr(rec, name)
        if value is not None and not value >= 0:
            raise DomainError(name, f"must be >= 0 when present, got {value}")
    if rec.sentiment is not None and not -1.0 <= rec.sentiment <= 1.0:
        raise DomainError("sentiment", f"must be in [-1, 1], got {rec.sentiment}")
    return rec


@dataclass(frozen=True)
class RowError:
    row: int
    field: str
    message: str


@dataclass(frozen=True)
class IngestResult:
    records: list[IncidentRecord]
    errors: list[RowError]


def _parse_optional_float(text: str, field: str) -> Optional[float]:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise DomainError(field, f"not a number: {text!r}") from None


def _parse_bool(text: str, field: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise DomainError(field, f"not a boolean: {text!r}")


def _record_from_strings(row: dict[str, str]) -> IncidentRecord:
    def get(name: str) -> str:
        return (row.get(name) or "").strip()

    loss = _parse_optional_float(get("loss_usd"), "loss_usd")
    if loss is None:
        raise DomainError("loss_usd", "required, got empty cell")
    # Prevented losses default to zero: most rows never record them.
    prevented = _parse_optional_float(get("loss_prevented_usd"), "loss_prevented_usd")
    try:
        parsed_date = date.fromisoformat(get("date"))
    except ValueError:
        raise DomainError("date", f"not an ISO date: {get('date')!r}") from None
    authority = get("authority")
    scope = get("scope")
    success = get("success")
    sentiment = _parse_optional_float(get("sentiment"), "sentiment")
    rec = IncidentRecord(
        id=get("id"),
        date=parsed_date,
        chain=get("chain"),
        protocol=get("protocol"),
        loss_usd=loss,
        loss_prevented_usd=prevented if prevented is not None else 0.0,
        attack_vector=get("attack_vector"),
        category=get("category"),
        intervened=_parse_bool(get("intervened"), "intervened"),
        authority=AuthorityMode.parse(authority) if authority else None,
        scope=ScopeLevel.parse(scope) if scope else None,
        time_to_detect_min=_parse_optional_float(
            get("time_to_detect_min"), "time_to_detect_min"
        ),
        time_to_contain_min=_parse_optional_float(
            get("time_to_contain_min"), "time_to_contain_min"
        ),
        success=_parse_bool(success, "success") if success else None,
        sentiment=sentiment,
    )
    return validate_record(rec)


def _check_header(names: Sequence[str]) -> None:
    got = list(names)
    missing = [c for c in COLUMNS if c not in got]
    unknown = [c for c in got if c not in COLUMNS]
    if missing or unknown:
        raise SchemaError(
            f"column mismatch: missing {missing or 'none'}, unknown {unknown or 'none'}"
        )


def ingest(source: str | Path | io.TextIOBase) -> IngestResult:
    """Parse an incident table from CSV or a JSON list of objects.

    Returns every parseable record plus one RowError per rejected row; the
    header itself failing raises SchemaError.
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        text = path.read_text(encoding="utf-8")
        is_json = path.suffix.lower() == ".json"
    else:
        text = source.read()
        is_json = text.lstrip()[:1] in ("[", "{")

    records: list[IncidentRecord] = []
    errors: list[RowError] = []
    if is_json:
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
        if not isinstance(rows, list):
            raise SchemaError("JSON input must be a list of row objects")
        for i, row in enumerate(rows):
            if not isinstance(row, dict):
                errors.append(RowError(i, "row", "not an object"))
                continue
            _check_header(list(row.keys()))
            try:
                records.append(
                    _record_from_strings({k: _to_cell(v) for k, v in row.items()})
                )
            except DomainError as exc:
                errors.append(RowError(i, exc.field, exc.message))
        return IngestResult(records=records, errors=errors)

    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        raise SchemaError("empty input: no header row")
    _check_header(reader.fieldnames)
    for lineno, row in enumerate(reader, start=2):
        try:
            records.append(_record_from_strings(row))
        except DomainError as exc:
            errors.append(RowError(lineno, exc.field, exc.message))
    return IngestResult(records=records, errors=errors)


def _to_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _record_to_strings(rec: IncidentRecord) -> dict[str, str]:
    return {
        "id": rec.id,
        "date": rec.date.isoformat(),
        "chain": rec.chain,
        "protocol": rec.protocol,
        "loss_usd": repr(rec.loss_usd),
        "loss_prevented_usd": repr(rec.loss_prevented_usd),
        "attack_vector": rec.attack_vector,
        "category": rec.category,
        "intervened": "true" if rec.intervened else "false",
        "authority": rec.authority.value if rec.authority else "",
        "scope": rec.scope.value if rec.scope else "",
        "time_to_detect_min": (
            repr(rec.time_to_detect_min) if rec.time_to_detect_min is not None else ""
        ),
        "time_to_contain_min": (
            repr(rec.time_to_contain_min)
            if rec.time_to_contain_min is not None
            else ""
        ),
        "success": "" if rec.success is None else ("true" if rec.success else "false"),
        "sentiment": repr(rec.sentiment) if rec.sentiment is not None else "",
    }


def write_csv(records: Sequence[IncidentRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=COLUMNS)
        writer.writeheader()
        for rec in records:
            writer.writerow(_record_to_strings(rec))


def to_csv_text(records: Sequence[IncidentRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=COLUMNS)
    writer.writeheader()
    for rec in records:
        writer.writerow(_record_to_strings(rec))
    return buffer.getvalue()


@dataclass(frozen=True)
class LayerStat:
    count: int
    loss_usd: float


@dataclass(frozen=True)
class StratificationSummary:
    """Counts and losses per layer; intervened is a subset of eligible."""

    systemic: LayerStat
    non_addressable: LayerStat
    eligible: LayerStat
    intervened: LayerStat

    @property
    def total(self) -> LayerStat:
        return LayerStat(
            count=self.systemic.count + self.non_addressable.count + self.eligible.count,
            loss_usd=math.fsum(
                [self.systemic.loss_usd, self.non_addressable.loss_usd, self.eligible.loss_usd]
            ),
        )


def stratify(records: Sequence[IncidentRecord]) -> StratificationSummary:
    """Split records into the four layers and total their losses."""

    def layer(rows: list[IncidentRecord]) -> LayerStat:
        return LayerStat(count=len(rows), loss_usd=math.fsum(r.loss_usd for r in rows))

    systemic = [r for r in records if r.category == "systemic"]
    non_addressable = [r for r in records if r.category == "non_addressable"]
    eligible = [r for r in records if r.category == "eligible"]
    intervened = [r for r in eligible if r.intervened]
    return StratificationSummary(
        systemic=layer(systemic),
        non_addressable=layer(non_addressable),
        eligible=layer(eligible),
        intervened=layer(intervened),
    )


def lower_median(values: Sequence[float]) -> Optional[float]:
    """Median with the lower of the two middle values on even counts."""
    if not values:
        return None
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


@dataclass(frozen=True)
class AuthorityStat:
    count: int
    share: Optional[float]
    median_time_to_contain_min: Optional[float]
    success_rate: Optional[float]
    loss_prevented_usd: float


def authority_stats(
    records: Sequence[IncidentRecord],
) -> dict[AuthorityMode, AuthorityStat]:
    """Per-authority performance over the intervened rows.

    Shares are over all intervened rows in the input, so rows whose
    authority was never attributed dilute every share rather than being
    silently dropped.
    """
    intervened = [r for r in records if r.intervened]
    total = len(intervened)
    out = {}
    for mode in AUTHORITY_ORDER:
        rows = [r for r in intervened if r.authority is mode]
        times = [r.time_to_contain_min for r in rows if r.time_to_contain_min is not None]
        flagged = [r.success for r in rows if r.success is not None]
        out[mode] = AuthorityStat(
            count=len(rows),
            share=(len(rows) / total) if total else None,
            median_time_to_contain_min=lower_median(times),
            success_rate=(sum(flagged) / len(flagged)) if flagged else None,
            loss_prevented_usd=math.fsum(r.loss_prevented_usd for r in rows),
        )
    return out


@dataclass(frozen=True)
class CellStat:
    count: int
    success_rate: Optional[float]


def scope_authority_matrix(
    records: Sequence[IncidentRecord],
) -> dict[tuple[ScopeLevel, AuthorityMode], CellStat]:
    """5x3 grid of intervention counts and success rates."""
    intervened = [
        r for r in records if r.intervened and r.scope and r.authority
    ]
    out = {}
    for scope in SCOPE_ORDER:
        for mode in AUTHORITY_ORDER:
            rows = [r for r in intervened if r.scope is scope and r.authority is mode]
            flagged = [r.success for r in rows if r.success is not None]
            out[(scope, mode)] = CellStat(
                count=len(rows),
                success_rate=(sum(flagged) / len(flagged)) if flagged else None,
            )
    return out


@dataclass(frozen=True)
class VectorStat:
    count: int
    loss_usd: float


def attack_vector_stats(
    records: Sequence[IncidentRecord],
) -> dict[str, VectorStat]:
    """Counts and total losses per attack vector over all records."""
    out = {}
    for vector in ATTACK_VECTORS:
        rows = [r for r in records if r.attack_vector == vector]
        out[vector] = VectorStat(
            count=len(rows), loss_usd=math.fsum(r.loss_usd for r in rows)
        )
    return out


# ---------------------------------------------------------------------------
# Synthetic reference-shaped dataset.
#
# The full incident universe behind the published aggregates is not
# redistributable, so tests and demos run on a synthesized stand-in whose
# layer counts and layer loss totals match the published aggregates exactly
# (integer dollars, so the sums are exact in float64). Everything row-level
# (names, dates, vectors, timings) is generated and NON-AUTHORITATIVE.
# ---------------------------------------------------------------------------

REFERENCE_LAYER_COUNTS = {
    "systemic": 10,
    "non_addressable": 94,
    "eligible": 601,
    "intervened": 130,
}
REFERENCE_LAYER_LOSSES_USD = {
    "systemic": 61_800_000_000,
    "non_addressable": 7_410_000_000,
    "eligible": 9_600_000_000,
    "intervened": 7_510_000_000,
}

_CHAINS = ("ethereum", "bsc", "polygon", "arbitrum", "solana", "avalanche", "base")
_TECH_VECTORS = (
    "logic_error",
    "access_control",
    "oracle_manipulation",
    "flash_loan",
    "reentrancy",
    "bridge",
)


def _split_integer_total(total: int, n: int, rng: np.random.Generator) -> list[int]:
    """n positive integers summing exactly to total, heavy-tailed."""
    if n <= 0:
        return []
    if total < n:
        raise DomainError("total", f"cannot split {total} into {n} positive parts")
    weights = rng.pareto(1.1, size=n) + 1e-9
    raw = weights / weights.sum() * (total - n)
    base = np.floor(raw).astype(np.int64)
    remainder = int((total - n) - base.sum())
    order = np.argsort(-(raw - base), kind="stable")
    base[order[:remainder]] += 1
    return [int(v) + 1 for v in base]


def synthesize_reference_dataset(seed: int = 0) -> list[IncidentRecord]:
    """705 synthetic rows whose layer aggregates match the published totals."""
    rng = np.random.Generator(np.random.Philox(seed))
    eligible_only = (
        REFERENCE_LAYER_COUNTS["eligible"] - REFERENCE_LAYER_COUNTS["intervened"]
    )
    eligible_only_loss = (
        REFERENCE_LAYER_LOSSES_USD["eligible"] - REFERENCE_LAYER_LOSSES_USD["intervened"]
    )
    plan = [
        ("systemic", REFERENCE_LAYER_COUNTS["systemic"],
         REFERENCE_LAYER_LOSSES_USD["systemic"], False),
        ("non_addressable", REFERENCE_LAYER_COUNTS["non_addressable"],
         REFERENCE_LAYER_LOSSES_USD["non_addressable"], False),
        ("eligible", eligible_only, eligible_only_loss, False),
        ("eligible", REFERENCE_LAYER_COUNTS["intervened"],
         REFERENCE_LAYER_LOSSES_USD["intervened"], True),
    ]
    records = []
    serial = 0
    for category, count, loss_total, intervened in plan:
        losses = _split_integer_total(loss_total, count, rng)
        for loss in losses:
            serial += 1
            day = date(2016, 1, 1).toordinal() + int(rng.integers(0, 3650))
            if category == "systemic":
                vector = "other"
            elif category == "non_addressable":
                vector = str(rng.choice(["other", "key_compromise"]))
            else:
                vector = str(rng.choice(_TECH_VECTORS))
            authority = scope = None
            detect = contain = success = None
            if intervened:
                authority = AuthorityMode(
                    str(rng.choice(
                        ["signer_set"] * 7 + ["delegated_body"] * 2 + ["governance"]
                    ))
                )
                scope = ScopeLevel(str(rng.choice([s.value for s in SCOPE_ORDER])))
                base_time = {
                    AuthorityMode.SIGNER_SET: 30.0,
                    AuthorityMode.DELEGATED_BODY: 75.0,
                    AuthorityMode.GOVERNANCE: 4320.0,
                }[authority]
                detect = float(np.round(rng.lognormal(2.5, 1.0), 1))
                contain = float(np.round(base_time * rng.lognormal(0.0, 0.5), 1))
                success = bool(rng.random() < 0.5)
            records.append(
                validate_record(
                    IncidentRecord(
                        id=f"SYN-{serial:04d}",
                        date=date.fromordinal(day),
                        chain=str(rng.choice(_CHAINS)),
                        protocol=f"protocol_{serial:04d}",
                        loss_usd=float(loss),
                        loss_prevented_usd=0.0,
                        attack_vector=vector,
                        category=category,
                        intervened=intervened,
                        authority=authority,
                        scope=scope,
                        time_to_detect_min=detect,
                        time_to_contain_min=contain,
                        success=success,
                    )
                )
            )
    return records
