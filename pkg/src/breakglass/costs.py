"""Expected-cost objective over the design space.

The total cost of owning an override mechanism decomposes into three parts:

* standing cost: market_cap * discount_rate * (1 - mean_sentiment), paid
  whether or not anything ever happens (owning the capability changes the
  trust model);
* expected containment loss: containment_time * sum_h Pr[h] * damage_rate(h),
  the damage accrued while an unfolding incident is still uncontained;
* blast cost: culture_multiplier * scope_fraction * daily_volume / 1440, the
  one-time collateral disruption of actually triggering. Width, not duration:
  holding a pause three times longer does not triple the shock, so this term
  is never multiplied by containment time.

Two accounting modes exist for the blast term. The literal mode charges it
under every event type including the no-incident branch (the expectation sums
over all of them); the trigger-only mode charges it only under event types
with positive damage, i.e. only when there is something to contain. Literal
is the default; both are first-class and tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from .errors import DegenerateError, DomainError
from .taxonomy import Architecture, Calibration, DEFAULT_CALIBRATION
from .taxonomy import validate as validate_arch

MINUTES_PER_DAY = 1440.0
PROB_TOLERANCE = 1e-9

NO_INCIDENT_LABEL = "no_incident"


@dataclass(frozen=True)
class ThreatEvent:
    """One adverse-event type: how likely, and how fast it burns value."""

    label: str
    probability: float
    damage_rate_usd_per_min: float


@dataclass(frozen=True)
class ThreatProfile:
    """A one-period distribution over event types, summing to probability 1.

    Use ``from_events`` to build one: if the listed events leave probability
    mass unaccounted for, an explicit no-incident event (zero damage) absorbs
    the remainder.
    """

    events: tuple[ThreatEvent, ...]

    @classmethod
    def from_events(
        cls, events: Iterable[tuple[str, float, float] | ThreatEvent]
    ) -> "ThreatProfile":
        evs = []
        for e in events:
            if not isinstance(e, ThreatEvent):
                label, p, dr = e
                e = ThreatEvent(str(label), float(p), float(dr))
            evs.append(e)
        total = math.fsum(e.probability for e in evs)
        if total > 1.0 + PROB_TOLERANCE:
            raise DomainError("probability", f"event probabilities sum to {total} > 1")
        remainder = 1.0 - total
        if remainder > PROB_TOLERANCE:
            evs.append(ThreatEvent(NO_INCIDENT_LABEL, remainder, 0.0))
        return validate_threat(cls(events=tuple(evs)))

    def trigger_probability(self) -> float:
        """Mass of event types that actually require containment."""
        return math.fsum(
            e.probability for e in self.events if e.damage_rate_usd_per_min > 0
        )

    def expected_damage_rate(self) -> float:
        """sum_h Pr[h] * damage_rate(h), in USD per minute."""
        return math.fsum(
            e.probability * e.damage_rate_usd_per_min for e in self.events
        )


def validate_threat(threat: ThreatProfile) -> ThreatProfile:
    if not threat.events:
        raise DomainError("events", "threat profile has no events")
    labels = set()
    for e in threat.events:
        if not 0.0 <= e.probability <= 1.0:
            raise DomainError(
                "probability", f"event {e.label!r} has probability {e.probability}"
            )
        if not e.damage_rate_usd_per_min >= 0:
            raise DomainError(
                "damage_rate", f"event {e.label!r} has damage rate {e.damage_rate_usd_per_min}"
            )
        if e.label in labels:
            raise DomainError("label", f"duplicate event label {e.label!r}")
        labels.add(e.label)
    total = math.fsum(e.probability for e in threat.events)
    if abs(total - 1.0) > PROB_TOLERANCE:
        raise DomainError("probability", f"probabilities sum to {total}, not 1")
    return threat


@dataclass(frozen=True)
class MarketContext:
    """Protocol-level economics the cost terms scale with."""

    market_cap_usd: float
    daily_volume_usd: float
    culture_multiplier: float = 1.0
    mean_sentiment: float = 0.0


def validate_context(ctx: MarketContext) -> MarketContext:
    if not ctx.market_cap_usd >= 0:
        raise DomainError("market_cap_usd", f"must be >= 0, got {ctx.market_cap_usd}")
    if not ctx.daily_volume_usd >= 0:
        raise DomainError(
            "daily_volume_usd", f"must be >= 0, got {ctx.daily_volume_usd}"
        )
    if not ctx.culture_multiplier >= 0:
        raise DomainError(
            "culture_multiplier", f"must be >= 0, got {ctx.culture_multiplier}"
        )
    if not -1.0 <= ctx.mean_sentiment <= 1.0:
        raise DomainError(
            "mean_sentiment", f"must be in [-1, 1], got {ctx.mean_sentiment}"
        )
    return ctx


@dataclass(frozen=True)
class CostBreakdown:
    """ExpectedCost split into its three components (USD)."""

    standing_cost_usd: float
    expected_containment_loss_usd: float
    expected_blast_cost_usd: float
    total_usd: float

    def as_dict(self) -> dict:
        return {
            "standing_cost_usd": self.standing_cost_usd,
            "expected_containment_loss_usd": self.expected_containment_loss_usd,
            "expected_blast_cost_usd": self.expected_blast_cost_usd,
            "total_usd": self.total_usd,
        }


def centralization_cost(arch: Architecture, ctx: MarketContext) -> float:
    """Standing cost of merely possessing the override capability."""
    validate_arch(arch)
    validate_context(ctx)
    return ctx.market_cap_usd * arch.discount_rate * (1.0 - ctx.mean_sentiment)


def blast_cost(arch: Architecture, ctx: MarketContext) -> float:
    """One-time collateral-disruption cost of triggering the mechanism."""
    validate_arch(arch)
    validate_context(ctx)
    return (
        ctx.culture_multiplier
        * arch.scope_fraction
        * ctx.daily_volume_usd
        / MINUTES_PER_DAY
    )


def expected_cost(
    arch: Architecture,
    threat: ThreatProfile,
    ctx: MarketContext,
    blast_on_trigger_only: bool = False,
) -> CostBreakdown:
    """Expected total cost of an architecture under a threat profile."""
    validate_arch(arch)
    validate_threat(threat)
    validate_context(ctx)
    standing = centralization_cost(arch, ctx)
    containment = arch.containment_time_min * threat.expected_damage_rate()
    per_trigger = blast_cost(arch, ctx)
    if blast_on_trigger_only:
        blast = per_trigger * threat.trigger_probability()
    else:
        blast = per_trigger * math.fsum(e.probability for e in threat.events)
    total = standing + containment + blast
    return CostBreakdown(
        standing_cost_usd=standing,
        expected_containment_loss_usd=containment,
        expected_blast_cost_usd=blast,
        total_usd=total,
    )


def rank_design_space(
    space: Sequence[Architecture],
    threat: ThreatProfile,
    ctx: MarketContext,
    blast_on_trigger_only: bool = False,
) -> list[tuple[Architecture, CostBreakdown]]:
    """Evaluate every architecture and sort cheapest first.

    Cost ties go to the more precise scope, then to the more distributed
    authority; the sort is stable beyond that.
    """
    if not space:
        raise DomainError("space", "design space is empty")
    evaluated = [
        (arch, expected_cost(arch, threat, ctx, blast_on_trigger_only))
        for arch in space
    ]
    evaluated.sort(
        key=lambda pair: (
            pair[1].total_usd,
            pair[0].scope.breadth,
            -pair[0].authority.distribution,
        )
    )
    return evaluated


def _cost_line(
    arch: Architecture,
    threat: ThreatProfile,
    ctx: MarketContext,
    blast_on_trigger_only: bool,
) -> tuple[float, float]:
    """ExpectedCost as an affine function of mean sentiment: (slope, intercept).

    cost(s) = -market_cap*discount * s + (market_cap*discount + containment + blast)
    """
    base = expected_cost(arch, threat, replace(ctx, mean_sentiment=0.0),
                         blast_on_trigger_only)
    slope = -ctx.market_cap_usd * arch.discount_rate
    return slope, base.total_usd


def breakeven_sentiment(
    a: Architecture,
    b: Architecture,
    threat: ThreatProfile,
    ctx: MarketContext,
    blast_on_trigger_only: bool = False,
) -> Optional[float]:
    """Mean sentiment at which the cost ordering of a and b flips.

    Closed form from the affine structure of the cost in sentiment. Returns
    None when the crossing lies outside [-1, 1] or the lines are parallel;
    raises DegenerateError when the two cost lines coincide.
    """
    slope_a, icept_a = _cost_line(a, threat, ctx, blast_on_trigger_only)
    slope_b, icept_b = _cost_line(b, threat, ctx, blast_on_trigger_only)
    dslope = slope_a - slope_b
    dicept = icept_a - icept_b
    if dslope == 0.0:
        if dicept == 0.0:
            raise DegenerateError(
                "architectures have identical cost at every sentiment"
            )
        return None
    crossing = -dicept / dslope
    if -1.0 <= crossing <= 1.0:
        return crossing
    return None


def breakeven_sentiment_bisect(
    a: Architecture,
    b: Architecture,
    threat: ThreatProfile,
    ctx: MarketContext,
    blast_on_trigger_only: bool = False,
    tol: float = 1e-12,
) -> Optional[float]:
    """Bisection fallback for the crossing; agrees with the closed form.

    Kept as an independent route for cross-checking: it only evaluates the
    full cost function at candidate sentiments.
    """

    def gap(s: float) -> float:
        c = replace(ctx, mean_sentiment=s)
        return (
            expected_cost(a, threat, c, blast_on_trigger_only).total_usd
            - expected_cost(b, threat, c, blast_on_trigger_only).total_usd
        )

    lo, hi = -1.0, 1.0
    glo, ghi = gap(lo), gap(hi)
    if glo == 0.0 and ghi == 0.0:
        raise DegenerateError("architectures have identical cost at every sentiment")
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if (glo > 0) == (ghi > 0):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gmid = gap(mid)
        if gmid == 0.0:
            return mid
        if (gmid > 0) == (glo > 0):
            lo, glo = mid, gmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# Parameters sweep() knows how to vary. Event-indexed parameters are spelled
# "probability:<label>" and "damage_rate:<label>".
SWEEPABLE_CONTEXT_PARAMS = (
    "mean_sentiment",
    "culture_multiplier",
    "market_cap_usd",
    "daily_volume_usd",
)


@dataclass(frozen=True)
class SweepRow:
    value: float
    best: Architecture
    best_cost: CostBreakdown


def _apply_param(
    param: str, value: float, threat: ThreatProfile, ctx: MarketContext
) -> tuple[ThreatProfile, MarketContext]:
    if param in SWEEPABLE_CONTEXT_PARAMS:
        return threat, validate_context(replace(ctx, **{param: value}))
    kind, _, label = param.partition(":")
    if kind in ("probability", "damage_rate") and label:
        incident = [e for e in threat.events if e.label != NO_INCIDENT_LABEL]
        if label not in {e.label for e in incident}:
            raise DomainError("param", f"no event labelled {label!r}")
        if kind == "probability":
            patched = [
                replace(e, probability=value) if e.label == label else e
                for e in incident
            ]
        else:
            patched = [
                replace(e, damage_rate_usd_per_min=value) if e.label == label else e
                for e in incident
            ]
        # The implicit no-incident event re-absorbs whatever mass remains.
        return ThreatProfile.from_events(patched), ctx
    raise DomainError("param", f"unknown sweep parameter {param!r}")


def sweep(
    param: str,
    start: float,
    stop: float,
    steps: int,
    threat: ThreatProfile,
    ctx: MarketContext,
    space: Sequence[Architecture],
    blast_on_trigger_only: bool = False,
) -> list[SweepRow]:
    """Best architecture and its cost at each point of a parameter grid."""
    if steps < 2:
        raise DomainError("steps", f"need at least 2 grid points, got {steps}")
    if not stop >= start:
        raise DomainError("range", f"stop {stop} < start {start}")
    rows = []
    for i in range(steps):
        value = start + (stop - start) * i / (steps - 1)
        t, c = _apply_param(param, value, threat, ctx)
        best, cost = rank_design_space(space, t, c, blast_on_trigger_only)[0]
        rows.append(SweepRow(value=value, best=best, best_cost=cost))
    return rows


# ---------------------------------------------------------------------------
# Qualitative protocol profile -> model inputs.
# ---------------------------------------------------------------------------

PROTOCOL_TYPES = ("amm", "lending", "bridge", "stablecoin", "other")
EXPLOIT_EXPOSURES = (
    "flash_loan",
    "reentrancy",
    "oracle",
    "access_control",
    "logic_error",
)
NOVELTY_LEVELS = ("known_variant", "zero_day")
AUDIT_STATUSES = ("none", "single", "multiple")
SECURITY_CLAIMS = ("immutable_claimed", "upgradeable_disclosed")


@dataclass(frozen=True)
class ProtocolProfile:
    """Qualitative description a designer can fill in without a risk model."""

    protocol_type: str
    exploit_exposure: str
    novelty: str
    audit_status: str
    security_claims: str
    tvl_usd: float
    mean_sentiment: float = 0.0


@dataclass(frozen=True)
class ModelAdjustments:
    """Context-side knobs implied by a profile, to merge into a MarketContext."""

    market_cap_usd: float
    daily_volume_usd: float
    mean_sentiment: float
    discount_rate_multiplier: float


def profile_to_model(
    profile: ProtocolProfile, calibration: Calibration = DEFAULT_CALIBRATION
) -> tuple[ThreatProfile, ModelAdjustments]:
    """Deterministic lookup-table mapping from a qualitative profile.

    Exposure class sets the damage-rate tier, a zero-day multiplies it,
    audits scale the event probability down, claimed immutability scales the
    effective discount rate up, and TVL feeds the market-size inputs. All
    magnitudes come from the calibration's profile tier table.
    """
    tiers = calibration.profile_tiers
    for fieldname, value, allowed in (
        ("protocol_type", profile.protocol_type, PROTOCOL_TYPES),
        ("exploit_exposure", profile.exploit_exposure, EXPLOIT_EXPOSURES),
        ("novelty", profile.novelty, NOVELTY_LEVELS),
        ("audit_status", profile.audit_status, AUDIT_STATUSES),
        ("security_claims", profile.security_claims, SECURITY_CLAIMS),
    ):
        if value not in allowed:
            raise DomainError(fieldname, f"unknown value {value!r}")
    if not profile.tvl_usd >= 0:
        raise DomainError("tvl_usd", f"must be >= 0, got {profile.tvl_usd}")
    if not -1.0 <= profile.mean_sentiment <= 1.0:
        raise DomainError(
            "mean_sentiment", f"must be in [-1, 1], got {profile.mean_sentiment}"
        )

    probability = (
        tiers.base_event_probability[profile.protocol_type]
        * tiers.audit_probability_scale[profile.audit_status]
    )
    damage_rate = (
        profile.tvl_usd
        * tiers.damage_rate_fraction_per_min[profile.exploit_exposure]
        * tiers.novelty_damage_multiplier[profile.novelty]
    )
    threat = ThreatProfile.from_events(
        [(f"{profile.exploit_exposure}_{profile.novelty}", probability, damage_rate)]
    )
    adjustments = ModelAdjustments(
        market_cap_usd=profile.tvl_usd * tiers.tvl_market_cap_multiple,
        daily_volume_usd=profile.tvl_usd * tiers.tvl_daily_volume_fraction,
        mean_sentiment=profile.mean_sentiment,
        discount_rate_multiplier=tiers.claims_discount_multiplier[
            profile.security_claims
        ],
    )
    return threat, adjustments
