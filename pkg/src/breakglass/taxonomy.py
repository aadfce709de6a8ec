"""Design space for emergency-override architectures.

An architecture is one cell of the scope x authority grid plus its
calibration: how long it takes to trigger (containment time), what standing
trust discount merely possessing it imposes, and what share of activity a
trigger disrupts. The built-in calibration table can be partially or fully
overridden from a flat ``key = value`` config file (see ``load_calibration``).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DomainError, SchemaError


class ScopeLevel(Enum):
    """Precision of an intervention, from chain-wide halt to single address."""

    NETWORK = "network"
    ASSET = "asset"
    PROTOCOL = "protocol"
    MODULE = "module"
    ACCOUNT = "account"

    @property
    def breadth(self) -> int:
        """Blast breadth rank: account = 0 (most precise) up to network = 4."""
        return _SCOPE_BREADTH[self]

    @classmethod
    def parse(cls, text: str) -> "ScopeLevel":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise DomainError("scope", f"unknown scope level {text!r}") from None


class AuthorityMode(Enum):
    """Who can pull the trigger, from a fixed keyholder set to a full vote."""

    SIGNER_SET = "signer_set"
    DELEGATED_BODY = "delegated_body"
    GOVERNANCE = "governance"

    @property
    def distribution(self) -> int:
        """Authority distribution rank: signer set = 0 (most concentrated)."""
        return _AUTHORITY_DISTRIBUTION[self]

    @classmethod
    def parse(cls, text: str) -> "AuthorityMode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise DomainError("authority", f"unknown authority mode {text!r}") from None


_SCOPE_BREADTH = {
    ScopeLevel.ACCOUNT: 0,
    ScopeLevel.MODULE: 1,
    ScopeLevel.PROTOCOL: 2,
    ScopeLevel.ASSET: 3,
    ScopeLevel.NETWORK: 4,
}

_AUTHORITY_DISTRIBUTION = {
    AuthorityMode.SIGNER_SET: 0,
    AuthorityMode.DELEGATED_BODY: 1,
    AuthorityMode.GOVERNANCE: 2,
}

# Grid enumeration order used everywhere: broadest scope first, most
# concentrated authority first. Deterministic by construction.
SCOPE_ORDER = (
    ScopeLevel.NETWORK,
    ScopeLevel.ASSET,
    ScopeLevel.PROTOCOL,
    ScopeLevel.MODULE,
    ScopeLevel.ACCOUNT,
)
AUTHORITY_ORDER = (
    AuthorityMode.SIGNER_SET,
    AuthorityMode.DELEGATED_BODY,
    AuthorityMode.GOVERNANCE,
)


@dataclass(frozen=True)
class Architecture:
    """One emergency-override design: a grid cell plus its calibration.

    containment_time_min is minutes from detection to executed intervention;
    discount_rate is the standing trust discount as a fraction of market cap;
    scope_fraction is the share of activity disrupted by triggering.
    Identity is the (scope, authority) pair; the label is cosmetic.
    """

    scope: ScopeLevel
    authority: AuthorityMode
    containment_time_min: float
    discount_rate: float
    scope_fraction: float
    label: str = ""

    @property
    def cell(self) -> tuple[ScopeLevel, AuthorityMode]:
        return (self.scope, self.authority)


def validate(arch: Architecture) -> Architecture:
    """Return the architecture unchanged if every field is in range.

    Raises DomainError naming the offending field otherwise.
    """
    if not isinstance(arch.scope, ScopeLevel):
        raise DomainError("scope", f"not a ScopeLevel: {arch.scope!r}")
    if not isinstance(arch.authority, AuthorityMode):
        raise DomainError("authority", f"not an AuthorityMode: {arch.authority!r}")
    if not arch.containment_time_min >= 0:
        raise DomainError(
            "containment_time_min", f"must be >= 0, got {arch.containment_time_min}"
        )
    if not arch.discount_rate >= 0:
        raise DomainError("discount_rate", f"must be >= 0, got {arch.discount_rate}")
    if not 0.0 <= arch.scope_fraction <= 1.0:
        raise DomainError(
            "scope_fraction", f"must be in [0, 1], got {arch.scope_fraction}"
        )
    return arch


@dataclass(frozen=True)
class ProfileTiers:
    """Numeric tiers behind the qualitative protocol-profile mapping.

    Single-source config table; only the directions are calibrated facts
    (flash loans drain fastest, audits lower incident probability, claimed
    immutability raises the trust tax). Magnitudes are overridable defaults.
    """

    base_event_probability: Mapping[str, float] = field(
        default_factory=lambda: {
            "bridge": 0.15,
            "lending": 0.10,
            "amm": 0.08,
            "stablecoin": 0.06,
            "other": 0.05,
        }
    )
    # Fraction of TVL drained per minute while uncontained, by exposure class.
    damage_rate_fraction_per_min: Mapping[str, float] = field(
        default_factory=lambda: {
            "flash_loan": 0.50,
            "oracle": 0.10,
            "reentrancy": 0.05,
            "access_control": 0.02,
            "logic_error": 0.01,
        }
    )
    novelty_damage_multiplier: Mapping[str, float] = field(
        default_factory=lambda: {"known_variant": 1.0, "zero_day": 2.0}
    )
    audit_probability_scale: Mapping[str, float] = field(
        default_factory=lambda: {"none": 1.0, "single": 0.6, "multiple": 0.3}
    )
    claims_discount_multiplier: Mapping[str, float] = field(
        default_factory=lambda: {
            "immutable_claimed": 1.5,
            "upgradeable_disclosed": 1.0,
        }
    )
    tvl_market_cap_multiple: float = 2.0
    tvl_daily_volume_fraction: float = 0.2


@dataclass(frozen=True)
class Calibration:
    """The full default table: per-cell timing, discounts, scope fractions.

    Provenance varies by entry and is surfaced by ``annotated_rows``:
    signer-set timing is an observed median, delegated-body timing the
    midpoint of an observed 60-90 minute range, governance timing an
    order-of-magnitude from documented episodes (days for protocol-local
    action, ~30 days for a chain-level fork). Discount rates and most scope
    fractions are calibration placeholders: only their orderings are
    empirically grounded, so treat the numbers as overridable defaults.
    """

    containment_time_min: Mapping[AuthorityMode, float] = field(
        default_factory=lambda: {
            AuthorityMode.SIGNER_SET: 30.0,
            AuthorityMode.DELEGATED_BODY: 75.0,
            AuthorityMode.GOVERNANCE: 4320.0,
        }
    )
    governance_network_time_min: float = 43200.0
    discount_rate: Mapping[AuthorityMode, float] = field(
        default_factory=lambda: {
            AuthorityMode.SIGNER_SET: 0.05,
            AuthorityMode.DELEGATED_BODY: 0.02,
            AuthorityMode.GOVERNANCE: 0.005,
        }
    )
    network_discount_scale: float = 1.5
    account_discount_scale: float = 0.5
    scope_fraction: Mapping[ScopeLevel, float] = field(
        default_factory=lambda: {
            ScopeLevel.NETWORK: 1.0,
            ScopeLevel.ASSET: 0.25,
            ScopeLevel.PROTOCOL: 0.10,
            ScopeLevel.MODULE: 0.02,
            ScopeLevel.ACCOUNT: 0.0001,
        }
    )
    profile_tiers: ProfileTiers = field(default_factory=ProfileTiers)
    source: str = "builtin"

    def cell_time_min(self, scope: ScopeLevel, authority: AuthorityMode) -> float:
        if authority is AuthorityMode.GOVERNANCE and scope is ScopeLevel.NETWORK:
            return self.governance_network_time_min
        return self.containment_time_min[authority]

    def cell_discount(self, scope: ScopeLevel, authority: AuthorityMode) -> float:
        rate = self.discount_rate[authority]
        if scope is ScopeLevel.NETWORK:
            return rate * self.network_discount_scale
        if scope is ScopeLevel.ACCOUNT:
            return rate * self.account_discount_scale
        return rate

    def cell(self, scope: ScopeLevel, authority: AuthorityMode) -> Architecture:
        return Architecture(
            scope=scope,
            authority=authority,
            containment_time_min=self.cell_time_min(scope, authority),
            discount_rate=self.cell_discount(scope, authority),
            scope_fraction=self.scope_fraction[scope],
            label=f"{scope.value}/{authority.value}",
        )

    def design_space(self) -> list[Architecture]:
        return [self.cell(s, a) for s in SCOPE_ORDER for a in AUTHORITY_ORDER]

    def version(self) -> str:
        """Content hash of the numeric table; changes when any default does."""
        parts = []
        for a in AUTHORITY_ORDER:
            parts.append(f"t.{a.value}={self.containment_time_min[a]!r}")
            parts.append(f"d.{a.value}={self.discount_rate[a]!r}")
        parts.append(f"t.governance_network={self.governance_network_time_min!r}")
        parts.append(f"d.network_scale={self.network_discount_scale!r}")
        parts.append(f"d.account_scale={self.account_discount_scale!r}")
        for s in SCOPE_ORDER:
            parts.append(f"f.{s.value}={self.scope_fraction[s]!r}")
        digest = hashlib.sha256("\n".join(parts).encode()).hexdigest()[:12]
        return digest

    def annotated_rows(self) -> list[dict]:
        """One row per grid cell with a provenance note per numeric field."""
        time_notes = {
            AuthorityMode.SIGNER_SET: "observed median",
            AuthorityMode.DELEGATED_BODY: "midpoint of observed 60-90 min range",
            AuthorityMode.GOVERNANCE: "order of magnitude from documented episodes",
        }
        rows = []
        for arch in self.design_space():
            time_note = time_notes[arch.authority]
            if (
                arch.authority is AuthorityMode.GOVERNANCE
                and arch.scope is ScopeLevel.NETWORK
            ):
                time_note = "chain-level fork timescale (~30 days)"
            frac_note = "config default"
            if arch.scope is ScopeLevel.ACCOUNT:
                frac_note = "anchored to documented sub-0.01% address freeze"
            rows.append(
                {
                    "scope": arch.scope.value,
                    "authority": arch.authority.value,
                    "containment_time_min": arch.containment_time_min,
                    "containment_time_note": time_note,
                    "discount_rate": arch.discount_rate,
                    "discount_rate_note": "calibration placeholder (ordering only)",
                    "scope_fraction": arch.scope_fraction,
                    "scope_fraction_note": frac_note,
                }
            )
        return rows


DEFAULT_CALIBRATION = Calibration()


def default_design_space() -> list[Architecture]:
    """All 15 (scope, authority) cells under the built-in calibration."""
    return DEFAULT_CALIBRATION.design_space()


# ---------------------------------------------------------------------------
# Config file loading.
#
# Format: one `key = value` per line, `#` comments, blank lines ignored.
# Unknown keys are rejected so typos cannot silently fall back to defaults.
# Every key is optional; omitted keys keep their built-in value.
#
#   containment_time_min.signer_set        minutes
#   containment_time_min.delegated_body
#   containment_time_min.governance
#   containment_time_min.governance_network
#   discount_rate.signer_set               fraction of market cap
#   discount_rate.delegated_body
#   discount_rate.governance
#   discount_rate.network_scale            multiplier applied at network scope
#   discount_rate.account_scale            multiplier applied at account scope
#   scope_fraction.<scope>                 share of activity disrupted
#   profile.base_event_probability.<protocol_type>
#   profile.damage_rate_fraction_per_min.<exposure>
#   profile.novelty_damage_multiplier.<novelty>
#   profile.audit_probability_scale.<audit_status>
#   profile.claims_discount_multiplier.<claim>
#   profile.tvl_market_cap_multiple
#   profile.tvl_daily_volume_fraction
# ---------------------------------------------------------------------------


def _parse_kv_lines(text: str, where: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"{where}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        try:
            out[key] = float(value.strip())
        except ValueError:
            raise SchemaError(
                f"{where}:{lineno}: value for {key!r} is not a number: {value.strip()!r}"
            ) from None
    return out


def load_calibration(path: str | Path) -> Calibration:
    """Load calibration overrides from a flat key = value file.

    Missing keys fall back to the built-in table; unknown keys raise
    SchemaError.
    """
    path = Path(path)
    entries = _parse_kv_lines(path.read_text(encoding="utf-8"), str(path))
    base = DEFAULT_CALIBRATION

    times = dict(base.containment_time_min)
    discounts = dict(base.discount_rate)
    fractions = dict(base.scope_fraction)
    gov_network = base.governance_network_time_min
    net_scale = base.network_discount_scale
    acct_scale = base.account_discount_scale
    tiers = base.profile_tiers
    tier_maps = {
        "base_event_probability": dict(tiers.base_event_probability),
        "damage_rate_fraction_per_min": dict(tiers.damage_rate_fraction_per_min),
        "novelty_damage_multiplier": dict(tiers.novelty_damage_multiplier),
        "audit_probability_scale": dict(tiers.audit_probability_scale),
        "claims_discount_multiplier": dict(tiers.claims_discount_multiplier),
    }
    tvl_mc = tiers.tvl_market_cap_multiple
    tvl_dv = tiers.tvl_daily_volume_fraction

    for key, value in entries.items():
        parts = key.split(".")
        if parts[0] == "containment_time_min" and len(parts) == 2:
            if parts[1] == "governance_network":
                gov_network = value
                continue
            times[AuthorityMode.parse(parts[1])] = value
        elif parts[0] == "discount_rate" and len(parts) == 2:
            if parts[1] == "network_scale":
                net_scale = value
            elif parts[1] == "account_scale":
                acct_scale = value
            else:
                discounts[AuthorityMode.parse(parts[1])] = value
        elif parts[0] == "scope_fraction" and len(parts) == 2:
            fractions[ScopeLevel.parse(parts[1])] = value
        elif parts[0] == "profile" and len(parts) == 3 and parts[1] in tier_maps:
            if parts[2] not in tier_maps[parts[1]]:
                raise SchemaError(f"{path}: unknown tier key {key!r}")
            tier_maps[parts[1]][parts[2]] = value
        elif key == "profile.tvl_market_cap_multiple":
            tvl_mc = value
        elif key == "profile.tvl_daily_volume_fraction":
            tvl_dv = value
        else:
            raise SchemaError(f"{path}: unknown calibration key {key!r}")

    cal = Calibration(
        containment_time_min=times,
        governance_network_time_min=gov_network,
        discount_rate=discounts,
        network_discount_scale=net_scale,
        account_discount_scale=acct_scale,
        scope_fraction=fractions,
        profile_tiers=ProfileTiers(
            base_event_probability=tier_maps["base_event_probability"],
            damage_rate_fraction_per_min=tier_maps["damage_rate_fraction_per_min"],
            novelty_damage_multiplier=tier_maps["novelty_damage_multiplier"],
            audit_probability_scale=tier_maps["audit_probability_scale"],
            claims_discount_multiplier=tier_maps["claims_discount_multiplier"],
            tvl_market_cap_multiple=tvl_mc,
            tvl_daily_volume_fraction=tvl_dv,
        ),
        source=str(path),
    )
    for arch in cal.design_space():
        validate(arch)
    return cal


def patch_space(
    space: Iterable[Architecture], patches: Iterable[Mapping]
) -> list[Architecture]:
    """Apply per-cell field overrides to a design space.

    Each patch names a (scope, authority) cell and may override any of the
    numeric fields or the label. Patching the same cell twice is an error.
    """
    ordered = list(space)
    cells = {arch.cell: arch for arch in ordered}
    seen: set[tuple[ScopeLevel, AuthorityMode]] = set()
    for patch in patches:
        if "scope" not in patch or "authority" not in patch:
            raise DomainError("architectures", "each override needs scope and authority")
        scope = ScopeLevel.parse(str(patch["scope"]))
        authority = AuthorityMode.parse(str(patch["authority"]))
        key = (scope, authority)
        if key in seen:
            raise DomainError(
                "architectures", f"cell {scope.value}/{authority.value} patched twice"
            )
        seen.add(key)
        if key not in cells:
            raise DomainError(
                "architectures",
                f"cell {scope.value}/{authority.value} not in the design space",
            )
        arch = cells[key]
        fields = {}
        for name in ("containment_time_min", "discount_rate", "scope_fraction"):
            if name in patch:
                fields[name] = float(patch[name])
        if "label" in patch:
            fields["label"] = str(patch["label"])
        unknown = set(patch) - {
            "scope",
            "authority",
            "containment_time_min",
            "discount_rate",
            "scope_fraction",
            "label",
        }
        if unknown:
            raise DomainError("architectures", f"unknown override fields {sorted(unknown)}")
        cells[key] = validate(replace(arch, **fields))
    return [cells[arch.cell] for arch in ordered]
