"""Seeded Monte Carlo check of the analytic cost, plus tail what-ifs.

The closed form is a one-shot expectation; the simulator reproduces it by
sampling and adds the one stochastic ingredient the closed form cannot
express: multiplicative, mean-preserving jitter on containment time. Trials
are drawn from a counter-based generator (numpy Philox) so results are
bitwise reproducible across platforms for a fixed seed and partition count;
per-partition substreams are derived from the seed by jumping, so the same
(seed, n_partitions) always yields the same stream regardless of how the
partitions are actually scheduled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .costs import (
    MarketContext,
    ThreatProfile,
    blast_cost,
    centralization_cost,
    validate_context,
    validate_threat,
)
from .errors import DomainError
from .losstail import PowerLawFit, sample_tail, validate_fit
from .taxonomy import Architecture, validate as validate_arch

GENERATOR_ID = "philox4x64"
DEFAULT_CAP_MULTIPLE = 1e4
QUANTILE_LEVELS = (0.5, 0.9, 0.99, 0.999)


@dataclass(frozen=True)
class SimConfig:
    n_trials: int
    seed: int
    time_jitter: float = 0.0
    blast_on_trigger_only: bool = False
    n_partitions: int = 1


def validate_config(cfg: SimConfig) -> SimConfig:
    if cfg.n_trials < 1:
        raise DomainError("n_trials", f"must be >= 1, got {cfg.n_trials}")
    if not cfg.time_jitter >= 0:
        raise DomainError("time_jitter", f"must be >= 0, got {cfg.time_jitter}")
    if cfg.n_partitions < 1:
        raise DomainError("n_partitions", f"must be >= 1, got {cfg.n_partitions}")
    return cfg


@dataclass(frozen=True)
class SimResult:
    """Sampled cost distribution with config echoed for reproducibility."""

    mean_cost_usd: float
    cost_std: float
    p50: float
    p90: float
    p99: float
    p999: float
    per_event_contribution_usd: dict[str, float]
    n_trials: int
    seed: int
    time_jitter: float
    blast_on_trigger_only: bool
    n_partitions: int
    generator: str = GENERATOR_ID
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "mean_cost_usd": self.mean_cost_usd,
            "cost_std": self.cost_std,
            "quantiles": {
                "p50": self.p50,
                "p90": self.p90,
                "p99": self.p99,
                "p999": self.p999,
            },
            "per_event_contribution_usd": dict(self.per_event_contribution_usd),
            "config": {
                "n_trials": self.n_trials,
                "seed": self.seed,
                "time_jitter": self.time_jitter,
                "blast_on_trigger_only": self.blast_on_trigger_only,
                "n_partitions": self.n_partitions,
                "generator": self.generator,
            },
        }
        if self.extra:
            out["config"].update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _partition_sizes(n_trials: int, n_partitions: int) -> list[int]:
    base, extra = divmod(n_trials, n_partitions)
    return [base + 1 if i < extra else base for i in range(n_partitions)]


def _partition_rng(seed: int, partition: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed).jumped(partition))


def _summarize(
    costs: np.ndarray, labels: list[str], event_idx: np.ndarray, cfg: SimConfig,
    extra: Optional[dict] = None,
) -> SimResult:
    quantiles = np.quantile(costs, QUANTILE_LEVELS)
    contributions = {}
    for i, label in enumerate(labels):
        contributions[label] = float(costs[event_idx == i].sum() / costs.size)
    return SimResult(
        mean_cost_usd=float(costs.mean()),
        cost_std=float(costs.std()),
        p50=float(quantiles[0]),
        p90=float(quantiles[1]),
        p99=float(quantiles[2]),
        p999=float(quantiles[3]),
        per_event_contribution_usd=contributions,
        n_trials=cfg.n_trials,
        seed=cfg.seed,
        time_jitter=cfg.time_jitter,
        blast_on_trigger_only=cfg.blast_on_trigger_only,
        n_partitions=cfg.n_partitions,
        extra=extra or {},
    )


def simulate(
    arch: Architecture,
    threat: ThreatProfile,
    ctx: MarketContext,
    cfg: SimConfig,
) -> SimResult:
    """Sample per-trial costs under the architecture and threat profile.

    Each trial draws an event type, jitters the containment time by a
    uniform factor on [1 - j, 1 + j] (no draw at all when j = 0), and prices
    the trial with the same three cost terms as the closed form. The sample
    mean therefore converges to the analytic expected cost; jitter is
    mean-preserving so this holds for any jitter level.
    """
    validate_arch(arch)
    validate_threat(threat)
    validate_context(ctx)
    validate_config(cfg)

    probs = np.array([e.probability for e in threat.events], dtype=float)
    probs = probs / probs.sum()
    damage = np.array([e.damage_rate_usd_per_min for e in threat.events], dtype=float)
    labels = [e.label for e in threat.events]
    standing = centralization_cost(arch, ctx)
    per_trigger = blast_cost(arch, ctx)
    if cfg.blast_on_trigger_only:
        blast_by_event = np.where(damage > 0, per_trigger, 0.0)
    else:
        blast_by_event = np.full_like(damage, per_trigger)

    chunks = []
    idx_chunks = []
    for partition, size in enumerate(_partition_sizes(cfg.n_trials, cfg.n_partitions)):
        if size == 0:
            continue
        rng = _partition_rng(cfg.seed, partition)
        idx = rng.choice(probs.size, size=size, p=probs)
        times = arch.containment_time_min
        if cfg.time_jitter > 0:
            times = times * rng.uniform(
                1.0 - cfg.time_jitter, 1.0 + cfg.time_jitter, size=size
            )
        chunks.append(standing + times * damage[idx] + blast_by_event[idx])
        idx_chunks.append(idx)
    costs = np.concatenate(chunks)
    event_idx = np.concatenate(idx_chunks)
    return _summarize(costs, labels, event_idx, cfg)


TAIL_EVENT_LABEL = "tail_draw"


def tail_scenario(
    fit: PowerLawFit,
    arch: Architecture,
    ctx: MarketContext,
    cfg: SimConfig,
    exposure_window_min: float = 60.0,
    cap: Optional[float] = None,
) -> SimResult:
    """Cost distribution when every trial's loss is drawn from a fitted tail.

    Conditional-on-incident analysis: each trial draws a loss from the
    fitted power law truncated at cap (default 1e4 * xmin, mandatory since
    heavy tails have no finite mean), converts it to a damage rate over the
    exposure window, and prices the trial. The blast cost is charged every
    trial since every trial is a triggered incident.
    """
    validate_fit(fit)
    validate_arch(arch)
    validate_context(ctx)
    validate_config(cfg)
    if not exposure_window_min > 0:
        raise DomainError(
            "exposure_window_min", f"must be > 0, got {exposure_window_min}"
        )
    if cap is None:
        cap = DEFAULT_CAP_MULTIPLE * fit.xmin
    if not cap > fit.xmin:
        raise DomainError("cap", f"must exceed xmin={fit.xmin}, got {cap}")

    standing = centralization_cost(arch, ctx)
    per_trigger = blast_cost(arch, ctx)

    chunks = []
    for partition, size in enumerate(_partition_sizes(cfg.n_trials, cfg.n_partitions)):
        if size == 0:
            continue
        rng = _partition_rng(cfg.seed, partition)
        losses = sample_tail(fit, size, rng, cap=cap)
        rates = losses / exposure_window_min
        times = arch.containment_time_min
        if cfg.time_jitter > 0:
            times = times * rng.uniform(
                1.0 - cfg.time_jitter, 1.0 + cfg.time_jitter, size=size
            )
        chunks.append(standing + times * rates + per_trigger)
    costs = np.concatenate(chunks)
    event_idx = np.zeros(costs.size, dtype=int)
    extra = {
        "exposure_window_min": exposure_window_min,
        "cap": cap,
        "alpha": fit.alpha,
        "xmin": fit.xmin,
    }
    return _summarize(costs, [TAIL_EVENT_LABEL], event_idx, cfg, extra=extra)
