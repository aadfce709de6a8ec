"""Heavy-tailed loss statistics: power-law fitting and concentration curves.

Losses are dollar amounts, so the continuous maximum-likelihood estimator is
used throughout: alpha = 1 + n / sum(ln(x_i / xmin)) over the tail x >= xmin.
When no threshold is supplied, xmin is chosen from the grid of observed
values by minimizing the Kolmogorov-Smirnov distance between the tail and
the fitted model, and the goodness-of-fit p-value comes from a
semi-parametric bootstrap (synthetic tails drawn from the fitted model and
refitted with the same automatic threshold selection).

Empirical CDF step convention, used consistently here: right-continuous,
with tied samples sharing the upper step. The KS distance compares the model
CDF against both the lower and upper step at every tail sample, so a single
sample sitting exactly at xmin yields D = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError

MIN_TAIL_SAMPLES = 10
MIN_BOOTSTRAP = 100
_CANDIDATE_BLOCK = 128


@dataclass(frozen=True)
class PowerLawFit:
    """Fitted tail: exponent, threshold, tail size, and fit quality."""

    alpha: float
    xmin: float
    n_tail: int
    ks_statistic: float
    p_value: Optional[float] = None


def validate_fit(fit: PowerLawFit) -> PowerLawFit:
    if not fit.alpha > 1:
        raise DomainError("alpha", f"must be > 1, got {fit.alpha}")
    if not fit.xmin > 0:
        raise DomainError("xmin", f"must be > 0, got {fit.xmin}")
    if fit.n_tail < 2:
        raise DomainError("n_tail", f"must be >= 2, got {fit.n_tail}")
    if not 0.0 <= fit.ks_statistic <= 1.0:
        raise DomainError("ks_statistic", f"must be in [0, 1], got {fit.ks_statistic}")
    if fit.p_value is not None and not 0.0 <= fit.p_value <= 1.0:
        raise DomainError("p_value", f"must be in [0, 1], got {fit.p_value}")
    return fit


@dataclass(frozen=True)
class ParetoCurve:
    """Cumulative loss share covered by the k largest incidents."""

    points: tuple[tuple[int, float], ...]


def _as_losses(losses: Sequence[float]) -> np.ndarray:
    arr = np.asarray(losses, dtype=float)
    if arr.size == 0:
        raise DomainError("losses", "no loss samples supplied")
    if not np.all(arr > 0):
        raise DomainError("losses", "losses must be positive")
    if not np.all(np.isfinite(arr)):
        raise DomainError("losses", "losses must be finite")
    return arr


def _model_cdf(x: np.ndarray, xmin: float, alpha: float) -> np.ndarray:
    return 1.0 - (x / xmin) ** (1.0 - alpha)


def _ks_distance(sorted_tail: np.ndarray, xmin: float, alpha: float) -> float:
    n = sorted_tail.size
    model = _model_cdf(sorted_tail, xmin, alpha)
    upper = np.searchsorted(sorted_tail, sorted_tail, side="right") / n
    lower = np.searchsorted(sorted_tail, sorted_tail, side="left") / n
    return float(
        max(np.abs(model - upper).max(), np.abs(model - lower).max())
    )


def _mle_alpha(tail: np.ndarray, xmin: float) -> float:
    log_sum = float(np.log(tail / xmin).sum())
    if log_sum <= 0.0:
        raise InsufficientDataError(
            "degenerate tail: all samples at the threshold, exponent unbounded"
        )
    return 1.0 + tail.size / log_sum


def _auto_xmin(sorted_x: np.ndarray) -> tuple[float, float, int, float]:
    """Scan observed values as thresholds; return the KS-minimizing one.

    Returns (xmin, alpha, n_tail, ks). Candidates leaving fewer than
    MIN_TAIL_SAMPLES tail samples, or a degenerate tail, are skipped.
    Ties on D go to the smallest threshold.
    """
    n = sorted_x.size
    values, first_idx = np.unique(sorted_x, return_index=True)
    keep = (n - first_idx) >= MIN_TAIL_SAMPLES
    values, first_idx = values[keep], first_idx[keep]
    if values.size == 0:
        raise InsufficientDataError(
            f"need at least {MIN_TAIL_SAMPLES} tail samples for every candidate threshold"
        )

    logs = np.log(sorted_x)
    suffix_logsum = np.concatenate([np.cumsum(logs[::-1])[::-1], [0.0]])
    n_tail = n - first_idx
    tail_logsum = suffix_logsum[first_idx] - n_tail * np.log(values)
    # Guard against an all-tied tail whose log-sum is pure rounding noise.
    degenerate = tail_logsum <= n_tail * 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        alphas = np.where(degenerate, np.inf, 1.0 + n_tail / tail_logsum)
    usable = np.isfinite(alphas)
    if not usable.any():
        raise InsufficientDataError("degenerate tail: no usable threshold candidates")

    # Tie-aware empirical steps relative to the whole sorted sample; within
    # the tail starting at index k the step ranks shift down by k.
    right = np.searchsorted(sorted_x, sorted_x, side="right").astype(float)
    left = np.searchsorted(sorted_x, sorted_x, side="left").astype(float)

    best = (np.inf, np.inf)  # (D, xmin)
    best_idx = -1
    cand_indices = np.flatnonzero(usable)
    for start in range(0, cand_indices.size, _CANDIDATE_BLOCK):
        block = cand_indices[start : start + _CANDIDATE_BLOCK]
        ks_block = _ks_block(
            sorted_x, left, right, first_idx[block], values[block], alphas[block]
        )
        for pos, cand in enumerate(block):
            key = (ks_block[pos], values[cand])
            if key < best:
                best = key
                best_idx = cand
    xmin = float(values[best_idx])
    return xmin, float(alphas[best_idx]), int(n_tail[best_idx]), float(best[0])


def _ks_block(
    sorted_x: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    starts: np.ndarray,
    xmins: np.ndarray,
    alphas: np.ndarray,
) -> np.ndarray:
    """KS distances for a block of candidate thresholds, vectorized."""
    n = sorted_x.size
    j = np.arange(n)[None, :]
    k = starts[:, None]
    in_tail = j >= k
    size = (n - starts)[:, None].astype(float)
    with np.errstate(invalid="ignore"):
        model = 1.0 - (sorted_x[None, :] / xmins[:, None]) ** (1.0 - alphas[:, None])
    upper = (right[None, :] - k) / size
    lower = (left[None, :] - k) / size
    gap = np.maximum(np.abs(model - upper), np.abs(model - lower))
    gap = np.where(in_tail, gap, 0.0)
    return gap.max(axis=1)


def fit_power_law(
    losses: Sequence[float], xmin: Optional[float] = None
) -> PowerLawFit:
    """Fit a continuous power law to the tail of a loss sample.

    With an explicit xmin, only samples >= xmin enter the likelihood. With
    xmin=None the threshold is selected by KS minimization over the observed
    values. Deterministic for fixed input.
    """
    arr = _as_losses(losses)
    sorted_x = np.sort(arr)
    if xmin is None:
        best_xmin, alpha, n_tail, ks = _auto_xmin(sorted_x)
        return PowerLawFit(alpha=alpha, xmin=best_xmin, n_tail=n_tail, ks_statistic=ks)
    if not xmin > 0:
        raise DomainError("xmin", f"must be > 0, got {xmin}")
    tail = sorted_x[sorted_x >= xmin]
    if tail.size < MIN_TAIL_SAMPLES:
        raise InsufficientDataError(
            f"only {tail.size} samples >= xmin, need {MIN_TAIL_SAMPLES}"
        )
    alpha = _mle_alpha(tail, xmin)
    ks = _ks_distance(tail, xmin, alpha)
    return PowerLawFit(alpha=alpha, xmin=float(xmin), n_tail=int(tail.size), ks_statistic=ks)


def ks_statistic(losses: Sequence[float], fit: PowerLawFit) -> float:
    """Max distance between the tail's empirical CDF and the fitted CDF."""
    validate_fit(fit)
    arr = _as_losses(losses)
    tail = np.sort(arr[arr >= fit.xmin])
    if tail.size == 0:
        raise DomainError("losses", "no samples at or above the fitted xmin")
    return _ks_distance(tail, fit.xmin, fit.alpha)


def sample_tail(
    fit: PowerLawFit,
    size: int,
    rng: np.random.Generator,
    cap: Optional[float] = None,
) -> np.ndarray:
    """Inverse-CDF draws from the fitted tail, optionally truncated at cap."""
    validate_fit(fit)
    u = rng.random(size)
    if cap is None:
        return fit.xmin * (1.0 - u) ** (1.0 / (1.0 - fit.alpha))
    if not cap > fit.xmin:
        raise DomainError("cap", f"must exceed xmin={fit.xmin}, got {cap}")
    tail_mass = 1.0 - (cap / fit.xmin) ** (1.0 - fit.alpha)
    return fit.xmin * (1.0 - u * tail_mass) ** (1.0 / (1.0 - fit.alpha))


def bootstrap_p_value(
    losses: Sequence[float],
    fit: PowerLawFit,
    n_boot: int = 1000,
    seed: int = 0,
) -> float:
    """Semi-parametric bootstrap p-value for the power-law hypothesis.

    Each replicate draws fit.n_tail samples from the fitted model, refits
    them (automatic threshold selection, as on real data), and records its
    KS distance; p is the fraction of replicates at least as far from their
    own fit as the observed tail is from its fit. Reproducible via seed.
    """
    if n_boot < MIN_BOOTSTRAP:
        raise DomainError("n_boot", f"must be >= {MIN_BOOTSTRAP}, got {n_boot}")
    validate_fit(fit)
    observed = ks_statistic(losses, fit)
    rng = np.random.Generator(np.random.Philox(seed))
    exceed = 0
    for _ in range(n_boot):
        synth = sample_tail(fit, fit.n_tail, rng)
        try:
            synth_fit = fit_power_law(synth)
        except InsufficientDataError:
            # A pathological replicate counts against the model.
            exceed += 1
            continue
        if synth_fit.ks_statistic >= observed:
            exceed += 1
    return exceed / n_boot


def attach_p_value(
    losses: Sequence[float], fit: PowerLawFit, n_boot: int = 1000, seed: int = 0
) -> PowerLawFit:
    return replace(fit, p_value=bootstrap_p_value(losses, fit, n_boot, seed))


def pareto_curve(losses: Sequence[float]) -> ParetoCurve:
    """Share of total losses carried by the top k incidents, for every k."""
    arr = _as_losses(losses)
    ordered = np.sort(arr)[::-1]
    cumulative = np.cumsum(ordered)
    total = cumulative[-1]
    points = tuple(
        (k + 1, float(cumulative[k] / total)) for k in range(ordered.size)
    )
    return ParetoCurve(points=points)


def tail_expected_loss(fit: PowerLawFit, cap: float) -> float:
    """Mean of the fitted tail distribution truncated at cap, closed form.

    For alpha <= 2 the untruncated mean diverges, so a finite cap is
    mandatory there; for alpha > 2 the cap may be math.inf.
    """
    validate_fit(fit)
    alpha, xmin = fit.alpha, fit.xmin
    if not cap > xmin:
        raise DomainError("cap", f"must exceed xmin={xmin}, got {cap}")
    if math.isinf(cap):
        if alpha <= 2.0:
            raise DomainError("cap", "must be finite for alpha <= 2 (mean diverges)")
        return (alpha - 1.0) / (alpha - 2.0) * xmin
    # Normalized density x^-alpha on [xmin, cap]; integrate x * density.
    mass = (cap ** (1.0 - alpha) - xmin ** (1.0 - alpha)) / (1.0 - alpha)
    if alpha == 2.0:
        first_moment = math.log(cap / xmin)
    else:
        first_moment = (cap ** (2.0 - alpha) - xmin ** (2.0 - alpha)) / (2.0 - alpha)
    return first_moment / mass
