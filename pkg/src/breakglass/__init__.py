"""Decision support for emergency-override mechanism design.

Pick the cheapest intervention architecture for a protocol by pricing the
standing cost of holding override power, the expected containment loss
under a threat profile, and the one-time blast cost of triggering;
calibrated by heavy-tailed loss statistics, incident timing data, and
community sentiment.
"""

__version__ = "0.1.0"

from .errors import (
    BreakglassError,
    DegenerateError,
    DomainError,
    InsufficientDataError,
    SchemaError,
)
from .taxonomy import (
    Architecture,
    AuthorityMode,
    Calibration,
    DEFAULT_CALIBRATION,
    ScopeLevel,
    default_design_space,
    load_calibration,
    validate,
)
from .costs import (
    CostBreakdown,
    MarketContext,
    ThreatEvent,
    ThreatProfile,
    blast_cost,
    breakeven_sentiment,
    centralization_cost,
    expected_cost,
    profile_to_model,
    ProtocolProfile,
    rank_design_space,
    sweep,
)
from .losstail import (
    ParetoCurve,
    PowerLawFit,
    bootstrap_p_value,
    fit_power_law,
    ks_statistic,
    pareto_curve,
    tail_expected_loss,
)
from .incidents import (
    IncidentRecord,
    StratificationSummary,
    attack_vector_stats,
    authority_stats,
    ingest,
    scope_authority_matrix,
    stratify,
)
from .sentiment import ScoredPost, aggregate, cost_multiplier, score_post
from .simulator import SimConfig, SimResult, simulate, tail_scenario

__all__ = [
    "__version__",
    "BreakglassError",
    "DegenerateError",
    "DomainError",
    "InsufficientDataError",
    "SchemaError",
    "Architecture",
    "AuthorityMode",
    "Calibration",
    "DEFAULT_CALIBRATION",
    "ScopeLevel",
    "default_design_space",
    "load_calibration",
    "validate",
    "CostBreakdown",
    "MarketContext",
    "ThreatEvent",
    "ThreatProfile",
    "blast_cost",
    "breakeven_sentiment",
    "centralization_cost",
    "expected_cost",
    "profile_to_model",
    "ProtocolProfile",
    "rank_design_space",
    "sweep",
    "ParetoCurve",
    "PowerLawFit",
    "bootstrap_p_value",
    "fit_power_law",
    "ks_statistic",
    "pareto_curve",
    "tail_expected_loss",
    "IncidentRecord",
    "StratificationSummary",
    "attack_vector_stats",
    "authority_stats",
    "ingest",
    "scope_authority_matrix",
    "stratify",
    "ScoredPost",
    "aggregate",
    "cost_multiplier",
    "score_post",
    "SimConfig",
    "SimResult",
    "simulate",
    "tail_scenario",
]
