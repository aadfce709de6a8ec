"""Lexicon-based compound sentiment scoring for governance-forum text.

Scoring rules, all in one place:

* tokens are lowercased and split on non-alphanumeric characters; the
  exclamation-mark count of the raw text is kept separately;
* each token found in the valence lexicon contributes its valence;
* an intensifier immediately before a scored token scales that token's
  valence by INTENSIFIER_SCALE;
* a negation token among the three preceding tokens flips the sign
  (a single flip, however many negators sit in the window);
* exclamation marks add EXCLAMATION_INCREMENT each (at most
  MAX_EXCLAMATIONS count), aligned with the sign of the raw sum;
* the raw sum v is squashed to v / sqrt(v^2 + NORMALIZATION_ALPHA),
  giving a compound score strictly inside (-1, 1).

The bundled lexicon is a small curated table (see data/lexicon.tsv: one
token, one tab, one signed decimal valence per line, UTF-8). Precomputed
compound scores can always be aggregated directly, bypassing the scorer.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError, SchemaError

NEGATION_WINDOW = 3
INTENSIFIER_SCALE = 1.25
EXCLAMATION_INCREMENT = 0.292
MAX_EXCLAMATIONS = 4
NORMALIZATION_ALPHA = 15.0

_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")

NEGATIONS = frozenset(
    """
    not no never nothing nobody none cannot cant wont dont doesnt didnt isnt
    wasnt arent werent shouldnt couldnt wouldnt aint hardly barely without
    neither nor don doesn didn isn wasn aren weren shouldn couldn wouldn
    hasn haven hadn won
    """.split()
)

INTENSIFIERS = frozenset(
    """
    very really extremely absolutely completely totally incredibly hugely
    massively deeply highly especially particularly seriously super utterly
    truly so
    """.split()
)


@dataclass(frozen=True)
class ScoredPost:
    text: str
    compound: float


def load_lexicon(path: Optional[str | Path] = None) -> dict[str, float]:
    """Read a token<TAB>valence table; default is the bundled lexicon."""
    if path is None:
        text = (
            resources.files("breakglass").joinpath("data/lexicon.tsv").read_text("utf-8")
        )
        where = "bundled lexicon"
    else:
        text = Path(path).read_text(encoding="utf-8")
        where = str(path)
    lexicon: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise SchemaError(f"{where}:{lineno}: expected 'token<TAB>valence'")
        token, value = parts
        try:
            lexicon[token.strip().lower()] = float(value)
        except ValueError:
            raise SchemaError(f"{where}:{lineno}: bad valence {value!r}") from None
    return lexicon


_DEFAULT_LEXICON: Optional[dict[str, float]] = None


def default_lexicon() -> dict[str, float]:
    global _DEFAULT_LEXICON
    if _DEFAULT_LEXICON is None:
        _DEFAULT_LEXICON = load_lexicon()
    return _DEFAULT_LEXICON


def tokenize(text: str) -> tuple[list[str], int]:
    """Lowercased alphanumeric tokens plus the exclamation-mark count."""
    tokens = [t for t in _TOKEN_SPLIT.split(text.lower()) if t]
    return tokens, text.count("!")


def raw_valence_sum(
    tokens: Sequence[str], exclamations: int, lexicon: Mapping[str, float]
) -> float:
    total = 0.0
    for i, token in enumerate(tokens):
        valence = lexicon.get(token)
        if valence is None or valence == 0.0:
            continue
        if i > 0 and tokens[i - 1] in INTENSIFIERS:
            valence *= INTENSIFIER_SCALE
        window = tokens[max(0, i - NEGATION_WINDOW) : i]
        if any(t in NEGATIONS for t in window):
            valence = -valence
        total += valence
    if total > 0:
        total += EXCLAMATION_INCREMENT * min(exclamations, MAX_EXCLAMATIONS)
    elif total < 0:
        total -= EXCLAMATION_INCREMENT * min(exclamations, MAX_EXCLAMATIONS)
    return total


def normalize(raw: float) -> float:
    return raw / math.sqrt(raw * raw + NORMALIZATION_ALPHA)


def score_post(text: str, lexicon: Optional[Mapping[str, float]] = None) -> float:
    """Compound sentiment of one post, in (-1, 1)."""
    if not text or not text.strip():
        raise DomainError("text", "empty or whitespace-only post")
    if lexicon is None:
        lexicon = default_lexicon()
    tokens, exclamations = tokenize(text)
    return normalize(raw_valence_sum(tokens, exclamations, lexicon))


def score_posts(
    texts: Iterable[str], lexicon: Optional[Mapping[str, float]] = None
) -> list[ScoredPost]:
    if lexicon is None:
        lexicon = default_lexicon()
    return [ScoredPost(text=t, compound=score_post(t, lexicon)) for t in texts]


def aggregate(scores: Sequence[float]) -> float:
    """Arithmetic mean compound score."""
    if len(scores) == 0:
        raise DomainError("scores", "cannot aggregate an empty list")
    for s in scores:
        if not -1.0 <= s <= 1.0:
            raise DomainError("scores", f"compound score out of range: {s}")
    return math.fsum(scores) / len(scores)


def cost_multiplier(mean_sentiment: float) -> float:
    """Standing-cost multiplier (1 - mean sentiment), in [0, 2]."""
    if not -1.0 <= mean_sentiment <= 1.0:
        raise DomainError(
            "mean_sentiment", f"must be in [-1, 1], got {mean_sentiment}"
        )
    return 1.0 - mean_sentiment
