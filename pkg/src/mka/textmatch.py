"""Hybrid Levenshtein/Hamming distance and argmin entity matching.

Strings are compared character by character (Unicode code points), which
is the natural unit for Chinese text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BothEmpty, EmptyCandidateSet
from .kg import Entity


@dataclass(frozen=True)
class MatchConfig:
    """Weights of the combined distance plus the topic-similarity threshold.

    Defaults are ``alpha=0.1, beta=-1, delta=0.7``.
    """

    alpha: float = 0.1
    beta: float = -1.0
    delta: float = 0.7

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("alpha and beta cannot both be zero")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")


DEFAULT_MATCH = MatchConfig()
# Used by the retrieval baseline: exact question recall is guaranteed.
LEVENSHTEIN_ONLY = MatchConfig(alpha=1.0, beta=0.0)


def levenshtein(u: str, v: str) -> int:
    """Minimum number of single-character insertions, deletions and substitutions."""
    if u == v:
        return 0
    if len(u) < len(v):
        u, v = v, u
    if not v:
        return len(u)
    prev = list(range(len(v) + 1))
    for i, cu in enumerate(u, start=1):
        cur = [i]
        for j, cv in enumerate(v, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (cu != cv)))
        prev = cur
    return prev[-1]


def hamming_ext(u: str, v: str) -> int:
    """Hamming distance extended to unequal lengths.

    Counts positional mismatches over the common prefix length, then adds
    the length difference.
    """
    return sum(a != b for a, b in zip(u, v)) + abs(len(u) - len(v))


def combined_dist(u: str, v: str, c: MatchConfig = DEFAULT_MATCH) -> float:
    # Signed and unbounded when beta < 0.
    return c.alpha * levenshtein(u, v) + c.beta * hamming_ext(u, v)


def normalized_similarity(u: str, v: str, c: MatchConfig = DEFAULT_MATCH) -> float:
    """Length-normalised similarity in [0, 1], equal to 1 iff ``u == v``.

    The weights are replaced by their absolute values rescaled to sum to
    one, so the weighted distance never exceeds the longer length.
    """
    n = max(len(u), len(v))
    if n == 0:
        raise BothEmpty("similarity is undefined for two empty strings")
    wa, wb = abs(c.alpha), abs(c.beta)
    total = wa + wb
    d = (wa * levenshtein(u, v) + wb * hamming_ext(u, v)) / total
    return min(1.0, max(0.0, 1.0 - d / n))


def best_match(query: str, candidates: Sequence[Entity], c: MatchConfig = DEFAULT_MATCH) -> Entity:
    """The candidate whose name minimises ``combined_dist(query, name)``.

    Ties go to the lexicographically smaller name, then the earlier entity
    type in enum order (so Disease beats Symptom).
    """
    if not candidates:
        raise EmptyCandidateSet(f"no candidates to match {query!r} against")
    # Exact rational keys so float rounding cannot break a genuine tie.
    a, b = Fraction(c.alpha), Fraction(c.beta)

    def key(e: Entity):
        return (a * levenshtein(query, e.name) + b * hamming_ext(query, e.name), e.sort_key)

    return min(candidates, key=key)
