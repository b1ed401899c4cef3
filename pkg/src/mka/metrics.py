"""Automatic evaluation: perplexity, BLEU, NIST, METEOR, Entropy-n, Dist-n.

Overlap metrics (BLEU, METEOR) are sentence level and averaged; NIST,
entropy and distinct-n are computed on the pooled corpus. Logs are
natural except inside NIST, which uses base 2 information weights.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Sequence

from .errors import EmptyCandidate, EmptyCorpus, NoNgrams, ParseError
from .generation import Generator, sequence_log_likelihood
from .tokens import ModelInput

Tokens = Sequence[str]


def ngrams(tokens: Tokens, n: int) -> list[tuple[str, ...]]:
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


@dataclass(frozen=True)
class MetricReport:
    perplexity: float
    bleu2: float
    bleu4: float
    nist2: float
    nist4: float
    meteor: float
    entropy4: float
    dist1: float
    dist2: float

    def check(self) -> None:
        """Raise ``ValueError`` if any field is outside its declared range."""
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise ValueError(f"{f.name} is not finite: {v}")
        if self.perplexity < 1:
            raise ValueError(f"perplexity below 1: {self.perplexity}")
        for name in ("bleu2", "bleu4", "meteor", "dist1", "dist2"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} outside [0, 1]: {getattr(self, name)}")
        for name in ("nist2", "nist4", "entropy4"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} is negative: {getattr(self, name)}")

    def to_text(self) -> str:
        return "".join(f"{k}={v:.6f}\n" for k, v in asdict(self).items())

    @classmethod
    def from_text(cls, text: str) -> "MetricReport":
        values = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ParseError(f"line {lineno}: expected key=value")
            values[key.strip()] = float(val)
        return cls(**values)

    def write(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")


def perplexity(pairs: Sequence[tuple[ModelInput, Tokens]], g: Generator) -> float:
    n_tokens = sum(len(ref) for _, ref in pairs)
    if n_tokens == 0:
        raise EmptyCorpus("perplexity needs at least one reference token")
    total = sum(sequence_log_likelihood(x, ref, g) for x, ref in pairs if ref)
    return math.exp(-total / n_tokens)


def bleu_n(candidate: Tokens, reference: Tokens, n: int = 4) -> float:
    """Sentence BLEU with clipped precisions and add-one smoothing on zero-match orders."""
    if n < 1:
        raise ValueError("BLEU order must be at least 1")
    if not candidate:
        raise EmptyCandidate("BLEU is undefined for an empty candidate")
    log_p = 0.0
    for m in range(1, n + 1):
        cand = Counter(ngrams(candidate, m))
        ref = Counter(ngrams(reference, m))
        total = sum(cand.values())
        match = sum(min(c, ref[g]) for g, c in cand.items())
        if match == 0:
            match, total = 1, total + 1
        log_p += math.log(match / total)
    bp = min(1.0, math.exp(1 - len(reference) / len(candidate)))
    return bp * math.exp(log_p / n)


# mteval brevity factor: 0.5 when the candidate is two thirds of the reference length
_NIST_BETA = math.log(0.5) / math.log(1.5) ** 2


def nist_n(candidates: Sequence[Tokens], references: Sequence[Tokens], n: int = 4) -> float:
    if len(candidates) != len(references):
        raise ValueError("candidates and references must be aligned")
    if not candidates:
        raise EmptyCorpus("NIST needs at least one sentence pair")
    ref_counts: Counter = Counter()
    for ref in references:
        for m in range(1, n + 1):
            ref_counts.update(ngrams(ref, m))
    ref_words = sum(len(r) for r in references)

    def info(g: tuple[str, ...]) -> float:
        prefix = ref_counts[g[:-1]] if len(g) > 1 else ref_words
        return math.log2(prefix / ref_counts[g])

    score = 0.0
    for m in range(1, n + 1):
        gained, n_cand = 0.0, 0
        for cand, ref in zip(candidates, references):
            cc = Counter(ngrams(cand, m))
            rc = Counter(ngrams(ref, m))
            n_cand += sum(cc.values())
            gained += sum(min(c, rc[g]) * info(g) for g, c in cc.items() if g in rc)
        if n_cand:
            score += gained / n_cand
    cand_words = sum(len(c) for c in candidates)
    if ref_words == 0 or cand_words == 0:
        return 0.0
    ratio = min(1.0, cand_words / ref_words)
    return score * math.exp(_NIST_BETA * math.log(ratio) ** 2)


def meteor(candidate: Tokens, reference: Tokens) -> float:
    """Exact-match METEOR with greedy left-to-right alignment."""
    used = [False] * len(reference)
    alignment = []
    for i, tok in enumerate(candidate):
        for j, rtok in enumerate(reference):
            if not used[j] and rtok == tok:
                used[j] = True
                alignment.append((i, j))
                break
    matches = len(alignment)
    if matches == 0:
        return 0.0
    chunks = 1
    for (i0, j0), (i1, j1) in zip(alignment, alignment[1:]):
        if not (i1 == i0 + 1 and j1 == j0 + 1):
            chunks += 1
    p = matches / len(candidate)
    r = matches / len(reference)
    fmean = 10 * p * r / (r + 9 * p)
    penalty = 0.5 * (chunks / matches) ** 3
    return fmean * (1 - penalty)


def _pooled(responses: Sequence[Tokens], n: int) -> Counter:
    counts: Counter = Counter()
    for r in responses:
        counts.update(ngrams(r, n))
    return counts


def entropy_n(responses: Sequence[Tokens], n: int = 4) -> float:
    counts = _pooled(responses, n)
    total = sum(counts.values())
    if total == 0:
        raise NoNgrams(f"no response has {n} or more tokens")
    return -sum(c / total * math.log(c / total) for c in counts.values())


def dist_n(responses: Sequence[Tokens], n: int = 1) -> float:
    counts = _pooled(responses, n)
    total = sum(counts.values())
    if total == 0:
        raise NoNgrams(f"no {n}-grams in the responses")
    return len(counts) / total


def evaluate_corpus(
    candidates: Sequence[Tokens],
    references: Sequence[Tokens],
    inputs: Sequence[ModelInput],
    g: Generator,
) -> MetricReport:
    """Score a generation run.

    Empty candidates score zero BLEU; diversity metrics fall back to zero
    when the responses hold no n-grams of the required order.
    """
    if not (len(candidates) == len(references) == len(inputs)):
        raise ValueError("candidates, references and inputs must be aligned")
    if not candidates:
        raise EmptyCorpus("nothing to evaluate")

    def mean(vals):
        return math.fsum(vals) / len(vals)

    def bleu(c, r, n):
        return bleu_n(c, r, n) if c else 0.0

    def diversity(fn, n):
        try:
            return fn(candidates, n)
        except NoNgrams:
            return 0.0

    return MetricReport(
        perplexity=perplexity(list(zip(inputs, references)), g),
        bleu2=mean([bleu(c, r, 2) for c, r in zip(candidates, references)]),
        bleu4=mean([bleu(c, r, 4) for c, r in zip(candidates, references)]),
        nist2=nist_n(candidates, references, 2),
        nist4=nist_n(candidates, references, 4),
        meteor=mean([meteor(c, r) for c, r in zip(candidates, references)]),
        entropy4=diversity(entropy_n, 4),
        dist1=diversity(dist_n, 1),
        dist2=diversity(dist_n, 2),
    )
