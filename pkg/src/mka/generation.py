"""Autoregressive generator contract, desk-scale baselines, multi-turn loop.

A generator scores the response factorised left to right,
``p(y | x) = prod_t p(y_t | x, y_<t)``, over a fixed vocabulary that
includes an end token and an unknown token. The neural models the
mechanism is meant to sit in front of are not implemented here; any
object honouring :class:`Generator` can be dropped in.
"""

from __future__ import annotations

import abc
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import Conversation
from .errors import EmptyCorpus, EmptyTarget, ParseError
from .kg import KnowledgeGraph
from .pipeline import (
    Anchors,
    KeyPhraseSets,
    MedicalKnowledgeInfoTuple,
    Topic,
    detect_topics,
    extract_knowledge,
    generate_subgraph,
)
from .textmatch import LEVENSHTEIN_ONLY, DEFAULT_MATCH, MatchConfig, combined_dist
from .tokens import DEFAULT_SEP, ModelInput, SegmentKind, build_model_input, detokenize, tokenize

END = "</s>"
UNK = "<unk>"
BOS = "<s>"

FORMAT_VERSION = "v1"


class Generator(abc.ABC):
    vocab: tuple[str, ...]
    _vset: frozenset[str]

    @abc.abstractmethod
    def next_token_distribution(self, source: Sequence[str], prefix: Sequence[str] = ()) -> dict[str, float]:
        """Distribution over ``vocab`` for the token following ``prefix`` given ``source``."""

    def token_prob(self, source: Sequence[str], prefix: Sequence[str], token: str) -> float:
        return self.next_token_distribution(source, prefix).get(token, 0.0)

    def map_token(self, token: str) -> str:
        return token if token in self._vset else UNK

    def generate(self, x: ModelInput, max_len: int) -> list[str]:
        """Greedy decoding; ties go to the lexicographically smallest token."""
        if max_len < 1:
            raise ValueError("max_len must be at least 1")
        source = x.flat
        out: list[str] = []
        while len(out) < max_len:
            dist = self.next_token_distribution(source, out)
            tok = min(dist, key=lambda t: (-dist[t], t))
            if tok == END:
                break
            out.append(tok)
        return out


def sequence_log_likelihood(x: ModelInput, y: Sequence[str], g: Generator) -> float:
    """Natural-log likelihood of ``y`` given ``x`` (no end-token factor)."""
    if not y:
        raise EmptyTarget("cannot score an empty target sequence")
    source = x.flat
    mapped = [g.map_token(t) for t in y]
    total = 0.0
    for t, tok in enumerate(mapped):
        p = g.token_prob(source, mapped[:t], tok)
        total += math.log(p) if p > 0 else -math.inf
    return total


class UniformGenerator(Generator):
    """Assigns equal probability to every vocabulary entry."""

    def __init__(self, vocab: Iterable[str]):
        self.vocab = tuple(sorted(set(vocab)))
        if not self.vocab:
            raise ValueError("vocabulary must be non-empty")
        self._vset = frozenset(self.vocab)
        self._p = 1.0 / len(self.vocab)

    def next_token_distribution(self, source, prefix=()):
        return dict.fromkeys(self.vocab, self._p)

    def token_prob(self, source, prefix, token):
        return self._p if token in self._vset else 0.0


# --------------------------------------------------------------------------
# trigram baseline


class TrigramBaseline(Generator):
    """Add-k smoothed trigram model over responses conditioned on the input tail.

    ``p(w | u, v) = (count(u, v, w) + k) / (count(u, v) + k * |V|)`` where
    ``(u, v)`` are the last two tokens of ``source + prefix`` (left padded).
    A context never seen in training falls back to the same add-k estimate
    over ``v`` alone, then over no context at all. Lower-order counts are
    marginals of the trigram table.
    """

    kind = "trigram"

    def __init__(self, counts: Mapping[tuple[str, str, str], int], vocab: Iterable[str], k: float = 0.01):
        if k <= 0:
            raise ValueError("smoothing constant must be positive")
        self.k = float(k)
        self.vocab = tuple(sorted(set(vocab) | {END, UNK}))
        self._vset = frozenset(self.vocab)
        self.counts: dict[tuple[str, str, str], int] = dict(sorted(counts.items()))
        self.context_counts: Counter = Counter()
        self._followers: dict[tuple, Counter] = {}
        for (u, v, w), n in self.counts.items():
            if w not in self._vset:
                raise ValueError(f"count table predicts out-of-vocabulary token {w!r}")
            for ctx in ((u, v), (v,), ()):
                self.context_counts[ctx] += n
                self._followers.setdefault(ctx, Counter())[w] += n

    @staticmethod
    def context_of(source: Sequence[str], prefix: Sequence[str]) -> tuple[str, str]:
        tail = ([BOS, BOS] + list(source) + list(prefix))[-2:]
        return tail[0], tail[1]

    def _table(self, u: str, v: str) -> tuple[Mapping[str, int], float]:
        for ctx in ((u, v), (v,), ()):
            if ctx in self._followers:
                return self._followers[ctx], self.context_counts[ctx] + self.k * len(self.vocab)
        return {}, self.k * len(self.vocab)

    def prob(self, u: str, v: str, w: str) -> float:
        if w not in self._vset:
            return 0.0
        follow, denom = self._table(u, v)
        return (follow.get(w, 0) + self.k) / denom

    def next_token_distribution(self, source, prefix=()):
        follow, denom = self._table(*self.context_of(source, prefix))
        return {w: (follow.get(w, 0) + self.k) / denom for w in self.vocab}

    def token_prob(self, source, prefix, token):
        return self.prob(*self.context_of(source, prefix), token)


def train_trigram(pairs: Iterable[tuple[Sequence[str], Sequence[str]]], k: float = 0.01) -> TrigramBaseline:
    """Count trigrams predicting each response token and the closing end token.

    ``pairs`` holds ``(source_tokens, response_tokens)``; source tokens only
    provide conditioning context for the first response positions.
    """
    counts: Counter = Counter()
    vocab: set[str] = set()
    n = 0
    for source, response in pairs:
        n += 1
        response = list(response)
        vocab.update(response)
        for t, w in enumerate(response + [END]):
            u, v = TrigramBaseline.context_of(source, response[:t])
            counts[(u, v, w)] += 1
    if n == 0:
        raise EmptyCorpus("cannot train on an empty corpus")
    return TrigramBaseline(counts, vocab, k)


# --------------------------------------------------------------------------
# retrieval baseline


class RetrievalBaseline(Generator):
    """Returns the stored response whose question is closest to the input question.

    Distances use Levenshtein weights only so an exact question always
    retrieves its own response; among equal distances the earliest stored
    pair wins. As a probability model it puts ``1 - smoothing`` on the next
    token of the retrieved response and spreads ``smoothing`` uniformly.
    """

    kind = "retrieval"

    def __init__(self, pairs: Sequence[tuple[Sequence[str], Sequence[str]]], smoothing: float = 0.01, sep: str = DEFAULT_SEP):
        if not pairs:
            raise EmptyCorpus("retrieval baseline needs at least one pair")
        if not 0 < smoothing <= 1:
            raise ValueError("smoothing must lie in (0, 1]")
        self.pairs = tuple((tuple(q), tuple(r)) for q, r in pairs)
        self.smoothing = float(smoothing)
        self.sep = sep
        self.vocab = tuple(sorted({t for _, r in self.pairs for t in r} | {END, UNK}))
        self._vset = frozenset(self.vocab)
        self._retrieve = lru_cache(maxsize=4096)(self._retrieve_uncached)

    def _retrieve_uncached(self, question: tuple[str, ...]) -> int:
        text = detokenize(question)
        best, best_d = 0, math.inf
        for i, (q, _) in enumerate(self.pairs):
            d = combined_dist(text, detokenize(q), LEVENSHTEIN_ONLY)
            if d < best_d:
                best, best_d = i, d
        return best

    def retrieve(self, question: Sequence[str]) -> tuple[str, ...]:
        return self.pairs[self._retrieve(tuple(question))][1]

    def _question_of(self, source: Sequence[str]) -> tuple[str, ...]:
        # The patient question is always the final segment of the input.
        source = list(source)
        if self.sep in source:
            source = source[len(source) - source[::-1].index(self.sep) :]
        return tuple(source)

    def _target(self, response, prefix) -> Optional[str]:
        t = len(prefix)
        if tuple(prefix) != response[:t]:
            return None
        return response[t] if t < len(response) else END

    def next_token_distribution(self, source, prefix=()):
        target = self._target(self.retrieve(self._question_of(source)), prefix)
        floor = self.smoothing / len(self.vocab)
        dist = dict.fromkeys(self.vocab, floor)
        if target is None:
            return dict.fromkeys(self.vocab, 1.0 / len(self.vocab))
        dist[target] += 1.0 - self.smoothing
        return dist

    def token_prob(self, source, prefix, token):
        if token not in self._vset:
            return 0.0
        target = self._target(self.retrieve(self._question_of(source)), prefix)
        if target is None:
            return 1.0 / len(self.vocab)
        return self.smoothing / len(self.vocab) + (1.0 - self.smoothing if token == target else 0.0)

    def generate(self, x: ModelInput, max_len: int) -> list[str]:
        if max_len < 1:
            raise ValueError("max_len must be at least 1")
        return list(self.retrieve(x.segment(SegmentKind.PatientQuestion))[:max_len])


def train_retrieval(corpus: Sequence[Conversation], smoothing: float = 0.01, sep: str = DEFAULT_SEP) -> RetrievalBaseline:
    """Store every (patient question, doctor response) pair in corpus order."""
    if not corpus:
        raise EmptyCorpus("cannot train on an empty corpus")
    pairs = [(tokenize(t.patient), tokenize(t.doctor)) for conv in corpus for t in conv.turns]
    return RetrievalBaseline(pairs, smoothing, sep)


# --------------------------------------------------------------------------
# serialization


def save_baseline(g: Generator, path) -> None:
    lines = []
    if isinstance(g, TrigramBaseline):
        lines.append(f"mka-baseline\t{FORMAT_VERSION}\tkind=trigram\tk={g.k!r}")
        lines += [f"V\t{t}" for t in g.vocab]
        lines += [f"T\t{u}\t{v}\t{w}\t{n}" for (u, v, w), n in g.counts.items()]
    elif isinstance(g, RetrievalBaseline):
        lines.append(
            f"mka-baseline\t{FORMAT_VERSION}\tkind=retrieval\tsmoothing={g.smoothing!r}\tsep={g.sep}"
        )
        lines += [f"P\t{' '.join(q)}\t{' '.join(r)}" for q, r in g.pairs]
    else:
        raise TypeError(f"cannot serialize {type(g).__name__}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_baseline(path) -> Generator:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ParseError(f"{path}: empty baseline file")
    head = lines[0].split("\t")
    if head[:2] != ["mka-baseline", FORMAT_VERSION]:
        raise ParseError(f"{path}:1: not a {FORMAT_VERSION} baseline file")
    params = dict(p.split("=", 1) for p in head[2:])
    body = [(i, l.split("\t")) for i, l in enumerate(lines[1:], start=2) if l]
    if params.get("kind") == "trigram":
        vocab, counts = [], {}
        for i, f in body:
            if f[0] == "V" and len(f) == 2:
                vocab.append(f[1])
            elif f[0] == "T" and len(f) == 5:
                counts[(f[1], f[2], f[3])] = int(f[4])
            else:
                raise ParseError(f"{path}:{i}: malformed trigram record")
        return TrigramBaseline(counts, vocab, float(params["k"]))
    if params.get("kind") == "retrieval":
        pairs = []
        for i, f in body:
            if f[0] != "P" or len(f) != 3:
                raise ParseError(f"{path}:{i}: malformed retrieval record")
            pairs.append((f[1].split(), f[2].split()))
        return RetrievalBaseline(pairs, float(params["smoothing"]), params.get("sep", DEFAULT_SEP))
    raise ParseError(f"{path}:1: unknown baseline kind {params.get('kind')!r}")


# --------------------------------------------------------------------------
# multi-turn loop


@dataclass
class TurnTrace:
    turn: int
    topics: tuple[Topic, ...]
    mki: MedicalKnowledgeInfoTuple
    model_input: ModelInput
    output: list[str]
    reference: list[str] = field(default_factory=list)


@dataclass
class ConversationRun:
    subgraph: KnowledgeGraph
    anchors: Anchors
    turns: list[TurnTrace]

    @property
    def responses(self) -> list[list[str]]:
        return [t.output for t in self.turns]


def run_conversation_traced(
    conv: Conversation,
    base: KnowledgeGraph,
    kps: KeyPhraseSets,
    g: Generator,
    c: MatchConfig = DEFAULT_MATCH,
    *,
    sep: str = DEFAULT_SEP,
    max_len: int = 30,
    use_knowledge: bool = True,
    feed_ground_truth: bool = False,
) -> ConversationRun:
    # An empty graph has nothing to anchor on; run as if knowledge were off.
    if use_knowledge and base.entities:
        sub, anchors = generate_subgraph(conv.self_report, base, c)
    else:
        sub, anchors = KnowledgeGraph.empty(), Anchors()
    traces = []
    prev_dr = ""
    for i, turn in enumerate(conv.turns, start=1):
        topics = detect_topics(turn.patient, kps, c)
        mki = extract_knowledge(sub, topics, anchors) if use_knowledge else MedicalKnowledgeInfoTuple()
        x = build_model_input(mki, prev_dr, turn.patient, sep)
        out = g.generate(x, max_len)
        traces.append(TurnTrace(i, topics, mki, x, out, tokenize(turn.doctor)))
        prev_dr = turn.doctor if feed_ground_truth else detokenize(out)
    return ConversationRun(sub, anchors, traces)


def run_conversation(conv, base, kps, g, c=DEFAULT_MATCH, **kwargs) -> list[list[str]]:
    """One generated response per turn; each becomes the next turn's previous response."""
    return run_conversation_traced(conv, base, kps, g, c, **kwargs).responses
