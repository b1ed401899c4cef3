"""Token processor: assemble the knowledge-augmented model input.

The flat input is laid out as::

    knowledge (unseen) <sep> anchors (seen) <sep> previous doctor response <sep> patient question

with empty segments dropped together with their separator.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import SeparatorCollision
from .pipeline import MedicalKnowledgeInfoTuple

DEFAULT_SEP = "<sep>"

# Scripts written without word spacing: each character is its own token.
_CJK = (
    "\u3040-\u30ff"  # kana
    "\u3400-\u4dbf\u4e00-\u9fff\uf900-\ufaff"  # ideographs
    "\uac00-\ud7af"  # hangul
    "\u3000-\u303f\uff00-\uffef"  # CJK and fullwidth punctuation
)
_TOKEN_RE = re.compile(f"[{_CJK}]|[^\\s{_CJK}]+")


def tokenize(text: str) -> list[str]:
    """Whitespace tokens, with CJK characters split out one per token.

    >>> tokenize("what drug should i take")
    ['what', 'drug', 'should', 'i', 'take']
    >>> tokenize("头痛吃什么药")
    ['头', '痛', '吃', '什', '么', '药']
    """
    return _TOKEN_RE.findall(text or "")


def detokenize(tokens: Sequence[str]) -> str:
    return " ".join(tokens)


class SegmentKind(enum.Enum):
    KnowledgeUnseen = "KnowledgeUnseen"
    AnchorsSeen = "AnchorsSeen"
    PrevDoctorResponse = "PrevDoctorResponse"
    PatientQuestion = "PatientQuestion"


SEGMENT_ORDER = tuple(SegmentKind)


@dataclass(frozen=True)
class ModelInput:
    segments: tuple[tuple[SegmentKind, tuple[str, ...]], ...]
    sep: str = DEFAULT_SEP

    def __post_init__(self):
        kinds = tuple(k for k, _ in self.segments)
        if kinds != SEGMENT_ORDER:
            raise ValueError(f"segments must be exactly {[k.value for k in SEGMENT_ORDER]}")
        if not self.sep:
            raise ValueError("separator must be non-empty")
        for kind, toks in self.segments:
            if self.sep in toks:
                raise SeparatorCollision(f"separator {self.sep!r} occurs inside {kind.value}")

    def segment(self, kind: SegmentKind) -> tuple[str, ...]:
        return dict(self.segments)[kind]

    def present_kinds(self) -> tuple[SegmentKind, ...]:
        return tuple(k for k, toks in self.segments if toks)

    @property
    def flat(self) -> list[str]:
        out: list[str] = []
        for _, toks in self.segments:
            if not toks:
                continue
            if out:
                out.append(self.sep)
            out.extend(toks)
        return out

    def __len__(self):
        return len(self.flat)

    def line(self) -> str:
        """One line of the prepared-input file."""
        return " ".join(self.flat)

    @classmethod
    def from_flat(
        cls,
        flat: Sequence[str],
        sep: str = DEFAULT_SEP,
        present: Optional[Iterable[SegmentKind]] = None,
    ) -> "ModelInput":
        """Inverse of :attr:`flat`.

        Empty segments leave no trace in the flat sequence, so ``present``
        names the non-empty kinds. It may be omitted only when all four
        segments are present.
        """
        chunks: list[list[str]] = [[]] if flat else []
        for tok in flat:
            if tok == sep:
                chunks.append([])
            else:
                chunks[-1].append(tok)
        kinds = SEGMENT_ORDER if present is None else tuple(k for k in SEGMENT_ORDER if k in set(present))
        if len(kinds) != len(chunks) or any(not c for c in chunks):
            raise ValueError(f"flat sequence has {len(chunks)} segments but {len(kinds)} were declared")
        by_kind = dict(zip(kinds, chunks))
        return cls(tuple((k, tuple(by_kind.get(k, ()))) for k in SEGMENT_ORDER), sep)


def build_model_input(
    mki: MedicalKnowledgeInfoTuple,
    prev_dr: str,
    question: str,
    sep: str = DEFAULT_SEP,
) -> ModelInput:
    knowledge = [t for name in mki.knowledge for t in tokenize(name)]
    anchors = [t for name in mki.anchors.names() for t in tokenize(name)]
    return ModelInput(
        (
            (SegmentKind.KnowledgeUnseen, tuple(knowledge)),
            (SegmentKind.AnchorsSeen, tuple(anchors)),
            (SegmentKind.PrevDoctorResponse, tuple(tokenize(prev_dr))),
            (SegmentKind.PatientQuestion, tuple(tokenize(question))),
        ),
        sep,
    )


def write_prepared(path, inputs: Iterable[ModelInput]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x in inputs:
            fh.write(x.line() + "\n")
