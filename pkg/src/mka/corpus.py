"""Conversation corpus, pipeline configuration and dataset splitting."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

from .errors import ParseError, TooFewConversations
from .pipeline import PatientSelfReport
from .textmatch import MatchConfig
from .tokens import DEFAULT_SEP


@dataclass(frozen=True)
class Turn:
    patient: str
    doctor: str = ""


@dataclass(frozen=True)
class Conversation:
    self_report: PatientSelfReport
    turns: tuple[Turn, ...]
    id: str = ""

    def __post_init__(self):
        if not self.turns:
            raise ValueError(f"conversation {self.id!r} has no turns")
        for i, t in enumerate(self.turns, start=1):
            if not t.patient.strip():
                raise ValueError(f"conversation {self.id!r} turn {i}: empty patient question")


@dataclass(frozen=True)
class PipelineConfig:
    match: MatchConfig = field(default_factory=MatchConfig)
    separator: str = DEFAULT_SEP
    smoothing: float = 0.01
    max_len: int = 30
    seed: int = 13
    split: tuple[float, float, float] = (0.8, 0.1, 0.1)

    def __post_init__(self):
        if len(self.split) != 3 or any(r <= 0 for r in self.split):
            raise ValueError(f"split ratios must be three positive numbers, got {self.split}")
        if abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError(f"split ratios must sum to 1, got {sum(self.split)}")
        if self.smoothing <= 0:
            raise ValueError("smoothing must be positive")
        if self.max_len < 1:
            raise ValueError("max_len must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {"alpha", "beta", "delta", "separator", "smoothing", "max_len", "seed", "split"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        base = cls()
        match = MatchConfig(
            alpha=float(data.get("alpha", base.match.alpha)),
            beta=float(data.get("beta", base.match.beta)),
            delta=float(data.get("delta", base.match.delta)),
        )
        return cls(
            match=match,
            separator=str(data.get("separator", base.separator)),
            smoothing=float(data.get("smoothing", base.smoothing)),
            max_len=int(data.get("max_len", base.max_len)),
            seed=int(data.get("seed", base.seed)),
            split=tuple(float(r) for r in data.get("split", base.split)),
        )

    def to_dict(self) -> dict:
        return {
            "alpha": self.match.alpha,
            "beta": self.match.beta,
            "delta": self.match.delta,
            "separator": self.separator,
            "smoothing": self.smoothing,
            "max_len": self.max_len,
            "seed": self.seed,
            "split": list(self.split),
        }

    def with_seed(self, seed: Optional[int]) -> "PipelineConfig":
        return self if seed is None else replace(self, seed=seed)


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        return PipelineConfig.from_dict(data)
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from None


def conversation_from_dict(d: dict) -> Conversation:
    psr = d.get("self_report") or {}
    turns = tuple(Turn(str(t["patient"]), str(t.get("doctor", ""))) for t in d["turns"])
    return Conversation(
        PatientSelfReport(psr.get("department"), psr.get("disease_symptom")),
        turns,
        str(d.get("id", "")),
    )


def conversation_to_dict(c: Conversation) -> dict:
    return {
        "id": c.id,
        "self_report": {
            "department": c.self_report.department,
            "disease_symptom": c.self_report.disease_symptom,
        },
        "turns": [{"patient": t.patient, "doctor": t.doctor} for t in c.turns],
    }


def load_corpus(path) -> list[Conversation]:
    """Read a JSON-lines conversation file, one conversation per line."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    convs = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            convs.append(conversation_from_dict(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}:{lineno}: malformed conversation ({exc})") from None
    return convs


def write_corpus(path, convs: Sequence[Conversation]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in convs:
            fh.write(json.dumps(conversation_to_dict(c), ensure_ascii=False) + "\n")


def split_sizes(n: int, ratios: Sequence[float]) -> tuple[int, int, int]:
    """Partition sizes: validation and test get ``max(1, floor(r*n))``, train the rest."""
    if n < 3:
        raise TooFewConversations(f"need at least 3 conversations to split, got {n}")
    n_val = max(1, math.floor(ratios[1] * n))
    n_test = max(1, math.floor(ratios[2] * n))
    n_train = n - n_val - n_test
    if n_train < 1:
        raise TooFewConversations(f"{n} conversations leave no training data at ratios {tuple(ratios)}")
    return n_train, n_val, n_test


def split_dataset(convs: Sequence[Conversation], cfg: PipelineConfig = PipelineConfig()):
    """Seeded shuffle, then contiguous train/validation/test slices."""
    n_train, n_val, _ = split_sizes(len(convs), cfg.split)
    order = list(range(len(convs)))
    random.Random(cfg.seed).shuffle(order)
    shuffled = [convs[i] for i in order]
    return (
        shuffled[:n_train],
        shuffled[n_train : n_train + n_val],
        shuffled[n_train + n_val :],
    )
