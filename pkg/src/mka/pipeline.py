"""Knowledge generation: subgraph extraction, topic detection, knowledge extraction.

The three stages run per conversation as follows: the patient self-report
is matched against the base graph once to carve out a case subgraph, then
for every turn the question's topics select which entities of that
subgraph are handed to the token processor.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .errors import NoMatchableEntity, ParseError
from .kg import (
    TREATMENT_RELATIONS,
    Entity,
    EntityType,
    FactTuple,
    KnowledgeGraph,
    RelationType,
    entities_of_type,
    neighbors,
)
from .textmatch import DEFAULT_MATCH, MatchConfig, best_match, normalized_similarity


def _clean(text: Optional[str]) -> Optional[str]:
    if text is None:
        return None
    text = text.strip()
    return text or None


@dataclass(frozen=True)
class PatientSelfReport:
    """The pre-conversation form: a department blank and a disease/symptom blank.

    Blank or whitespace-only fields are normalised to ``None``.
    """

    department: Optional[str] = None
    disease_symptom: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "department", _clean(self.department))
        object.__setattr__(self, "disease_symptom", _clean(self.disease_symptom))


@dataclass(frozen=True)
class Anchors:
    eps1: Optional[Entity] = None
    eps2: Optional[Entity] = None

    def __post_init__(self):
        if self.eps1 is not None and self.eps1.etype is not EntityType.Department:
            raise ValueError(f"department anchor must be a Department, got {self.eps1}")
        if self.eps2 is not None and self.eps2.etype not in (EntityType.Disease, EntityType.Symptom):
            raise ValueError(f"second anchor must be a Disease or Symptom, got {self.eps2}")

    def present(self) -> list[Entity]:
        return [e for e in (self.eps1, self.eps2) if e is not None]

    def names(self) -> list[str]:
        return [e.name for e in self.present()]


class Topic(enum.Enum):
    DiseaseTopic = "DiseaseTopic"
    SymptomTopic = "SymptomTopic"
    DrugTopic = "DrugTopic"
    CheckTopic = "CheckTopic"
    RecommendedFoodTopic = "RecommendedFoodTopic"
    NotRecommendedFoodTopic = "NotRecommendedFoodTopic"

    @property
    def order(self) -> int:
        return _TOPIC_ORDER[self]


_TOPIC_ORDER = {t: i for i, t in enumerate(Topic)}


@dataclass(frozen=True)
class KeyPhraseSets:
    """One phrase list per topic. All six topics must be present."""

    phrases: Mapping[Topic, tuple[str, ...]]

    def __post_init__(self):
        missing = [t.value for t in Topic if t not in self.phrases]
        if missing:
            raise ValueError(f"key phrase sets missing topics: {', '.join(missing)}")
        clean = {}
        for t in Topic:
            seen: list[str] = []
            for p in self.phrases[t]:
                if not isinstance(p, str) or not p.strip():
                    raise ValueError(f"{t.value}: empty key phrase")
                if p in seen:
                    raise ValueError(f"{t.value}: duplicate key phrase {p!r}")
                seen.append(p)
            clean[t] = tuple(seen)
        object.__setattr__(self, "phrases", clean)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Iterable[str]]) -> "KeyPhraseSets":
        unknown = set(data) - {t.value for t in Topic}
        if unknown:
            raise ValueError(f"unknown topic labels: {', '.join(sorted(unknown))}")
        return cls({Topic(k): tuple(v) for k, v in data.items()})

    @classmethod
    def only(cls, **by_topic: Iterable[str]) -> "KeyPhraseSets":
        """Build sets where unspecified topics are empty, e.g. ``only(DrugTopic=["drug"])``."""
        data = {t.value: () for t in Topic}
        data.update(by_topic)
        return cls.from_mapping(data)

    def to_mapping(self) -> dict[str, list[str]]:
        return {t.value: list(self.phrases[t]) for t in Topic}


def load_kps_file(path) -> KeyPhraseSets:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object mapping topic labels to phrase lists")
    try:
        return KeyPhraseSets.from_mapping(data)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


# Topics in canonical enum order, no duplicates.
QuestionTopicTuple = tuple[Topic, ...]


@dataclass(frozen=True)
class MedicalKnowledgeInfoTuple:
    anchors: Anchors = field(default_factory=Anchors)
    knowledge: tuple[str, ...] = ()

    def all_names(self) -> list[str]:
        return self.anchors.names() + list(self.knowledge)


# --------------------------------------------------------------------------
# subgraph generation


def _predecessors(g: KnowledgeGraph, tail: Entity, r: RelationType) -> list[Entity]:
    heads = {f.head for f in g.facts if f.relation is r and f.tail == tail}
    return sorted(heads, key=lambda e: e.sort_key)


def _out_facts(g: KnowledgeGraph, head: Entity, relations) -> list[FactTuple]:
    return [FactTuple(head, r, t) for r in relations for t in g.adjacency.get((head, r), ())]


def _department_facts(base: KnowledgeGraph, eps1: Entity) -> list[FactTuple]:
    facts = []
    for d in neighbors(base, eps1, RelationType.HasDisease):
        facts.append(FactTuple(eps1, RelationType.HasDisease, d))
        facts.extend(_out_facts(base, d, [RelationType.HasSymptom]))
    return facts


def _disease_symptom_facts(base: KnowledgeGraph, eps2: Entity) -> list[FactTuple]:
    if eps2.etype is EntityType.Disease:
        symptoms = _out_facts(base, eps2, [RelationType.HasSymptom])
        facts = symptoms + _out_facts(base, eps2, TREATMENT_RELATIONS)
        for f in symptoms:
            facts.extend(_out_facts(base, f.tail, TREATMENT_RELATIONS))
        return facts
    # Symptom anchor: diseases reach it through a reversed HasSymptom edge.
    facts = []
    for d in _predecessors(base, eps2, RelationType.HasSymptom):
        facts.extend(_out_facts(base, d, [RelationType.HasSymptom]))
        facts.extend(_out_facts(base, d, TREATMENT_RELATIONS))
    facts.extend(_out_facts(base, eps2, TREATMENT_RELATIONS))
    return facts


def match_anchors(
    psr: PatientSelfReport, base: KnowledgeGraph, c: MatchConfig = DEFAULT_MATCH
) -> Anchors:
    eps1 = eps2 = None
    if psr.department is not None:
        pool = entities_of_type(base, EntityType.Department)
        if not pool:
            raise NoMatchableEntity("self-report names a department but the graph has none")
        eps1 = best_match(psr.department, pool, c)
    if psr.disease_symptom is not None:
        pool = entities_of_type(base, EntityType.Disease) + entities_of_type(base, EntityType.Symptom)
        if not pool:
            raise NoMatchableEntity(
                "self-report names a disease/symptom but the graph has no Disease or Symptom entities"
            )
        eps2 = best_match(psr.disease_symptom, pool, c)
    return Anchors(eps1, eps2)


def generate_subgraph(
    psr: PatientSelfReport, base: KnowledgeGraph, c: MatchConfig = DEFAULT_MATCH
) -> tuple[KnowledgeGraph, Anchors]:
    """Carve the case subgraph out of ``base`` for one self-report.

    The department anchor contributes its diseases and their symptoms.
    The disease/symptom anchor contributes symptoms plus every drug, check
    and food edge of the anchor and of its one-hop neighbours (symptoms of
    a disease anchor, diseases of a symptom anchor). Absent fields
    contribute nothing.
    """
    anchors = match_anchors(psr, base, c)
    facts: list[FactTuple] = []
    if anchors.eps1 is not None:
        facts += _department_facts(base, anchors.eps1)
    if anchors.eps2 is not None:
        facts += _disease_symptom_facts(base, anchors.eps2)
    return KnowledgeGraph(anchors.present(), facts), anchors


# --------------------------------------------------------------------------
# topic detection


def _window_similarity(question: str, phrase: str, c: MatchConfig) -> float:
    """Best similarity between ``phrase`` and any same-length window of ``question``."""
    n = len(phrase)
    if len(question) <= n:
        return normalized_similarity(question, phrase, c)
    return max(normalized_similarity(question[i : i + n], phrase, c) for i in range(len(question) - n + 1))


def detect_topics(
    question: str, kps: KeyPhraseSets, c: MatchConfig = DEFAULT_MATCH
) -> QuestionTopicTuple:
    if not question:
        return ()
    found = []
    for topic in Topic:
        for phrase in kps.phrases[topic]:
            if phrase in question or _window_similarity(question, phrase, c) > c.delta:
                found.append(topic)
                break
    return tuple(found)


# --------------------------------------------------------------------------
# knowledge extraction

_TOPIC_TYPES = {
    Topic.DiseaseTopic: EntityType.Disease,
    Topic.SymptomTopic: EntityType.Symptom,
    Topic.DrugTopic: EntityType.Drug,
    Topic.CheckTopic: EntityType.Check,
}
_TOPIC_FOOD_RELATIONS = {
    Topic.RecommendedFoodTopic: RelationType.NeedFood,
    Topic.NotRecommendedFoodTopic: RelationType.NoFood,
}


def _topic_entities(sub: KnowledgeGraph, topic: Topic, anchors: Anchors) -> list[Entity]:
    if topic in _TOPIC_TYPES:
        found = entities_of_type(sub, _TOPIC_TYPES[topic])
        if topic in (Topic.DiseaseTopic, Topic.SymptomTopic):
            found = [e for e in found if e != anchors.eps2]
        return found
    rel = _TOPIC_FOOD_RELATIONS[topic]
    foods = {f.tail for f in sub.facts if f.relation is rel}
    return sorted(foods, key=lambda e: e.sort_key)


def extract_knowledge(
    sub: KnowledgeGraph, qt: QuestionTopicTuple, a: Anchors
) -> MedicalKnowledgeInfoTuple:
    """Collect the subgraph entities relevant to the question topics.

    Output names follow topic order, then name order; duplicates and
    anchor names are dropped.
    """
    seen = set(a.names())
    knowledge = []
    for topic in sorted(set(qt), key=lambda t: t.order):
        for e in _topic_entities(sub, topic, a):
            if e.name not in seen:
                seen.add(e.name)
                knowledge.append(e.name)
    return MedicalKnowledgeInfoTuple(a, tuple(knowledge))
