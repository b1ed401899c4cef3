"""Typed medical knowledge graph.

The base graph and every per-case subgraph share the same representation:
a set of typed entities plus a set of relation-constrained fact tuples,
with two lookup indexes (entities by type, tails by (head, relation)).
Graphs are immutable once built.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyName, ParseError, SelfLoop, TypeViolation, UnknownEntity


class EntityType(enum.Enum):
    Department = "Department"
    Disease = "Disease"
    Symptom = "Symptom"
    Food = "Food"
    Check = "Check"
    Drug = "Drug"

    @property
    def order(self) -> int:
        return _ETYPE_ORDER[self]


_ETYPE_ORDER = {t: i for i, t in enumerate(EntityType)}


class RelationType(enum.Enum):
    HasDisease = "HasDisease"
    HasSymptom = "HasSymptom"
    NeedDrug = "NeedDrug"
    NeedCheck = "NeedCheck"
    NeedFood = "NeedFood"
    NoFood = "NoFood"

    @property
    def order(self) -> int:
        return _REL_ORDER[self]

    @property
    def heads(self) -> frozenset[EntityType]:
        return ENDPOINT_RULES[self][0]

    @property
    def tail(self) -> EntityType:
        return ENDPOINT_RULES[self][1]

    def allows(self, head: EntityType, tail: EntityType) -> bool:
        return head in self.heads and tail is self.tail


_REL_ORDER = {r: i for i, r in enumerate(RelationType)}

_DS = frozenset({EntityType.Disease, EntityType.Symptom})

ENDPOINT_RULES: Mapping[RelationType, tuple[frozenset[EntityType], EntityType]] = {
    RelationType.HasDisease: (frozenset({EntityType.Department}), EntityType.Disease),
    RelationType.HasSymptom: (frozenset({EntityType.Disease}), EntityType.Symptom),
    RelationType.NeedDrug: (_DS, EntityType.Drug),
    RelationType.NeedCheck: (_DS, EntityType.Check),
    RelationType.NeedFood: (_DS, EntityType.Food),
    RelationType.NoFood: (_DS, EntityType.Food),
}

# Relations that attach treatment/diet knowledge to a disease or symptom.
TREATMENT_RELATIONS = (
    RelationType.NeedDrug,
    RelationType.NeedCheck,
    RelationType.NeedFood,
    RelationType.NoFood,
)


@dataclass(frozen=True)
class Entity:
    name: str
    etype: EntityType

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise EmptyName(f"entity name must be non-empty, got {self.name!r}")

    @property
    def sort_key(self) -> tuple[str, int]:
        return (self.name, self.etype.order)

    def __str__(self):
        return f"{self.name} ({self.etype.value})"


@dataclass(frozen=True)
class FactTuple:
    head: Entity
    relation: RelationType
    tail: Entity

    def __post_init__(self):
        if not self.relation.allows(self.head.etype, self.tail.etype):
            raise TypeViolation(
                f"{self.relation.value} cannot link {self.head.etype.value} "
                f"-> {self.tail.etype.value} ({self.head.name!r} -> {self.tail.name!r})"
            )
        if self.head == self.tail:
            raise SelfLoop(f"self-loop on {self.head}")

    @property
    def sort_key(self):
        return (self.head.sort_key, self.relation.order, self.tail.sort_key)

    def as_record(self) -> tuple[str, str, str, str, str]:
        return (
            self.head.name,
            self.head.etype.value,
            self.relation.value,
            self.tail.name,
            self.tail.etype.value,
        )


class KnowledgeGraph:
    """An immutable typed graph ``(entities, facts)`` with lookup indexes.

    Entities may exist without incident facts (a matched anchor with no
    outgoing edges is still part of a subgraph).
    """

    __slots__ = ("entities", "facts", "index_by_type", "adjacency")

    def __init__(self, entities: Iterable[Entity] = (), facts: Iterable[FactTuple] = ()):
        facts = frozenset(facts)
        ents = set(entities)
        for f in facts:
            ents.add(f.head)
            ents.add(f.tail)
        self.entities: frozenset[Entity] = frozenset(ents)
        self.facts: frozenset[FactTuple] = facts
        self.index_by_type, self.adjacency = build_indexes(self.entities, self.facts)

    @classmethod
    def empty(cls) -> "KnowledgeGraph":
        return cls()

    def __len__(self):
        return len(self.facts)

    def __contains__(self, item) -> bool:
        if isinstance(item, Entity):
            return item in self.entities
        return item in self.facts

    def __eq__(self, other):
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return self.entities == other.entities and self.facts == other.facts

    def __hash__(self):
        return hash((self.entities, self.facts))

    def __repr__(self):
        return f"KnowledgeGraph({len(self.entities)} entities, {len(self.facts)} facts)"

    def sorted_facts(self) -> list[FactTuple]:
        return sorted(self.facts, key=lambda f: f.sort_key)

    def sorted_entities(self) -> list[Entity]:
        return sorted(self.entities, key=lambda e: e.sort_key)

    def find(self, name: str, etype: EntityType | None = None) -> list[Entity]:
        """Entities called ``name``, optionally restricted to one type."""
        types = [etype] if etype is not None else list(EntityType)
        return [e for t in types for e in self.index_by_type.get(t, ()) if e.name == name]

    def stats(self) -> dict[str, dict[str, int]]:
        ent_counts = Counter(e.etype.value for e in self.entities)
        rel_counts = Counter(f.relation.value for f in self.facts)
        return {
            "entities": {t.value: ent_counts.get(t.value, 0) for t in EntityType},
            "facts": {r.value: rel_counts.get(r.value, 0) for r in RelationType},
        }


def build_indexes(entities, facts):
    """Rebuild both indexes from the raw sets; output is fully ordered."""
    by_type: dict[EntityType, list[Entity]] = {t: [] for t in EntityType}
    for e in entities:
        by_type[e.etype].append(e)
    for t in by_type:
        by_type[t].sort(key=lambda e: e.sort_key)

    adjacency: dict[tuple[Entity, RelationType], list[Entity]] = {}
    for f in facts:
        adjacency.setdefault((f.head, f.relation), []).append(f.tail)
    for k in adjacency:
        adjacency[k].sort(key=lambda e: e.sort_key)
    adjacency = dict(sorted(adjacency.items(), key=lambda kv: (kv[0][0].sort_key, kv[0][1].order)))
    return by_type, adjacency


def _parse_enum(enum_cls, label, where):
    try:
        return enum_cls(label)
    except ValueError:
        raise ParseError(f"{where}: unknown {enum_cls.__name__} label {label!r}") from None


def load_graph(records: Iterable[Sequence[str]]) -> KnowledgeGraph:
    """Build a validated graph from raw 5-field records.

    Each record is ``(head, head_type, relation, tail, tail_type)``. Duplicate
    facts collapse; entities are created on first mention. Errors name the
    offending record by its 1-based position.
    """
    facts = []
    for i, rec in enumerate(records, start=1):
        where = f"record {i}"
        if len(rec) != 5:
            raise ParseError(f"{where}: expected 5 fields, got {len(rec)}")
        head, htype, rel, tail, ttype = (str(x).strip() for x in rec)
        try:
            fact = FactTuple(
                Entity(head, _parse_enum(EntityType, htype, where)),
                _parse_enum(RelationType, rel, where),
                Entity(tail, _parse_enum(EntityType, ttype, where)),
            )
        except (TypeViolation, EmptyName, SelfLoop) as exc:
            raise type(exc)(f"{where}: {exc}") from None
        facts.append(fact)
    return KnowledgeGraph(facts=facts)


def read_kg_records(path) -> list[tuple[str, ...]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.rstrip("\r\n").split("\t")
        if len(fields) != 5:
            raise ParseError(f"{path}:{lineno}: expected 5 tab-separated fields, got {len(fields)}")
        records.append(tuple(fields))
    return records


def load_graph_file(path) -> KnowledgeGraph:
    """Read a KG file (five tab-separated fields per line, ``#`` comments)."""
    records = read_kg_records(path)
    try:
        return load_graph(records)
    except (ParseError, TypeViolation, EmptyName, SelfLoop) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def dump_graph(g: KnowledgeGraph) -> str:
    return "".join("\t".join(f.as_record()) + "\n" for f in g.sorted_facts())


def entities_of_type(g: KnowledgeGraph, t: EntityType) -> list[Entity]:
    return list(g.index_by_type.get(t, ()))


def neighbors(g: KnowledgeGraph, e: Entity, r: RelationType) -> list[Entity]:
    if e not in g.entities:
        raise UnknownEntity(f"{e} is not in the graph")
    return list(g.adjacency.get((e, r), ()))


def union(a: KnowledgeGraph, b: KnowledgeGraph) -> KnowledgeGraph:
    return KnowledgeGraph(a.entities | b.entities, a.facts | b.facts)
