"""
Loading and querying a typed medical knowledge graph
====================================================

The bundled cardiology fixture is a ten-fact graph. Every fact is checked
against the relation's endpoint rules when it is loaded.
"""

from mka import load_graph_file
from mka.experiment import bundled
from mka.kg import Entity, EntityType, RelationType, neighbors

g = load_graph_file(bundled("cardiology.tsv"))
print(len(g.entities), "entities,", len(g.facts), "facts")
print(g.stats())

# Who treats angina?
angina = Entity("angina", EntityType.Disease)
print("drugs for angina:", [e.name for e in neighbors(g, angina, RelationType.NeedDrug)])

# A Drug cannot have symptoms, so this record is rejected on load
from mka.errors import TypeViolation
from mka.kg import load_graph

try:
    load_graph([("aspirin", "Drug", "HasSymptom", "rash", "Symptom")])
except TypeViolation as exc:
    print("rejected:", exc)
