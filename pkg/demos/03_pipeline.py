"""
From self-report to knowledge tuple
===================================

A patient's self-report selects a subgraph; each question's topics then pick
which entities of that subgraph are worth passing to the generator.
"""

from mka import load_graph_file
from mka.experiment import bundled
from mka.kg import dump_graph
from mka.pipeline import PatientSelfReport, detect_topics, extract_knowledge, generate_subgraph, load_kps_file
from mka.textmatch import MatchConfig

cfg = MatchConfig(alpha=1.0, beta=0.1)
base = load_graph_file(bundled("cardiology.tsv"))
kps = load_kps_file(bundled("kps.json"))

sub, anchors = generate_subgraph(PatientSelfReport("cardiology", "angina"), base, cfg)
print(dump_graph(sub))

for question in ("what drug should i take", "is there anything i should not eat", "hello doctor"):
    topics = detect_topics(question, kps, cfg)
    mki = extract_knowledge(sub, topics, anchors)
    print(f"{question!r:40} {[t.value for t in topics]} -> {list(mki.knowledge)}")
