"""
Building model input and decoding with a baseline
=================================================

Knowledge, anchors, the previous doctor response and the patient question
are concatenated with a separator token. Two small baselines stand in for a
neural generator.
"""

from mka.corpus import load_corpus
from mka.experiment import bundled
from mka.generation import train_retrieval, train_trigram
from mka.kg import Entity, EntityType
from mka.pipeline import Anchors, MedicalKnowledgeInfoTuple
from mka.tokens import build_model_input, tokenize

mki = MedicalKnowledgeInfoTuple(
    Anchors(Entity("cardiology", EntityType.Department), Entity("angina", EntityType.Disease)),
    ("nitroglycerin",),
)
x = build_model_input(mki, "", "what drug should i take")
print(x.line())

# Chinese text is split per character, English on whitespace
print(tokenize("我胃痛 what drug"))

corpus = load_corpus(bundled("toy_corpus.jsonl"))
retrieval = train_retrieval(corpus)
print("retrieval:", " ".join(retrieval.generate(x, 30)))

# The trigram sees the tail of its input, so train it on (question, response)
pairs = [(tokenize(t.patient), tokenize(t.doctor)) for c in corpus for t in c.turns]
trigram = train_trigram(pairs, k=0.01)
print("trigram:  ", " ".join(trigram.generate(x, 12)))
