"""
Fuzzy entity matching
=====================

Anchors are found by minimising a weighted mix of Levenshtein and extended
Hamming distance. The default weights (alpha=0.1, beta=-1) reward Hamming
distance, which can pull a query away from its exact match; positive weights
behave like a conventional edit-distance matcher.
"""

from mka.kg import Entity, EntityType
from mka.textmatch import MatchConfig, best_match, combined_dist, normalized_similarity

diseases = [Entity("angina", EntityType.Disease), Entity("arrhythmia", EntityType.Disease)]

for cfg in (MatchConfig(), MatchConfig(alpha=1.0, beta=0.1)):
    print(cfg)
    for d in diseases:
        print("   ", d.name, combined_dist("angina", d.name, cfg))
    print("    best:", best_match("angina", diseases, cfg).name)

# Similarity used by topic detection is a rescaled score in [0, 1]
print(normalized_similarity("medicine", "medcine", MatchConfig(alpha=1.0, beta=0.1)))
