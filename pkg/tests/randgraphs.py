"""Shared configs and random-input generators for the test suite."""

import random

from hypothesis import strategies as st

from mka import MatchConfig
from mka.kg import ENDPOINT_RULES, EntityType, RelationType
from mka.pipeline import KeyPhraseSets

# Positive weights: exact matches always win the argmin.
FIXTURE_CFG = MatchConfig(alpha=1.0, beta=0.1, delta=0.7)
DEFAULT_CFG = MatchConfig(alpha=0.1, beta=-1.0, delta=0.7)


# ------------------------------------------------------------ random graphs

NAME_POOL = {
    EntityType.Department: ["cardiology", "neurology", "dermatology"],
    EntityType.Disease: ["angina", "flu", "gout", "asthma", "colic"],
    EntityType.Symptom: ["cough", "fever", "rash", "flu", "itch"],
    EntityType.Food: ["rice", "tea", "beer", "fish"],
    EntityType.Check: ["ecg", "mri", "ct"],
    EntityType.Drug: ["aspirin", "zinc", "statin"],
}


def random_records(rng: random.Random, n_facts: int):
    records = []
    rels = list(RelationType)
    for _ in range(n_facts):
        r = rng.choice(rels)
        heads, tail_t = ENDPOINT_RULES[r]
        head_t = rng.choice(sorted(heads, key=lambda t: t.value))
        records.append((
            rng.choice(NAME_POOL[head_t]), head_t.value, r.value,
            rng.choice(NAME_POOL[tail_t]), tail_t.value,
        ))
    return records


@st.composite
def record_lists(draw, max_size=30):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(0, max_size))
    return random_records(random.Random(seed), n)


def random_psr_text(rng: random.Random):
    pool = [n for names in NAME_POOL.values() for n in names]
    if rng.random() < 0.25:
        return None
    word = rng.choice(pool)
    # light corruption so matching is not always exact
    if word and rng.random() < 0.5:
        i = rng.randrange(len(word))
        word = word[:i] + rng.choice("abcxyz") + word[i + 1 :]
    return word


def kps_only(**by_topic) -> KeyPhraseSets:
    return KeyPhraseSets.only(**by_topic)
