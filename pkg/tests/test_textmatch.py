import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mka.errors import BothEmpty, EmptyCandidateSet
from mka.kg import Entity, EntityType
from mka.textmatch import (
    MatchConfig,
    best_match,
    combined_dist,
    hamming_ext,
    levenshtein,
    normalized_similarity,
)
from oracles import argmin_oracle, hamming_positional, lev_table
from randgraphs import FIXTURE_CFG, DEFAULT_CFG

texts = st.text(alphabet="abcdé中文", max_size=12)


@pytest.mark.parametrize("u,v,expected", [
    ("", "abc", 3),
    ("kitten", "sitting", lev_table("kitten", "sitting")),
    ("angina", "angina", 0),
    ("胃痛", "胃炎", 1),
])
def test_levenshtein_examples(u, v, expected):
    assert levenshtein(u, v) == expected


def test_kitten_oracle_value():
    assert lev_table("kitten", "sitting") == 3


@pytest.mark.parametrize("u,v,expected", [
    ("abc", "abc", 0),
    ("abc", "ab", 1),
    ("karolin", "kathrin", hamming_positional("karolin", "kathrin")),
])
def test_hamming_examples(u, v, expected):
    assert hamming_ext(u, v) == expected


def test_karolin_oracle_value():
    assert hamming_positional("karolin", "kathrin") == 3


def test_combined_dist_examples():
    assert combined_dist("angina", "angina", DEFAULT_CFG) == 0.0
    assert combined_dist("angina", "angima", DEFAULT_CFG) == pytest.approx(-0.9)
    assert combined_dist("abc", "", MatchConfig(1, 1)) == 6.0


def test_normalized_similarity_examples():
    assert normalized_similarity("drug", "drug", DEFAULT_CFG) == 1.0
    assert normalized_similarity("ab", "cd", DEFAULT_CFG) == 0.0
    with pytest.raises(BothEmpty):
        normalized_similarity("", "", DEFAULT_CFG)


def test_medicine_typo_similarity():
    lev = lev_table("medicine", "medcine")
    ham = hamming_positional("medicine", "medcine")
    assert (lev, ham) == (1, 5)
    # Levenshtein-heavy weights cross the 0.7 threshold ...
    wa, wb = 1 / 1.1, 0.1 / 1.1
    expected = 1 - (wa * lev + wb * ham) / 8
    assert normalized_similarity("medicine", "medcine", FIXTURE_CFG) == pytest.approx(expected)
    assert expected > 0.7
    # ... the default weights are Hamming-dominated and do not
    wa, wb = 0.1 / 1.1, 1 / 1.1
    expected = 1 - (wa * lev + wb * ham) / 8
    assert normalized_similarity("medicine", "medcine", DEFAULT_CFG) == pytest.approx(expected)
    assert expected < 0.7


def test_config_validation():
    with pytest.raises(ValueError):
        MatchConfig(delta=1.5)
    with pytest.raises(ValueError):
        MatchConfig(alpha=0.0, beta=0.0)
    with pytest.raises(ValueError):
        MatchConfig(alpha=float("nan"))


def test_best_match_examples():
    cardiology = Entity("cardiology", EntityType.Department)
    assert best_match("cardiology", [cardiology], DEFAULT_CFG) == cardiology
    cands = [Entity("angina", EntityType.Disease), Entity("arrhythmia", EntityType.Disease)]
    assert best_match("anginaa", cands, DEFAULT_CFG) == argmin_oracle("anginaa", cands, 0.1, -1)
    assert best_match("angina", cands, MatchConfig(1, 0)).name == "angina"
    with pytest.raises(EmptyCandidateSet):
        best_match("x", [], DEFAULT_CFG)


def test_default_weights_can_reject_exact_match():
    cands = [Entity("angina", EntityType.Disease), Entity("arrhythmia", EntityType.Disease)]
    # Lev 8, Ham 9: 0.8 - 9 beats 0.0
    assert best_match("angina", cands, DEFAULT_CFG).name == "arrhythmia"


def test_tie_prefers_disease_over_symptom():
    cands = [Entity("flu", EntityType.Symptom), Entity("flu", EntityType.Disease)]
    assert best_match("flu", cands, FIXTURE_CFG).etype is EntityType.Disease


# ------------------------------------------------------------------ properties


@settings(max_examples=300, deadline=None)
@given(texts, texts)
def test_symmetry_identity(u, v):
    assert levenshtein(u, v) == levenshtein(v, u)
    assert hamming_ext(u, v) == hamming_ext(v, u)
    assert (levenshtein(u, v) == 0) == (u == v)
    assert (hamming_ext(u, v) == 0) == (u == v)
    assert levenshtein(u, v) <= hamming_ext(u, v)


@settings(max_examples=300, deadline=None)
@given(texts, texts, texts)
def test_triangle(u, v, w):
    assert levenshtein(u, w) <= levenshtein(u, v) + levenshtein(v, w)


@settings(max_examples=200, deadline=None)
@given(texts, texts, st.floats(0.01, 5), st.floats(0, 5))
def test_positive_weights_nonnegative(u, v, a, b):
    c = MatchConfig(a, b)
    d = combined_dist(u, v, c)
    assert d >= 0
    assert (d == 0) == (u == v)


@settings(max_examples=200, deadline=None)
@given(texts, texts, st.floats(-3, 3), st.floats(-3, 3))
def test_similarity_range(u, v, a, b):
    if (u == "" and v == "") or (a == 0 and b == 0):
        return
    s = normalized_similarity(u, v, MatchConfig(a, b))
    assert 0.0 <= s <= 1.0
    assert (s == 1.0) == (u == v)


@settings(max_examples=100, deadline=None)
@given(st.lists(texts.filter(bool), min_size=1, max_size=6, unique=True), st.floats(0.01, 3), st.floats(0, 3))
def test_exact_match_wins_with_positive_weights(names, a, b):
    cands = [Entity(n, EntityType.Disease) for n in names]
    q = names[len(names) // 2]
    assert best_match(q, cands, MatchConfig(a, b)).name == q


def test_best_match_fuzz_against_oracle():
    rng = random.Random(2024)
    alphabet = "abcde"
    configs = [(0.1, -1.0), (1.0, 0.0), (1.0, 0.5), (0.3, 2.0)]
    for case in range(240):
        alpha, beta = configs[case % len(configs)]
        cands = []
        for _ in range(rng.randint(1, 8)):
            name = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
            cands.append(Entity(name, rng.choice([EntityType.Disease, EntityType.Symptom])))
        cands = list(dict.fromkeys(cands))
        query = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 7)))
        assert best_match(query, cands, MatchConfig(alpha, beta)) == argmin_oracle(query, cands, alpha, beta)
