"""Independent brute-force re-implementations used as test oracles.

Nothing here imports the code paths under test beyond plain data types.
"""

import math
from fractions import Fraction

from mka.kg import Entity, EntityType, KnowledgeGraph, RelationType

TREAT = {RelationType.NeedDrug, RelationType.NeedCheck, RelationType.NeedFood, RelationType.NoFood}
ETYPE_RANK = {t: i for i, t in enumerate(EntityType)}


def lev_table(u, v):
    """Full (|u|+1) x (|v|+1) dynamic-programming table; returns the corner."""
    m, n = len(u), len(v)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            sub = d[i - 1][j - 1] + (0 if u[i - 1] == v[j - 1] else 1)
            d[i][j] = min(sub, d[i - 1][j] + 1, d[i][j - 1] + 1)
    return d[m][n]


def hamming_positional(u, v):
    count = 0
    for i in range(max(len(u), len(v))):
        if i >= len(u) or i >= len(v) or u[i] != v[i]:
            count += 1
    return count


def argmin_oracle(query, candidates, alpha, beta):
    scored = []
    for e in candidates:
        d = Fraction(alpha) * lev_table(query, e.name) + Fraction(beta) * hamming_positional(query, e.name)
        scored.append((d, e.name, ETYPE_RANK[e.etype], e))
    scored.sort(key=lambda t: t[:3])
    return scored[0][3]


def subgraph_oracle(base, eps1, eps2):
    """Scan every base fact against the edge patterns; returns a fact set."""
    out = set()
    if eps1 is not None:
        diseases = {f.tail for f in base.facts if f.head == eps1 and f.relation is RelationType.HasDisease}
        for f in base.facts:
            if f.head == eps1 and f.relation is RelationType.HasDisease:
                out.add(f)
            if f.head in diseases and f.relation is RelationType.HasSymptom:
                out.add(f)
    if eps2 is not None:
        if eps2.etype is EntityType.Disease:
            syms = {f.tail for f in base.facts if f.head == eps2 and f.relation is RelationType.HasSymptom}
            for f in base.facts:
                if f.head == eps2 and (f.relation is RelationType.HasSymptom or f.relation in TREAT):
                    out.add(f)
                if f.head in syms and f.relation in TREAT:
                    out.add(f)
        else:
            dis = {f.head for f in base.facts if f.tail == eps2 and f.relation is RelationType.HasSymptom}
            for f in base.facts:
                if f.head in dis and (f.relation is RelationType.HasSymptom or f.relation in TREAT):
                    out.add(f)
                if f.head == eps2 and f.relation in TREAT:
                    out.add(f)
    return out


TOPIC_RULES = {
    "DiseaseTopic": ("type", EntityType.Disease),
    "SymptomTopic": ("type", EntityType.Symptom),
    "DrugTopic": ("type", EntityType.Drug),
    "CheckTopic": ("type", EntityType.Check),
    "RecommendedFoodTopic": ("rel", RelationType.NeedFood),
    "NotRecommendedFoodTopic": ("rel", RelationType.NoFood),
}
TOPIC_ORDER = list(TOPIC_RULES)


def extract_oracle(sub: KnowledgeGraph, topic_labels, eps1, eps2):
    anchor_names = [e.name for e in (eps1, eps2) if e is not None]
    out = []
    for label in sorted(set(topic_labels), key=TOPIC_ORDER.index):
        kind, what = TOPIC_RULES[label]
        if kind == "type":
            names = {e.name for e in sub.entities if e.etype is what and not (
                label in ("DiseaseTopic", "SymptomTopic") and e == eps2)}
            # entities of one type share names only once; keep name order
            picked = sorted(names)
        else:
            picked = sorted({f.tail.name for f in sub.facts if f.relation is what})
        for n in picked:
            if n not in anchor_names and n not in out:
                out.append(n)
    return anchor_names, out


# ---------------------------------------------------------------- metrics


def grams(seq, n):
    out = {}
    for i in range(len(seq) - n + 1):
        g = tuple(seq[i : i + n])
        out[g] = out.get(g, 0) + 1
    return out


def bleu_oracle(cand, ref, n):
    precisions = []
    for m in range(1, n + 1):
        cg, rg = grams(cand, m), grams(ref, m)
        total = sum(cg.values())
        hit = 0
        for g, c in cg.items():
            hit += min(c, rg.get(g, 0))
        if hit == 0:
            precisions.append(1 / (total + 1))
        else:
            precisions.append(hit / total)
    prod = 1.0
    for p in precisions:
        prod *= p
    bp = 1.0 if len(cand) >= len(ref) else math.exp(1 - len(ref) / len(cand))
    return bp * prod ** (1 / n)


def nist_oracle(cands, refs, n):
    table = {}
    for r in refs:
        for m in range(1, n + 1):
            for g, c in grams(r, m).items():
                table[g] = table.get(g, 0) + c
    n_ref_words = sum(len(r) for r in refs)
    total = 0.0
    for m in range(1, n + 1):
        num, den = 0.0, 0
        for c, r in zip(cands, refs):
            cg, rg = grams(c, m), grams(r, m)
            den += sum(cg.values())
            for g, k in cg.items():
                if g in rg:
                    parent = table[g[:-1]] if m > 1 else n_ref_words
                    num += min(k, rg[g]) * math.log(parent / table[g], 2)
        if den:
            total += num / den
    lc = sum(len(c) for c in cands)
    if lc == 0 or n_ref_words == 0:
        return 0.0
    x = lc / n_ref_words
    if x >= 1:
        return total
    beta = -math.log(2) / (math.log(3 / 2) ** 2)
    return total * math.exp(beta * math.log(x) ** 2)


def meteor_oracle(cand, ref):
    free = list(range(len(ref)))
    pairs = []
    for i, t in enumerate(cand):
        js = [j for j in free if ref[j] == t]
        if js:
            free.remove(js[0])
            pairs.append((i, js[0]))
    m = len(pairs)
    if m == 0:
        return 0.0
    chunks = sum(1 for k in range(m) if k == 0 or pairs[k][0] - pairs[k - 1][0] != 1 or pairs[k][1] - pairs[k - 1][1] != 1)
    P, R = m / len(cand), m / len(ref)
    return (10 * P * R / (R + 9 * P)) * (1 - 0.5 * (chunks / m) ** 3)


def entropy_oracle(responses, n):
    freq = {}
    for r in responses:
        for g, c in grams(r, n).items():
            freq[g] = freq.get(g, 0) + c
    tot = sum(freq.values())
    return -sum((c / tot) * math.log(c / tot) for c in freq.values())


def dist_oracle(responses, n):
    allg = []
    for r in responses:
        allg += [tuple(r[i : i + n]) for i in range(len(r) - n + 1)]
    return len(set(allg)) / len(allg)


def ngram_frequency(responses, n):
    freq = {}
    for r in responses:
        for g, c in grams(r, n).items():
            freq[g] = freq.get(g, 0) + c
    return freq
