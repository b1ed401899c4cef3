"""End-to-end experiment runner and single-stage inspection helpers."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Optional

from .corpus import Conversation, PipelineConfig, load_corpus, split_dataset
from .generation import (
    Generator,
    run_conversation_traced,
    save_baseline,
    train_retrieval,
    train_trigram,
)
from .kg import KnowledgeGraph, dump_graph, load_graph_file
from .metrics import MetricReport, evaluate_corpus
from .pipeline import (
    KeyPhraseSets,
    MedicalKnowledgeInfoTuple,
    PatientSelfReport,
    detect_topics,
    extract_knowledge,
    generate_subgraph,
    load_kps_file,
)
from .textmatch import MatchConfig
from .tokens import ModelInput, SegmentKind, build_model_input, detokenize, tokenize

GENERATORS = ("retrieval", "trigram")


def bundled(name: str) -> Path:
    """Path of a file shipped in ``mka/data`` (toy_kg.tsv, toy_corpus.jsonl, kps.json, ...)."""
    return Path(str(resources.files("mka") / "data" / name))


def train_generator(kind: str, train: list[Conversation], base: KnowledgeGraph, kps: KeyPhraseSets,
                    cfg: PipelineConfig, use_knowledge: bool = True) -> Generator:
    if kind == "retrieval":
        return train_retrieval(train, cfg.smoothing, cfg.separator)
    if kind == "trigram":
        # Teacher forcing: the true previous response is the context during training.
        pairs = []
        use_knowledge = use_knowledge and bool(base.entities)
        for conv in train:
            if use_knowledge:
                sub, anchors = generate_subgraph(conv.self_report, base, cfg.match)
            prev = ""
            for turn in conv.turns:
                mki = MedicalKnowledgeInfoTuple()
                if use_knowledge:
                    mki = extract_knowledge(sub, detect_topics(turn.patient, kps, cfg.match), anchors)
                x = build_model_input(mki, prev, turn.patient, cfg.separator)
                pairs.append((x.flat, tokenize(turn.doctor)))
                prev = turn.doctor
        return train_trigram(pairs, cfg.smoothing)
    raise ValueError(f"unknown generator kind {kind!r}; choose from {', '.join(GENERATORS)}")


def injected_tokens(x: ModelInput) -> tuple[str, ...]:
    return x.segment(SegmentKind.KnowledgeUnseen) + x.segment(SegmentKind.AnchorsSeen)


def run_experiment(
    kg_path,
    corpus_path,
    kps_path,
    cfg: PipelineConfig = PipelineConfig(),
    generator_kind: str = "retrieval",
    out_dir=None,
    *,
    use_knowledge: bool = True,
    feed_ground_truth: bool = False,
) -> MetricReport:
    """Build the graph, split the corpus, train on train, generate on test, score.

    When ``out_dir`` is given it receives ``report.txt``, ``trace.jsonl``
    (one record per test turn), ``prepared.txt``, ``responses.txt`` and the
    trained ``baseline.txt``.
    """
    if generator_kind not in GENERATORS:
        raise ValueError(f"unknown generator kind {generator_kind!r}; choose from {', '.join(GENERATORS)}")
    base = load_graph_file(kg_path)
    convs = load_corpus(corpus_path)
    kps = load_kps_file(kps_path)
    train, _val, test = split_dataset(convs, cfg)
    g = train_generator(generator_kind, train, base, kps, cfg, use_knowledge)

    trace, inputs, outputs, refs = [], [], [], []
    for conv in test:
        run = run_conversation_traced(
            conv, base, kps, g, cfg.match,
            sep=cfg.separator, max_len=cfg.max_len,
            use_knowledge=use_knowledge, feed_ground_truth=feed_ground_truth,
        )
        for t in run.turns:
            inputs.append(t.model_input)
            outputs.append(t.output)
            refs.append(t.reference)
            trace.append({
                "conversation": conv.id,
                "turn": t.turn,
                "subgraph_entities": len(run.subgraph.entities),
                "subgraph_facts": len(run.subgraph.facts),
                "anchors": t.mki.anchors.names(),
                "topics": [q.value for q in t.topics],
                "knowledge": list(t.mki.knowledge),
                "input": t.model_input.line(),
                "output": detokenize(t.output),
                "reference": detokenize(t.reference),
            })

    report = evaluate_corpus(outputs, refs, inputs, g)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report.write(out / "report.txt")
        with open(out / "trace.jsonl", "w", encoding="utf-8") as fh:
            for rec in trace:
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        (out / "prepared.txt").write_text("".join(x.line() + "\n" for x in inputs), encoding="utf-8")
        (out / "responses.txt").write_text("".join(detokenize(o) + "\n" for o in outputs), encoding="utf-8")
        save_baseline(g, out / "baseline.txt")
    return report


# --------------------------------------------------------------------------
# inspection


def inspect_subgraph(base: KnowledgeGraph, psr: PatientSelfReport, c: MatchConfig) -> str:
    sub, anchors = generate_subgraph(psr, base, c)
    lines = [
        f"anchors: {', '.join(str(e) for e in anchors.present()) or '(none)'}",
        f"entities: {len(sub.entities)}  facts: {len(sub.facts)}",
    ]
    return "\n".join(lines) + "\n" + dump_graph(sub)


def inspect_topics(question: str, kps: KeyPhraseSets, c: MatchConfig) -> str:
    topics = detect_topics(question, kps, c)
    return " ".join(t.value for t in topics) + "\n"


def inspect_extract(base, psr, kps, question, c) -> str:
    sub, anchors = generate_subgraph(psr, base, c)
    mki = extract_knowledge(sub, detect_topics(question, kps, c), anchors)
    return (
        f"anchors: {', '.join(str(e) for e in anchors.present()) or '(none)'}\n"
        f"knowledge: {', '.join(mki.knowledge)}\n"
    )


def inspect_prepare(base, psr, kps, question, prev_dr: str = "", cfg: Optional[PipelineConfig] = None) -> str:
    cfg = cfg or PipelineConfig()
    sub, anchors = generate_subgraph(psr, base, cfg.match)
    mki = extract_knowledge(sub, detect_topics(question, kps, cfg.match), anchors)
    return build_model_input(mki, prev_dr, question, cfg.separator).line() + "\n"
