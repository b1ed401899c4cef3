"""Command-line entry point: ``mka {run,split,ingest,inspect}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import PipelineConfig, load_config, load_corpus, split_dataset, write_corpus
from .errors import MKAError
from .experiment import (
    GENERATORS,
    bundled,
    inspect_extract,
    inspect_prepare,
    inspect_subgraph,
    inspect_topics,
    run_experiment,
)
from .kg import load_graph_file
from .pipeline import PatientSelfReport, load_kps_file


def _config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    return cfg.with_seed(args.seed)


def _add_common(p, *names):
    if "kg" in names:
        p.add_argument("--kg", default=str(bundled("toy_kg.tsv")), help="knowledge graph TSV file")
    if "corpus" in names:
        p.add_argument("--corpus", default=str(bundled("toy_corpus.jsonl")), help="conversation JSONL file")
    if "kps" in names:
        p.add_argument("--kps", default=str(bundled("kps.json")), help="key phrase sets JSON file")
    if "config" in names:
        p.add_argument("--config", help="pipeline configuration JSON file")
        p.add_argument("--seed", type=int, help="override the configured random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mka", description="Knowledge-assisted medical dialogue toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an end-to-end experiment and write report + traces")
    _add_common(p, "kg", "corpus", "kps", "config")
    p.add_argument("--generator", choices=GENERATORS, default="retrieval")
    p.add_argument("--no-knowledge", action="store_true", help="ablation: drop knowledge and anchor segments")
    p.add_argument("--feed-ground-truth", action="store_true",
                   help="feed the true previous doctor response instead of the generated one")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("split", help="split a corpus into train/validation/test JSONL files")
    _add_common(p, "corpus", "config")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("ingest", help="load a knowledge graph and print entity/fact counts")
    _add_common(p, "kg")

    p = sub.add_parser("inspect", help="run a single pipeline stage and print its output")
    p.add_argument("stage", choices=("subgraph", "topics", "extract", "prepare"))
    _add_common(p, "kg", "kps", "config")
    p.add_argument("--department")
    p.add_argument("--disease-symptom")
    p.add_argument("--question", default="")
    p.add_argument("--prev-dr", default="")
    return parser


def _run(args) -> None:
    report = run_experiment(
        args.kg, args.corpus, args.kps, _config(args), args.generator, args.out_dir,
        use_knowledge=not args.no_knowledge, feed_ground_truth=args.feed_ground_truth,
    )
    sys.stdout.write(report.to_text())


def _split(args) -> None:
    parts = split_dataset(load_corpus(args.corpus), _config(args))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, part in zip(("train", "validation", "test"), parts):
        write_corpus(out / f"{name}.jsonl", part)
        print(f"{name}\t{len(part)}")


def _ingest(args) -> None:
    g = load_graph_file(args.kg)
    stats = g.stats()
    print(f"entities\t{len(g.entities)}")
    for k, v in stats["entities"].items():
        print(f"  {k}\t{v}")
    print(f"facts\t{len(g.facts)}")
    for k, v in stats["facts"].items():
        print(f"  {k}\t{v}")


def _inspect(args) -> None:
    cfg = _config(args)
    psr = PatientSelfReport(args.department, args.disease_symptom)
    if args.stage == "topics":
        sys.stdout.write(inspect_topics(args.question, load_kps_file(args.kps), cfg.match))
        return
    base = load_graph_file(args.kg)
    if args.stage == "subgraph":
        sys.stdout.write(inspect_subgraph(base, psr, cfg.match))
    elif args.stage == "extract":
        sys.stdout.write(inspect_extract(base, psr, load_kps_file(args.kps), args.question, cfg.match))
    else:
        sys.stdout.write(inspect_prepare(base, psr, load_kps_file(args.kps), args.question, args.prev_dr, cfg))


COMMANDS = {"run": _run, "split": _split, "ingest": _ingest, "inspect": _inspect}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (MKAError, OSError, ValueError, json.JSONDecodeError) as exc:
        msg = " ".join(str(exc).split())
        print(f"mka: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
