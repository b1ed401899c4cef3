"""
End-to-end experiment and ablation
==================================

Train on the toy corpus, generate on the held-out conversations and score
the responses, once with knowledge injection and once without.
The same run is available from the shell as ``mka run --out-dir DIR``.
"""

import tempfile
from pathlib import Path

from mka.corpus import PipelineConfig
from mka.experiment import bundled, run_experiment

paths = bundled("toy_kg.tsv"), bundled("toy_corpus.jsonl"), bundled("kps.json")
out = Path(tempfile.mkdtemp())

for use_knowledge in (True, False):
    report = run_experiment(*paths, PipelineConfig(), "trigram", out / str(use_knowledge),
                            use_knowledge=use_knowledge)
    print("with knowledge" if use_knowledge else "without knowledge")
    print(report.to_text())

print((out / "True" / "trace.jsonl").read_text(encoding="utf-8").splitlines()[0])
