"""Knowledge-assisted preprocessing and evaluation for medical dialogue generation."""

from .errors import MKAError
from .kg import (
    Entity,
    EntityType,
    FactTuple,
    KnowledgeGraph,
    RelationType,
    entities_of_type,
    load_graph,
    load_graph_file,
    neighbors,
    union,
)
from .textmatch import (
    MatchConfig,
    best_match,
    combined_dist,
    hamming_ext,
    levenshtein,
    normalized_similarity,
)
from .pipeline import (
    Anchors,
    KeyPhraseSets,
    MedicalKnowledgeInfoTuple,
    PatientSelfReport,
    Topic,
    detect_topics,
    extract_knowledge,
    generate_subgraph,
)
from .tokens import ModelInput, SegmentKind, build_model_input, tokenize
from .corpus import Conversation, PipelineConfig, Turn, split_dataset
from .generation import (
    RetrievalBaseline,
    TrigramBaseline,
    UniformGenerator,
    run_conversation,
    sequence_log_likelihood,
    train_retrieval,
    train_trigram,
)
from .metrics import (
    MetricReport,
    bleu_n,
    dist_n,
    entropy_n,
    evaluate_corpus,
    meteor,
    nist_n,
    perplexity,
)
from .experiment import bundled, run_experiment

__version__ = "0.1.0"
