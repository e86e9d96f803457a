"""Pairwise transformer relevance baseline for premise selection: fine-tunes
a pre-trained bidirectional encoder with a linear head to score (statement,
candidate premise) pairs; scores feed the core evaluator."""

__version__ = "0.1.0"

from .data import (
    CorpusEntry,
    PairExample,
    read_corpus,
    read_pair_file,
    read_score_file,
    scoring_pool,
    write_pair_file,
    write_score_file,
)
from .encoder import EncoderNotCachedError, build_tiny_encoder, load_classifier
from .score import score_pairs
from .train import FineTuneConfig, FineTuneResult, fine_tune

__all__ = [
    "CorpusEntry",
    "EncoderNotCachedError",
    "FineTuneConfig",
    "FineTuneResult",
    "PairExample",
    "build_tiny_encoder",
    "fine_tune",
    "load_classifier",
    "read_corpus",
    "read_pair_file",
    "read_score_file",
    "score_pairs",
    "scoring_pool",
    "write_pair_file",
    "write_score_file",
]
