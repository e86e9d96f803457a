"""Premise-selection corpus toolkit: wiki parsing, premise graphs, math
tokenization, retrieval baselines and MAP evaluation."""

__version__ = "0.1.0"

from .corpus import (
    Entry,
    EntryKind,
    Proof,
    entry_id,
    load_corpus,
    premise_set,
    save_corpus,
    validate_corpus,
)
from .evaluation import EvaluationConfig, EvaluationReport, average_precision, evaluate, make_queries
from .graph import GraphStats, PremiseGraph, build_graph, compute_stats, k_hop_premises
from .modelio import load_model, save_model
from .pvdbow import PvDbowHyperparams, PvDbowModel, train_pvdbow
from .ranking import RankedList, rank
from .tfidf import TfIdfModel, fit_tfidf
from .tokenizer import Segment, SegmentKind, Strategy, TokenStream, segment, tokenize

__all__ = [
    "Entry",
    "EntryKind",
    "EvaluationConfig",
    "EvaluationReport",
    "GraphStats",
    "PremiseGraph",
    "Proof",
    "PvDbowHyperparams",
    "PvDbowModel",
    "RankedList",
    "Segment",
    "SegmentKind",
    "Strategy",
    "TfIdfModel",
    "TokenStream",
    "average_precision",
    "build_graph",
    "compute_stats",
    "entry_id",
    "evaluate",
    "fit_tfidf",
    "k_hop_premises",
    "load_corpus",
    "load_model",
    "make_queries",
    "premise_set",
    "rank",
    "save_corpus",
    "save_model",
    "segment",
    "tokenize",
    "train_pvdbow",
    "validate_corpus",
]
