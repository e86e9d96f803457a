"""Query construction and Mean Average Precision for premise selection.

A query is any theorem, lemma or corollary with a nonempty gold set; the
gold set is its k-hop transitive premise set.  Every other corpus entry is a
candidate (optionally restricted to one harmonized category), and candidates
are ranked by cosine similarity.  MAP is the mean over evaluated queries of
average precision, where average precision averages precision at each gold
item's rank and divides by the gold size.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Entry, EntryKind
from .graph import PremiseGraph, k_hop_premises
from .ranking import cosine_scores
from .tokenizer import Strategy

QUERY_KINDS = (EntryKind.THEOREM, EntryKind.LEMMA, EntryKind.COROLLARY)


@dataclass(frozen=True)
class EvaluationConfig:
    method: str                             # "tfidf" | "pvdbow" | "external-scores"
    strategy: Strategy | None = None
    hop_k: int = 1
    category_filter: str | None = None
    candidate_pool: str = "all"             # "all" | "category"
    seed: int = 0

    def __post_init__(self):
        if self.hop_k < 1:
            raise ValueError(f"hop_k must be >= 1, got {self.hop_k}")
        if self.method not in ("tfidf", "pvdbow", "external-scores"):
            raise ValueError(f"unknown evaluation method {self.method!r}")
        if self.candidate_pool not in ("all", "category"):
            raise ValueError(f"unknown candidate pool {self.candidate_pool!r}")
        if self.candidate_pool == "category" and self.category_filter is None:
            raise ValueError("candidate_pool='category' requires a category_filter")

    def to_obj(self) -> dict:
        return {
            "method": self.method,
            "strategy": self.strategy.value if self.strategy else None,
            "hop_k": self.hop_k,
            "category_filter": self.category_filter,
            "candidate_pool": self.candidate_pool,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Query:
    query_id: str
    statement_text: str
    gold: frozenset[str]


@dataclass
class EvaluationReport:
    config: EvaluationConfig
    per_query: dict[str, float]
    map_score: float
    num_queries: int
    skipped_queries: list[str]
    # queries whose every token is out of vocabulary: ranked by id, score 0
    zero_vector_queries: list[str] = field(default_factory=list)
    missing_score_pairs: int = 0
    timing_seconds: float | None = None

    def to_obj(self) -> dict:
        return {
            "config": self.config.to_obj(),
            "map": self.map_score,
            "num_queries": self.num_queries,
            "per_query": {k: self.per_query[k] for k in sorted(self.per_query)},
            "skipped_queries": sorted(self.skipped_queries),
            "zero_vector_queries": sorted(self.zero_vector_queries),
            "missing_score_pairs": self.missing_score_pairs,
            "timing_seconds": self.timing_seconds,
        }


def candidate_pool_ids(corpus: Sequence[Entry], config: EvaluationConfig) -> list[str]:
    """Sorted candidate ids; the query itself is removed at scoring time."""
    if config.candidate_pool == "category":
        pool = [e.id for e in corpus if config.category_filter in e.categories]
    else:
        pool = [e.id for e in corpus]
    return sorted(pool)


def make_queries(
    corpus: Sequence[Entry], graph: PremiseGraph, config: EvaluationConfig
) -> tuple[list[Query], list[str]]:
    """Eligible queries plus the ids skipped for an empty effective gold set.

    Gold sets are k-hop premise sets intersected with the candidate pool, so
    the average-precision precondition (gold inside the pool) always holds.
    """
    pool = set(candidate_pool_ids(corpus, config))
    queries: list[Query] = []
    skipped: list[str] = []
    for e in sorted(corpus, key=lambda e: e.id):
        if e.kind not in QUERY_KINDS:
            continue
        if config.category_filter is not None and config.category_filter not in e.categories:
            continue
        gold = k_hop_premises(graph, e.id, config.hop_k) & (pool - {e.id})
        if gold:
            queries.append(Query(e.id, e.statement_text, frozenset(gold)))
        else:
            skipped.append(e.id)
    if not queries:
        raise ValueError(
            "no queries left after filtering "
            f"(category={config.category_filter!r}, hop_k={config.hop_k})"
        )
    return queries, skipped


def average_precision(ranked_ids: Sequence[str], gold: Iterable[str]) -> float:
    """Average of precision at each gold item's rank, divided by |gold|;
    gold items missing from the ranking contribute zero."""
    gold = set(gold)
    if not gold:
        raise ValueError("average precision is undefined for an empty gold set")
    hits = 0
    total = 0.0
    for rank, cid in enumerate(ranked_ids, start=1):
        if cid in gold:
            hits += 1
            total += hits / rank
    return total / len(gold)


def _avep_from_ranks(gold_ranks: np.ndarray, gold_size: int) -> float:
    ranks = np.sort(gold_ranks)
    return float(((np.arange(ranks.size) + 1) / ranks).sum() / gold_size)


def read_score_file(path: str | Path) -> dict[str, dict[str, float]]:
    """Tab-separated (query_id, candidate_id, score) records."""
    scores: dict[str, dict[str, float]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh, delimiter="\t"):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}: expected 3 tab-separated fields, got {len(row)}")
            qid, cid, score = row
            value = float(score)
            if not np.isfinite(value):
                raise ValueError(f"{path}: non-finite score for pair ({qid}, {cid})")
            scores.setdefault(qid, {})[cid] = value
    return scores


def _model_scores(model, query_ids, pool, block=256):
    """Yield (query_id, score_row) with rows aligned to the sorted pool."""
    if model.method == "tfidf":
        pool_rows = model.rows(pool)
        get_rows = model.rows
    else:
        pool_rows = model.doc_vectors[[model.row_index(c) for c in pool]]
        get_rows = lambda ids: model.doc_vectors[[model.row_index(q) for q in ids]]
    for start in range(0, len(query_ids), block):
        chunk = query_ids[start : start + block]
        scores = cosine_scores(get_rows(chunk), pool_rows)
        for i, qid in enumerate(chunk):
            yield qid, scores[i]


def evaluate(
    corpus: Sequence[Entry],
    graph: PremiseGraph,
    config: EvaluationConfig,
    model=None,
    external_scores: Mapping[str, Mapping[str, float]] | None = None,
    query_ids: Iterable[str] | None = None,
) -> EvaluationReport:
    """Rank the candidate pool for every query and average the precisions.

    ``query_ids`` restricts evaluation to a subset (e.g. to compare methods
    on identical queries).  With ``method='external-scores'`` the ranking
    comes from a caller-supplied score table and only queries present in the
    table are evaluated; unscored (query, candidate) pairs count as 0.
    """
    started = time.perf_counter()
    if config.method in ("tfidf", "pvdbow"):
        if model is None:
            raise ValueError(f"method {config.method!r} requires a trained model")
        if model.method != config.method:
            raise ValueError(f"config method {config.method!r} does not match model method {model.method!r}")
        if config.strategy is not None and model.strategy != config.strategy:
            raise ValueError(
                f"tokenization strategy mismatch: config requests {config.strategy.value!r} "
                f"but the model was trained with {model.strategy.value!r}"
            )
    elif external_scores is None:
        raise ValueError("method 'external-scores' requires a score table")

    queries, skipped = make_queries(corpus, graph, config)
    wanted = set(query_ids) if query_ids is not None else None
    if wanted is not None:
        queries = [q for q in queries if q.query_id in wanted]
    if config.method == "external-scores":
        queries = [q for q in queries if q.query_id in external_scores]
    if not queries:
        raise ValueError("no queries to evaluate after applying filters")

    pool = candidate_pool_ids(corpus, config)
    pool_index = {cid: i for i, cid in enumerate(pool)}
    per_query: dict[str, float] = {}
    missing_pairs = 0

    zero_vector_queries: list[str] = []
    if config.method in ("tfidf", "pvdbow"):
        for q in queries:
            row = model.vector(q.query_id)
            norm = np.sqrt(row.multiply(row).sum()) if config.method == "tfidf" else np.linalg.norm(row)
            if norm == 0:
                zero_vector_queries.append(q.query_id)

    if config.method == "external-scores":
        score_iter = (
            (q.query_id, _external_row(q.query_id, external_scores[q.query_id], pool, pool_index))
            for q in queries
        )
    else:
        score_iter = _model_scores(model, [q.query_id for q in queries], pool)

    gold_by_query = {q.query_id: q.gold for q in queries}
    for qid, row in score_iter:
        if config.method == "external-scores":
            row, missing = row
            missing_pairs += missing
        scores = row.copy()
        self_idx = pool_index.get(qid)
        if self_idx is not None:
            scores[self_idx] = -np.inf
        order = np.argsort(-scores, kind="stable")    # pool is id-sorted: stable = ties by id
        rank_of = np.empty(len(pool), dtype=np.int64)
        rank_of[order] = np.arange(1, len(pool) + 1)
        gold_idx = np.array([pool_index[g] for g in gold_by_query[qid]], dtype=np.int64)
        per_query[qid] = _avep_from_ranks(rank_of[gold_idx], gold_idx.size)

    map_score = float(sum(per_query.values()) / len(per_query))
    return EvaluationReport(
        config=config,
        per_query=per_query,
        map_score=map_score,
        num_queries=len(per_query),
        skipped_queries=skipped,
        zero_vector_queries=zero_vector_queries,
        missing_score_pairs=missing_pairs,
        timing_seconds=time.perf_counter() - started,
    )


def _external_row(qid: str, scores: Mapping[str, float], pool, pool_index) -> tuple[np.ndarray, int]:
    row = np.zeros(len(pool))
    missing = 0
    for cid in pool:
        value = scores.get(cid)
        if value is None:
            if cid != qid:      # the self pair is masked out anyway
                missing += 1
        else:
            row[pool_index[cid]] = value
    return row, missing
