"""Pairwise training-data export for relevance classifiers.

Positives are all (query, gold premise) pairs; negatives are seeded uniform
draws from the non-premise candidates, a fixed ratio per positive.  The
query set is split train/dev at the query level so no query leaks across
splits.  Statement text is emitted verbatim apart from whitespace
flattening, which the tab-separated format requires.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Entry
from .evaluation import EvaluationConfig, make_queries
from .graph import PremiseGraph


@dataclass(frozen=True)
class PairExample:
    query_id: str
    candidate_id: str
    text_a: str
    text_b: str
    label: int      # 1 = relevant (candidate is a gold premise), 0 = irrelevant


def _flat(text: str) -> str:
    return " ".join(text.split())


def export_pairs(
    corpus: Sequence[Entry],
    graph: PremiseGraph,
    hop_k: int = 1,
    negative_ratio: int = 4,
    dev_fraction: float = 0.1,
    seed: int = 0,
) -> tuple[list[PairExample], list[PairExample]]:
    """(train, dev) pair lists; deterministic given the seed."""
    if negative_ratio < 1:
        raise ValueError(f"negative_ratio must be >= 1, got {negative_ratio}")
    if not 0 <= dev_fraction < 1:
        raise ValueError(f"dev_fraction must be in [0, 1), got {dev_fraction}")

    config = EvaluationConfig(method="tfidf", hop_k=hop_k)
    queries, _ = make_queries(corpus, graph, config)
    text_of = {e.id: _flat(e.statement_text) for e in corpus}
    all_ids = np.array(sorted(text_of), dtype=object)

    rng = np.random.default_rng(seed)
    examples_by_query: dict[str, list[PairExample]] = {}
    for q in queries:     # make_queries returns queries sorted by id
        gold = sorted(q.gold)
        blocked = set(gold) | {q.query_id}
        negatives_pool = np.array([c for c in all_ids if c not in blocked], dtype=object)
        n_neg = min(negative_ratio * len(gold), len(negatives_pool))
        negatives = rng.choice(negatives_pool, size=n_neg, replace=False) if n_neg else []
        rows = [
            PairExample(q.query_id, g, _flat(q.statement_text), text_of[g], 1) for g in gold
        ] + [
            PairExample(q.query_id, c, _flat(q.statement_text), text_of[c], 0)
            for c in sorted(negatives)
        ]
        examples_by_query[q.query_id] = rows

    query_ids = np.array(sorted(examples_by_query), dtype=object)
    rng.shuffle(query_ids)
    n_dev = int(round(dev_fraction * len(query_ids)))
    dev_ids = set(query_ids[:n_dev])
    train = [ex for qid in sorted(examples_by_query) if qid not in dev_ids
             for ex in examples_by_query[qid]]
    dev = [ex for qid in sorted(dev_ids) for ex in examples_by_query[qid]]
    return train, dev


def write_pair_file(examples: Sequence[PairExample], path: str | Path) -> Path:
    """Tab-separated (query_id, candidate_id, label, text_a, text_b)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_NONE)
        for ex in examples:
            writer.writerow([ex.query_id, ex.candidate_id, ex.label, ex.text_a, ex.text_b])
    return path


def read_pair_file(path: str | Path) -> list[PairExample]:
    examples = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE):
            if not row:
                continue
            if len(row) != 5:
                raise ValueError(f"{path}: expected 5 tab-separated fields, got {len(row)}")
            qid, cid, label, text_a, text_b = row
            examples.append(PairExample(qid, cid, text_a, text_b, int(label)))
    return examples
