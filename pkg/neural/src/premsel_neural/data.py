"""File interfaces shared with the core toolkit.

This package talks to the core toolkit only through its documented files:
the per-kind corpus JSON directory, tab-separated pair files
(query_id, candidate_id, label, text_a, text_b) and tab-separated score
files (query_id, candidate_id, score).  Nothing here imports the core
package.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

CORPUS_FILES = ("definitions.json", "theorems.json", "lemmas.json", "corollaries.json")
PROPOSITION_KINDS = frozenset({"Theorem", "Lemma", "Corollary"})


@dataclass(frozen=True)
class PairExample:
    query_id: str
    candidate_id: str
    text_a: str
    text_b: str
    label: int      # 1 = relevant, 0 = irrelevant


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    kind: str
    statement_text: str


def read_corpus(corpus_dir: str | Path) -> dict[str, CorpusEntry]:
    """Entries from a corpus directory in the documented per-kind schema."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus_dir}")
    entries: dict[str, CorpusEntry] = {}
    for name in CORPUS_FILES:
        path = corpus_dir / name
        if not path.exists():
            continue
        for obj in json.loads(path.read_text(encoding="utf-8")):
            entries[obj["id"]] = CorpusEntry(obj["id"], obj["kind"], obj["statement_text"])
    if not entries:
        raise ValueError(f"no corpus files found in {corpus_dir}")
    return entries


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


def write_pair_file(examples: Iterable[PairExample], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_NONE)
        for ex in examples:
            writer.writerow([ex.query_id, ex.candidate_id, ex.label, ex.text_a, ex.text_b])
    return path


def write_score_file(records: Sequence[tuple[str, str, float]], path: str | Path) -> Path:
    """Tab-separated (query_id, candidate_id, score); scores must be finite."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n", quoting=csv.QUOTE_NONE)
        for qid, cid, score in records:
            if not math.isfinite(score):
                raise ValueError(f"non-finite score for pair ({qid}, {cid})")
            writer.writerow([qid, cid, f"{score:.8f}"])
    return path


def read_score_file(path: str | Path) -> list[tuple[str, str, float]]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE):
            if not row:
                continue
            qid, cid, score = row
            records.append((qid, cid, float(score)))
    return records


def scoring_pool(
    entries: dict[str, CorpusEntry],
    query_ids: Sequence[str],
    candidate_ids: Sequence[str] | None = None,
) -> list[PairExample]:
    """Unlabeled pairs covering each query against the candidate pool
    (every corpus entry except the query itself unless a pool is given)."""
    pool = sorted(candidate_ids) if candidate_ids is not None else sorted(entries)
    pairs = []
    for qid in query_ids:
        if qid not in entries:
            raise KeyError(f"unknown query id: {qid!r}")
        for cid in pool:
            if cid == qid:
                continue
            if cid not in entries:
                raise KeyError(f"unknown candidate id: {cid!r}")
            pairs.append(PairExample(qid, cid, entries[qid].statement_text,
                                     entries[cid].statement_text, 0))
    return pairs
