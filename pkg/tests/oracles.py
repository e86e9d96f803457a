"""Independent reference implementations used to check the library.

Everything here is deliberately naive pure Python (no numpy, no shared code
with the package): set-based BFS, dict-based TF-IDF and cosine, list-walk
average precision.  Tests compare the fast implementations against these.
"""
from __future__ import annotations

import math


def bfs_k_hop(edges: list[tuple[str, str]], start: str, k: int) -> set[str]:
    """Breadth-first enumeration of everything reachable within k hops."""
    succ: dict[str, set[str]] = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    reached: set[str] = set()
    frontier = {start}
    for _ in range(k):
        nxt = set()
        for node in frontier:
            nxt |= succ.get(node, set())
        nxt -= reached | {start}
        if not nxt:
            break
        reached |= nxt
        frontier = nxt
    return reached


def naive_tfidf_vectors(docs: dict[str, list[str]]) -> dict[str, dict[str, float]]:
    """tf * (ln((1+N)/(1+df)) + 1), then L2 normalization, all by hand."""
    n = len(docs)
    df: dict[str, int] = {}
    for tokens in docs.values():
        for tok in set(tokens):
            df[tok] = df.get(tok, 0) + 1
    vectors: dict[str, dict[str, float]] = {}
    for doc_id, tokens in docs.items():
        tf: dict[str, int] = {}
        for tok in tokens:
            tf[tok] = tf.get(tok, 0) + 1
        vec = {
            tok: count * (math.log((1 + n) / (1 + df[tok])) + 1.0)
            for tok, count in tf.items()
        }
        norm = math.sqrt(sum(w * w for w in vec.values()))
        if norm > 0:
            vec = {tok: w / norm for tok, w in vec.items()}
        vectors[doc_id] = vec
    return vectors


def naive_cosine(a: dict[str, float], b: dict[str, float]) -> float:
    dot = sum(w * b.get(tok, 0.0) for tok, w in a.items())
    na = math.sqrt(sum(w * w for w in a.values()))
    nb = math.sqrt(sum(w * w for w in b.values()))
    if na == 0 or nb == 0:
        return 0.0
    return dot / (na * nb)


def naive_rank(
    vectors: dict[str, dict[str, float]], query_id: str, candidate_ids: list[str]
) -> list[str]:
    """Candidates by descending cosine to the query, ties by ascending id."""
    pool = [c for c in candidate_ids if c != query_id]
    scored = [(c, naive_cosine(vectors[query_id], vectors[c])) for c in pool]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return [c for c, _ in scored]


def naive_average_precision(ranked_ids: list[str], gold: set[str]) -> float:
    hits = 0
    total = 0.0
    for position, cid in enumerate(ranked_ids, start=1):
        if cid in gold:
            hits += 1
            total += hits / position
    return total / len(gold)


def naive_map(
    vectors: dict[str, dict[str, float]],
    gold_sets: dict[str, set[str]],
    candidate_ids: list[str],
) -> float:
    """Brute-force MAP: score every (query, candidate) pair one at a time."""
    aveps = []
    for qid in sorted(gold_sets):
        ranked = naive_rank(vectors, qid, candidate_ids)
        aveps.append(naive_average_precision(ranked, gold_sets[qid]))
    return sum(aveps) / len(aveps)
