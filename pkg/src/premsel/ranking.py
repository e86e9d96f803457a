"""Cosine ranking of candidate entries against a query vector.

Scores are cosine similarities; ranking is descending score with ties broken
by ascending candidate id, so orderings never depend on input order or on
any positive rescaling of the vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class RankedList:
    query_id: str
    items: tuple[tuple[str, float], ...]    # (candidate id, score), best first

    def ids(self) -> list[str]:
        return [c for c, _ in self.items]


def _normalize_dense(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    return np.divide(rows, norms, out=np.zeros_like(rows), where=norms > 0)


def _normalize_sparse(rows: sp.csr_matrix) -> sp.csr_matrix:
    norms = np.sqrt(np.asarray(rows.multiply(rows).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return sp.diags(scale) @ rows


def cosine_scores(query_rows, candidate_rows) -> np.ndarray:
    """Pairwise cosine matrix (n_queries, n_candidates); zero-norm vectors
    score 0 against everything."""
    if sp.issparse(query_rows):
        q = _normalize_sparse(query_rows.tocsr())
        c = _normalize_sparse(candidate_rows.tocsr())
        return np.asarray((q @ c.T).todense())
    q = _normalize_dense(np.atleast_2d(np.asarray(query_rows, dtype=np.float64)))
    c = _normalize_dense(np.atleast_2d(np.asarray(candidate_rows, dtype=np.float64)))
    return q @ c.T


def order_by_score(candidate_ids: Sequence[str], scores: np.ndarray) -> list[int]:
    """Indices sorted by descending score, ascending id on ties.

    ``candidate_ids`` need not be pre-sorted; ties resolve by id, never by
    input position.
    """
    id_rank = np.argsort(np.argsort(candidate_ids, kind="stable"), kind="stable")
    return list(np.lexsort((id_rank, -scores)))


def rank(
    model,
    candidate_ids: Sequence[str],
    query_id: str | None = None,
    query_text_tokens: Sequence[str] | None = None,
    infer_seed: int = 0,
) -> RankedList:
    """Rank candidates for an in-corpus query (by id) or an out-of-corpus
    token list (TF-IDF transform / PV-DBOW inference)."""
    if (query_id is None) == (query_text_tokens is None):
        raise ValueError("provide exactly one of query_id or query_text_tokens")
    if not candidate_ids:
        raise ValueError("candidate set is empty")
    for cid in candidate_ids:
        if not model.has_doc(cid):
            raise KeyError(f"unknown candidate id: {cid!r}")

    if query_id is not None:
        query_row = model.vector(query_id)
        label = query_id
    elif model.method == "tfidf":
        query_row = model.transform(query_text_tokens)
        label = ""
    else:
        query_row = model.infer_vector(query_text_tokens, seed=infer_seed)
        label = ""

    pool = sorted({c for c in candidate_ids if c != query_id})
    if model.method == "tfidf":
        candidate_rows = model.rows(pool)
    else:
        candidate_rows = model.doc_vectors[[model.row_index(c) for c in pool]]
    scores = cosine_scores(query_row, candidate_rows)[0]
    order = order_by_score(pool, scores)
    return RankedList(label, tuple((pool[i], float(scores[i])) for i in order))
