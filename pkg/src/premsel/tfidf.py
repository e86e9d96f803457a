"""TF-IDF document vectors over token streams.

Weighting is raw term frequency times smoothed inverse document frequency,
idf(t) = ln((1 + N) / (1 + df(t))) + 1, with L2 normalization of every
document vector.  A document containing no vocabulary token keeps the zero
vector and scores 0 against everything.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .tokenizer import Strategy, TokenStream


@dataclass
class TfIdfModel:
    strategy: Strategy
    vocabulary: dict[str, int]
    document_frequencies: np.ndarray    # (V,) raw df counts
    corpus_size: int
    doc_ids: tuple[str, ...]            # ascending
    matrix: sp.csr_matrix               # (N, V) L2-normalized weights
    _row_of: dict[str, int] | None = None

    def __post_init__(self):
        if self._row_of is None:
            self._row_of = {d: i for i, d in enumerate(self.doc_ids)}

    @property
    def method(self) -> str:
        return "tfidf"

    def idf(self) -> np.ndarray:
        return np.log((1.0 + self.corpus_size) / (1.0 + self.document_frequencies)) + 1.0

    def has_doc(self, entry_id: str) -> bool:
        return entry_id in self._row_of

    def row_index(self, entry_id: str) -> int:
        try:
            return self._row_of[entry_id]
        except KeyError:
            raise KeyError(f"no document vector for id {entry_id!r}") from None

    def vector(self, entry_id: str) -> sp.csr_matrix:
        return self.matrix.getrow(self.row_index(entry_id))

    def rows(self, entry_ids: Sequence[str]) -> sp.csr_matrix:
        return self.matrix[[self.row_index(e) for e in entry_ids]]

    def transform(self, tokens: Sequence[str]) -> sp.csr_matrix:
        """Vectorize an out-of-corpus token list with the frozen vocabulary."""
        counts: dict[int, float] = {}
        for tok in tokens:
            idx = self.vocabulary.get(tok)
            if idx is not None:
                counts[idx] = counts.get(idx, 0.0) + 1.0
        if not counts:
            return sp.csr_matrix((1, len(self.vocabulary)))
        idx = np.array(sorted(counts), dtype=np.int64)
        data = np.array([counts[i] for i in idx]) * self.idf()[idx]
        norm = np.linalg.norm(data)
        if norm > 0:
            data = data / norm
        return sp.csr_matrix((data, (np.zeros_like(idx), idx)), shape=(1, len(self.vocabulary)))


def _l2_normalize_rows(matrix: sp.csr_matrix) -> sp.csr_matrix:
    norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return sp.diags(scale) @ matrix


def fit_tfidf(streams: Iterable[TokenStream]) -> TfIdfModel:
    """Fit vocabulary, document frequencies and normalized weight vectors.

    Permutation-invariant over stream order: documents and vocabulary are
    both sorted before index assignment.
    """
    streams = sorted(streams, key=lambda s: s.source_id)
    if not streams or all(not s.tokens for s in streams):
        raise ValueError("cannot fit TF-IDF on an empty corpus")
    strategies = {s.strategy for s in streams}
    if len(strategies) > 1:
        raise ValueError(f"mixed tokenization strategies in corpus: {sorted(s.value for s in strategies)}")
    seen = set()
    for s in streams:
        if s.source_id in seen:
            raise ValueError(f"duplicate document id {s.source_id!r}")
        seen.add(s.source_id)

    vocabulary = {tok: i for i, tok in enumerate(sorted({t for s in streams for t in s.tokens}))}
    n_docs, n_terms = len(streams), len(vocabulary)

    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    df = np.zeros(n_terms, dtype=np.int64)
    for s in streams:
        counts: dict[int, int] = {}
        for tok in s.tokens:
            counts[vocabulary[tok]] = counts.get(vocabulary[tok], 0) + 1
        for idx in sorted(counts):
            indices.append(idx)
            data.append(float(counts[idx]))
            df[idx] += 1
        indptr.append(len(indices))

    tf = sp.csr_matrix((data, indices, indptr), shape=(n_docs, n_terms))
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0
    weights = _l2_normalize_rows(tf @ sp.diags(idf))
    weights.sort_indices()

    return TfIdfModel(
        strategy=next(iter(strategies)),
        vocabulary=vocabulary,
        document_frequencies=df,
        corpus_size=n_docs,
        doc_ids=tuple(s.source_id for s in streams),
        matrix=weights.tocsr(),
    )
