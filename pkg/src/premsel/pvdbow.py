"""Distributed bag-of-words paragraph vectors trained with negative sampling.

Each document owns a dense vector trained to predict the document's own
tokens against noise tokens drawn from the unigram distribution raised to a
smoothing exponent.  Training is plain SGD with a linearly decaying learning
rate; single-worker runs are bit-deterministic given the seed.

Two step implementations share the same math and the same random stream: a
pure-numpy reference (checked against finite differences) and a compiled
kernel used by default when numba is available.  They agree to float
round-off; see the equivalence test.  Noise draws that collide with the
target token are discarded rather than redrawn, following the original
word2vec convention, which keeps randomness consumption fixed per step.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .tokenizer import Strategy, TokenStream

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:     # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


@dataclass(frozen=True)
class PvDbowHyperparams:
    dim: int = 100
    epochs: int = 20
    negative_samples: int = 5
    initial_lr: float = 0.025
    final_lr: float = 0.0001
    min_count: int = 2
    smoothing_exponent: float = 0.75
    seed: int = 0

    def to_obj(self) -> dict:
        return {
            "dim": self.dim,
            "epochs": self.epochs,
            "negative_samples": self.negative_samples,
            "initial_lr": self.initial_lr,
            "final_lr": self.final_lr,
            "min_count": self.min_count,
            "smoothing_exponent": self.smoothing_exponent,
            "seed": self.seed,
        }


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    # log sigma(x) = -log(1 + e^(-x)), stable for large |x|
    return -np.logaddexp(0.0, -x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def negative_sampling_loss(doc_vec: np.ndarray, word_vecs: np.ndarray, labels: np.ndarray) -> float:
    """Logistic loss of one prediction step: the target token carries label 1,
    each noise token label 0."""
    scores = word_vecs @ doc_vec
    signed = np.where(labels > 0, scores, -scores)
    return float(-_log_sigmoid(signed).sum())


def negative_sampling_gradients(
    doc_vec: np.ndarray, word_vecs: np.ndarray, labels: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss plus exact gradients w.r.t. the document vector and the word rows."""
    scores = word_vecs @ doc_vec
    signed = np.where(labels > 0, scores, -scores)
    loss = float(-_log_sigmoid(signed).sum())
    dscores = _sigmoid(scores) - labels
    grad_doc = dscores @ word_vecs
    grad_words = np.outer(dscores, doc_vec)
    return loss, grad_doc, grad_words


def _train_doc_reference(
    doc_vec: np.ndarray,
    word_weights: np.ndarray,
    tokens: np.ndarray,
    noise_cdf: np.ndarray,
    uniforms: np.ndarray,
    lr0: float,
    lr1: float,
    step: int,
    total_steps: int,
) -> None:
    """One pass over a document's tokens with the oracle-checked gradients."""
    for pos in range(tokens.size):
        lr = max(lr1, lr0 + (lr1 - lr0) * (step + pos) / max(total_steps, 1))
        target = tokens[pos]
        negatives = np.searchsorted(noise_cdf, uniforms[pos], side="right")
        negatives = negatives[negatives != target]
        idx = np.concatenate(([target], negatives))
        labels = np.zeros(idx.size)
        labels[0] = 1.0
        _, grad_doc, grad_words = negative_sampling_gradients(doc_vec, word_weights[idx], labels)
        # np.add.at accumulates correctly when noise draws repeat an index
        np.add.at(word_weights, idx, -lr * grad_words)
        doc_vec -= lr * grad_doc


@njit(cache=True)
def _cdf_index(noise_cdf, value):   # pragma: no cover
    """Rightmost-insertion binary search, matching np.searchsorted side='right'."""
    lo = 0
    hi = noise_cdf.size
    while lo < hi:
        mid = (lo + hi) // 2
        if value < noise_cdf[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True)
def _train_doc_kernel(doc_vec, word_weights, tokens, noise_cdf, uniforms,
                      lr0, lr1, step, total_steps):     # pragma: no cover
    dim = doc_vec.shape[0]
    k = uniforms.shape[1]
    idx = np.empty(k + 1, dtype=np.int64)
    g = np.empty(k + 1)
    grad_doc = np.empty(dim)
    for pos in range(tokens.size):
        lr = lr0 + (lr1 - lr0) * (step + pos) / max(total_steps, 1)
        if lr < lr1:
            lr = lr1
        target = tokens[pos]
        idx[0] = target
        count = 1
        for j in range(k):
            neg = _cdf_index(noise_cdf, uniforms[pos, j])
            if neg != target:
                idx[count] = neg
                count += 1
        # pass 1: scores and gradients against the pre-update weights
        for n in range(dim):
            grad_doc[n] = 0.0
        for row in range(count):
            w = idx[row]
            score = 0.0
            for n in range(dim):
                score += word_weights[w, n] * doc_vec[n]
            if score >= 0:
                prob = 1.0 / (1.0 + math.exp(-score))
            else:
                es = math.exp(score)
                prob = es / (1.0 + es)
            label = 1.0 if row == 0 else 0.0
            g[row] = prob - label
            for n in range(dim):
                grad_doc[n] += g[row] * word_weights[w, n]
        # pass 2: apply updates; sequential -= accumulates repeated indices
        for row in range(count):
            w = idx[row]
            for n in range(dim):
                word_weights[w, n] -= lr * g[row] * doc_vec[n]
        for n in range(dim):
            doc_vec[n] -= lr * grad_doc[n]


_EVAL_SEED_SALT = 1013904223


def epoch_objective(
    doc_vectors: np.ndarray,
    word_weights: np.ndarray,
    doc_tokens: Sequence[np.ndarray],
    noise_cdf: np.ndarray,
    negative_samples: int,
    seed: int,
) -> float:
    """Mean negative-sampling loss over every token position, with noise
    tokens drawn from a fixed seeded stream.

    Logged once per epoch; the fixed stream makes consecutive epochs
    comparable, unlike the sampled losses seen during SGD.
    """
    rng = np.random.default_rng([seed, _EVAL_SEED_SALT])
    total = 0.0
    count = 0
    for row, tokens in enumerate(doc_tokens):
        if tokens.size == 0:
            continue
        negatives = np.searchsorted(
            noise_cdf, rng.random((tokens.size, negative_samples)), side="right"
        )
        doc_vec = doc_vectors[row]
        target_scores = word_weights[tokens] @ doc_vec
        negative_scores = (word_weights[negatives.ravel()] @ doc_vec).reshape(negatives.shape)
        keep = negatives != tokens[:, None]
        total += np.logaddexp(0.0, -target_scores).sum()
        total += np.logaddexp(0.0, negative_scores[keep]).sum()
        count += tokens.size
    return total / max(count, 1)


@dataclass
class PvDbowModel:
    strategy: Strategy
    hyperparams: PvDbowHyperparams
    vocabulary: dict[str, int]
    doc_ids: tuple[str, ...]
    doc_vectors: np.ndarray             # (N, dim)
    word_output_weights: np.ndarray     # (V, dim), training artifact kept for inference
    noise_cdf: np.ndarray               # cumulative noise distribution over the vocabulary
    epoch_losses: tuple[float, ...] = ()    # per-epoch fixed-sample objective
    _row_of: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._row_of:
            self._row_of = {d: i for i, d in enumerate(self.doc_ids)}

    @property
    def method(self) -> str:
        return "pvdbow"

    def has_doc(self, entry_id: str) -> bool:
        return entry_id in self._row_of

    def row_index(self, entry_id: str) -> int:
        try:
            return self._row_of[entry_id]
        except KeyError:
            raise KeyError(f"no document vector for id {entry_id!r}") from None

    def vector(self, entry_id: str) -> np.ndarray:
        return self.doc_vectors[self.row_index(entry_id)]

    def infer_vector(self, tokens: Sequence[str], seed: int = 0, epochs: int | None = None) -> np.ndarray:
        """Train a fresh document vector against frozen word weights;
        deterministic given the seed."""
        hp = self.hyperparams
        epochs = hp.epochs if epochs is None else epochs
        token_ids = np.array([self.vocabulary[t] for t in tokens if t in self.vocabulary], dtype=np.int64)
        rng = np.random.default_rng(seed)
        vec = rng.uniform(-0.5, 0.5, hp.dim) / hp.dim
        if token_ids.size == 0:
            return vec
        frozen = self.word_output_weights.copy()
        total = epochs * token_ids.size
        step = 0
        for _ in range(epochs):
            uniforms = rng.random((token_ids.size, hp.negative_samples))
            for pos in range(token_ids.size):
                lr = max(hp.final_lr, hp.initial_lr + (hp.final_lr - hp.initial_lr) * (step + pos) / total)
                target = token_ids[pos]
                negatives = np.searchsorted(self.noise_cdf, uniforms[pos], side="right")
                negatives = negatives[negatives != target]
                idx = np.concatenate(([target], negatives))
                labels = np.zeros(idx.size)
                labels[0] = 1.0
                _, grad_doc, _ = negative_sampling_gradients(vec, frozen[idx], labels)
                vec -= lr * grad_doc
            step += token_ids.size
        return vec


def train_pvdbow(
    streams: Iterable[TokenStream],
    dim: int = 100,
    epochs: int = 20,
    negative_samples: int = 5,
    seed: int = 0,
    hyperparams: PvDbowHyperparams | None = None,
    accelerated: bool | None = None,
) -> PvDbowModel:
    """Fit paragraph vectors for every stream; deterministic given the seed.

    ``accelerated=None`` picks the compiled kernel when numba is importable;
    ``False`` forces the pure-numpy reference path (same math, same random
    stream, equal up to float round-off).
    """
    hp = hyperparams or PvDbowHyperparams(
        dim=dim, epochs=epochs, negative_samples=negative_samples, seed=seed
    )
    if hp.dim <= 0:
        raise ValueError(f"embedding dimension must be positive, got {hp.dim}")
    if accelerated is None:
        accelerated = _HAVE_NUMBA
    streams = sorted(streams, key=lambda s: s.source_id)
    if not streams:
        raise ValueError("cannot train PV-DBOW on an empty corpus")
    strategies = {s.strategy for s in streams}
    if len(strategies) > 1:
        raise ValueError(f"mixed tokenization strategies in corpus: {sorted(s.value for s in strategies)}")
    if len({s.source_id for s in streams}) != len(streams):
        raise ValueError("duplicate document ids in corpus")

    counts = Counter(t for s in streams for t in s.tokens)
    vocab_tokens = sorted(t for t, c in counts.items() if c >= hp.min_count)
    vocabulary = {t: i for i, t in enumerate(vocab_tokens)}

    noise = np.array([counts[t] for t in vocab_tokens], dtype=np.float64) ** hp.smoothing_exponent
    noise_cdf = np.cumsum(noise / noise.sum()) if vocab_tokens else np.zeros(0)
    # guard against rounding: the last cumulative value must cover draws in [0, 1)
    if noise_cdf.size:
        noise_cdf[-1] = 1.0

    doc_tokens = [
        np.array([vocabulary[t] for t in s.tokens if t in vocabulary], dtype=np.int64)
        for s in streams
    ]

    rng = np.random.default_rng(hp.seed)
    n_docs = len(streams)
    doc_vectors = rng.uniform(-0.5, 0.5, (n_docs, hp.dim)) / hp.dim
    word_weights = np.zeros((len(vocab_tokens), hp.dim))

    tokens_per_epoch = sum(t.size for t in doc_tokens)
    total_steps = hp.epochs * tokens_per_epoch
    train_doc = _train_doc_kernel if accelerated else _train_doc_reference
    epoch_losses: list[float] = []
    step = 0
    for _ in range(hp.epochs):
        for row, tokens in enumerate(doc_tokens):
            if tokens.size == 0:
                continue
            uniforms = rng.random((tokens.size, hp.negative_samples))
            train_doc(
                doc_vectors[row], word_weights, tokens, noise_cdf, uniforms,
                hp.initial_lr, hp.final_lr, step, total_steps,
            )
            step += tokens.size
        epoch_losses.append(
            epoch_objective(doc_vectors, word_weights, doc_tokens, noise_cdf,
                            hp.negative_samples, hp.seed)
        )

    return PvDbowModel(
        strategy=next(iter(strategies)),
        hyperparams=hp,
        vocabulary=vocabulary,
        doc_ids=tuple(s.source_id for s in streams),
        doc_vectors=doc_vectors,
        word_output_weights=word_weights,
        noise_cdf=noise_cdf,
        epoch_losses=tuple(epoch_losses),
    )
