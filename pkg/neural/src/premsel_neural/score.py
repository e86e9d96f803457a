"""Batched relevance scoring of (statement, candidate) pairs.

Scores are the classifier's relevance probabilities in [0, 1], written to
the tab-separated score format the core evaluator consumes, so MAP is
computed by exactly one implementation (the core one).
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .data import PairExample
from .encoder import load_classifier
from .train import encode_pairs


def score_pairs(
    checkpoint: str | Path,
    pairs: Sequence[PairExample],
    batch_size: int = 32,
    max_length: int = 256,
    device: str = "cpu",
) -> list[tuple[str, str, float]]:
    """Relevance probability per pair; deterministic for a fixed checkpoint."""
    import torch

    tokenizer, model = load_classifier(checkpoint)
    dev = torch.device(device)
    model.to(dev)
    model.eval()
    records: list[tuple[str, str, float]] = []
    with torch.no_grad():
        for start in range(0, len(pairs), batch_size):
            batch = pairs[start : start + batch_size]
            enc = encode_pairs(tokenizer, batch, max_length).to(dev)
            probs = torch.softmax(model(**enc).logits, dim=-1)[:, 1]
            records.extend(
                (ex.query_id, ex.candidate_id, float(p)) for ex, p in zip(batch, probs)
            )
    return records
