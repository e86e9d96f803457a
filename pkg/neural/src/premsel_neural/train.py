"""Fine-tuning a pre-trained encoder for pairwise premise relevance.

Each (statement, candidate) pair is encoded as a sequence pair and a linear
classification head on the encoder output is trained with cross-entropy.
The candidate side is truncated first when the pair exceeds the maximum
sequence length (candidates are often the longer side).
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .data import PairExample
from .encoder import load_classifier

logger = logging.getLogger(__name__)

CONFIG_FILE = "premsel_neural.json"


@dataclass(frozen=True)
class FineTuneConfig:
    encoder: str
    epochs: int = 3
    batch_size: int = 16
    learning_rate: float = 2e-5
    max_length: int = 256
    seed: int = 0
    freeze_encoder: bool = False
    device: str = "cpu"
    allow_download: bool = False

    def to_obj(self) -> dict:
        return {
            "encoder": self.encoder,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "max_length": self.max_length,
            "seed": self.seed,
            "freeze_encoder": self.freeze_encoder,
        }


@dataclass
class FineTuneResult:
    checkpoint_dir: Path
    train_losses: list[float] = field(default_factory=list)
    dev_losses: list[float] = field(default_factory=list)


def encode_pairs(tokenizer, pairs: Sequence[PairExample], max_length: int):
    """Batch-encode sequence pairs, truncating the candidate side first."""
    text_a = [ex.text_a for ex in pairs]
    text_b = [ex.text_b for ex in pairs]
    try:
        return tokenizer(text_a, text_b, truncation="only_second", max_length=max_length,
                         padding=True, return_tensors="pt")
    except Exception:
        # a statement alone can exceed the window; fall back to trimming both
        return tokenizer(text_a, text_b, truncation=True, max_length=max_length,
                         padding=True, return_tensors="pt")


def _epoch_loss(model, tokenizer, pairs, max_length, batch_size, device) -> float:
    import torch

    model.eval()
    total, count = 0.0, 0
    with torch.no_grad():
        for start in range(0, len(pairs), batch_size):
            batch = pairs[start : start + batch_size]
            enc = encode_pairs(tokenizer, batch, max_length).to(device)
            labels = torch.tensor([ex.label for ex in batch], device=device)
            out = model(**enc, labels=labels)
            total += float(out.loss.detach()) * len(batch)
            count += len(batch)
    return total / max(count, 1)


def fine_tune(
    train_pairs: Sequence[PairExample],
    dev_pairs: Sequence[PairExample],
    out_dir: str | Path,
    config: FineTuneConfig,
) -> FineTuneResult:
    """Train the classifier and save a checkpoint with its config record."""
    import torch

    if not train_pairs:
        raise ValueError("no training pairs")
    torch.manual_seed(config.seed)
    np.random.seed(config.seed)
    random.seed(config.seed)

    tokenizer, model = load_classifier(config.encoder, allow_download=config.allow_download)
    device = torch.device(config.device)
    model.to(device)
    if config.freeze_encoder:
        model.base_model.requires_grad_(False)

    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.AdamW(trainable, lr=config.learning_rate)
    shuffler = random.Random(config.seed)

    result = FineTuneResult(checkpoint_dir=Path(out_dir))
    for epoch in range(config.epochs):
        order = list(range(len(train_pairs)))
        shuffler.shuffle(order)
        model.train()
        total, count = 0.0, 0
        for start in range(0, len(order), config.batch_size):
            batch = [train_pairs[i] for i in order[start : start + config.batch_size]]
            enc = encode_pairs(tokenizer, batch, config.max_length).to(device)
            labels = torch.tensor([ex.label for ex in batch], device=device)
            out = model(**enc, labels=labels)
            optimizer.zero_grad()
            out.loss.backward()
            optimizer.step()
            total += float(out.loss.detach()) * len(batch)
            count += len(batch)
        result.train_losses.append(total / max(count, 1))
        if dev_pairs:
            result.dev_losses.append(
                _epoch_loss(model, tokenizer, dev_pairs, config.max_length,
                            config.batch_size, device)
            )
            logger.info("epoch %d: train loss %.4f, dev loss %.4f",
                        epoch, result.train_losses[-1], result.dev_losses[-1])
        else:
            logger.info("epoch %d: train loss %.4f", epoch, result.train_losses[-1])

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    record = {
        "format_version": 1,
        "config": config.to_obj(),
        "train_losses": result.train_losses,
        "dev_losses": result.dev_losses,
    }
    (out_dir / CONFIG_FILE).write_text(
        json.dumps(record, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )
    return result
