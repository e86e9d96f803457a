"""Encoder loading with an explicit no-download policy.

Tests and offline runs never fetch weights silently: a missing cached
encoder raises with the exact command that downloads it.  A tiny randomly
initialized encoder builder is provided for fixtures and smoke runs.
"""
from __future__ import annotations

from pathlib import Path


class EncoderNotCachedError(RuntimeError):
    pass


def load_classifier(encoder: str | Path, num_labels: int = 2, allow_download: bool = False):
    """(tokenizer, sequence-classification model) from a local path or the
    local hub cache; raises with download instructions when absent."""
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(str(encoder), local_files_only=not allow_download)
        model = AutoModelForSequenceClassification.from_pretrained(
            str(encoder), num_labels=num_labels, local_files_only=not allow_download
        )
    except (OSError, ValueError) as exc:
        raise EncoderNotCachedError(
            f"encoder {encoder!r} is not available locally. Download it once with:\n"
            f"  python3 -c \"from transformers import AutoModelForSequenceClassification, AutoTokenizer; "
            f"AutoTokenizer.from_pretrained('{encoder}'); "
            f"AutoModelForSequenceClassification.from_pretrained('{encoder}')\"\n"
            f"or pass --allow-download."
        ) from exc
    return tokenizer, model


def build_tiny_encoder(
    out_dir: str | Path,
    vocab_words: list[str],
    seed: int = 0,
    hidden_size: int = 32,
    num_layers: int = 2,
    max_positions: int = 128,
) -> Path:
    """Randomly initialized miniature bidirectional encoder saved to
    ``out_dir``; a stand-in local encoder for tests and smoke runs."""
    import torch
    from transformers import BertConfig, BertForSequenceClassification, BertTokenizerFast

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    specials = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    seen = set(specials)
    vocab = list(specials)
    for word in vocab_words:
        word = word.lower()
        if word and word not in seen:
            seen.add(word)
            vocab.append(word)
    (out_dir / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizerFast(vocab_file=str(out_dir / "vocab.txt"), do_lower_case=True)

    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=hidden_size,
        num_hidden_layers=num_layers,
        num_attention_heads=max(1, hidden_size // 16),
        intermediate_size=hidden_size * 2,
        max_position_embeddings=max_positions,
        num_labels=2,
    )
    model = BertForSequenceClassification(config)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return out_dir
