"""Command-line entry point mirroring the core toolkit's flag conventions:
``train`` fine-tunes a cached encoder on exported pair files, ``score``
writes a pair-score file for the core evaluator's external-scores method."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import (
    PROPOSITION_KINDS,
    read_corpus,
    read_pair_file,
    scoring_pool,
    write_score_file,
)
from .encoder import EncoderNotCachedError
from .score import score_pairs
from .train import FineTuneConfig, fine_tune


def cmd_train(args) -> int:
    pairs_dir = Path(args.pairs)
    train_pairs = read_pair_file(pairs_dir / "pairs.train.tsv")
    dev_path = pairs_dir / "pairs.dev.tsv"
    dev_pairs = read_pair_file(dev_path) if dev_path.exists() else []
    config = FineTuneConfig(
        encoder=args.encoder, epochs=args.epochs, batch_size=args.batch_size,
        learning_rate=args.lr, max_length=args.max_length, seed=args.seed,
        freeze_encoder=args.freeze_encoder, device=args.device,
        allow_download=args.allow_download,
    )
    result = fine_tune(train_pairs, dev_pairs, args.out, config)
    print(f"fine-tuned {args.encoder} for {args.epochs} epochs "
          f"(final train loss {result.train_losses[-1]:.4f}) into {args.out}")
    return 0


def cmd_score(args) -> int:
    entries = read_corpus(args.corpus)
    if args.queries:
        query_ids = [
            line.strip() for line in Path(args.queries).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    else:
        query_ids = sorted(e.id for e in entries.values() if e.kind in PROPOSITION_KINDS)
    pairs = scoring_pool(entries, query_ids)
    records = score_pairs(
        args.model, pairs, batch_size=args.batch_size,
        max_length=args.max_length, device=args.device,
    )
    write_score_file(records, args.out)
    print(f"scored {len(records)} pairs for {len(query_ids)} queries into {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="premsel-neural",
        description="Pairwise transformer relevance baseline for premise selection",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("train", help="fine-tune a cached encoder on exported pairs")
    p.add_argument("--pairs", required=True, help="directory with pairs.train.tsv / pairs.dev.tsv")
    p.add_argument("--encoder", required=True, help="local path or cached hub id")
    p.add_argument("--out", required=True, help="checkpoint directory")
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--max-length", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--freeze-encoder", action="store_true",
                   help="train the classification head only")
    p.add_argument("--allow-download", action="store_true",
                   help="permit fetching encoder weights (never done implicitly)")
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="score (query, candidate) pairs for the core evaluator")
    p.add_argument("--model", required=True, help="fine-tuned checkpoint directory")
    p.add_argument("--corpus", required=True, help="corpus JSON directory")
    p.add_argument("--queries", default=None,
                   help="file of query ids, one per line (default: every proposition)")
    p.add_argument("--out", required=True, help="score TSV")
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--max-length", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=cmd_score)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except EncoderNotCachedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
