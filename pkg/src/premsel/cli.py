"""Command-line entry point: build, tokenize, stats, hops, train, evaluate,
export-pairs.

Every artifact-producing run writes a manifest beside its output with the
full flag set, input hashes and seed.  All randomness flows from ``--seed``;
no command reads ambient entropy, so equal invocations reproduce their
artifacts (timestamps and wall-clock timings aside).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .corpus import EntryKind, load_corpus, save_corpus
from .evaluation import EvaluationConfig, evaluate, read_score_file
from .graph import build_graph, compute_stats, cycle_groups, histogram_range_total, k_hop_premises
from .manifest import utc_now, write_json, write_manifest
from .modelio import load_model, save_model
from .pairs import export_pairs, write_pair_file
from .pvdbow import PvDbowHyperparams, train_pvdbow
from .tfidf import fit_tfidf
from .tokenizer import Strategy, tokenize
from .wiki import build_corpus, load_category_rules, load_exclude_tags, load_pages

STRATEGY_CHOICES = [s.value for s in Strategy]


def _flags(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _corpus_streams(corpus, strategy: Strategy):
    return [tokenize(e.statement_text, strategy, source_id=e.id) for e in corpus]


def cmd_build(args) -> int:
    started = utc_now()
    pages = load_pages(args.source)
    category_map = load_category_rules(args.category_rules, min_count=args.min_count)
    tags = load_exclude_tags(args.exclude_tags) if args.exclude_tags else load_exclude_tags()
    result = build_corpus(pages, category_map=category_map, exclude_tags=tags,
                          workers=args.workers)
    out = Path(args.out)
    save_corpus(result.entries, out)
    write_json(out / "build_report.json", result.report.to_obj())
    inputs = [args.source] + [p for p in (args.category_rules, args.exclude_tags) if p]
    write_manifest(out, "build", _flags(args), inputs, args.seed, started)
    print(f"built {len(result.entries)} entries into {out} "
          f"({len(result.report.excluded)} pages excluded)")
    return 0


def cmd_tokenize(args) -> int:
    started = utc_now()
    corpus = load_corpus(args.in_dir)
    strategy = Strategy(args.strategy)
    records = []
    for e in sorted(corpus, key=lambda e: e.id):
        stream = tokenize(e.statement_text, strategy, source_id=e.id)
        records.append({"id": e.id, "strategy": strategy.value, "tokens": list(stream.tokens)})
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    import json

    with open(out, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    write_manifest(out, "tokenize", _flags(args), [args.in_dir], args.seed, started)
    print(f"tokenized {len(records)} entries ({strategy.value}) into {out}")
    return 0


def cmd_stats(args) -> int:
    started = utc_now()
    corpus = load_corpus(args.corpus)
    graph = build_graph(corpus)
    stats = compute_stats(corpus, graph)
    obj = stats.to_obj()
    obj["premise_range_totals"] = {
        "1-5": histogram_range_total(stats.premise_count_histogram, 1, 5),
    }
    obj["dependant_range_totals"] = {
        "1-3": histogram_range_total(stats.dependant_count_histogram, 1, 3),
    }
    obj["cycle_groups"] = cycle_groups(graph)
    write_json(args.out, obj)
    write_manifest(args.out, "stats", _flags(args), [args.corpus], args.seed, started)
    print(f"stats for {sum(stats.counts_by_kind.values())} entries written to {args.out}")
    return 0


def cmd_hops(args) -> int:
    started = utc_now()
    corpus = load_corpus(args.corpus)
    graph = build_graph(corpus)
    gold = {}
    for e in sorted(corpus, key=lambda e: e.id):
        if e.kind is EntryKind.DEFINITION:
            continue
        premises = k_hop_premises(graph, e.id, args.k)
        if premises:
            gold[e.id] = sorted(premises)
    write_json(args.out, {"hop_k": args.k, "gold": gold})
    write_manifest(args.out, "hops", _flags(args), [args.corpus], args.seed, started)
    print(f"{len(gold)} gold premise sets at hop {args.k} written to {args.out}")
    return 0


def cmd_train(args) -> int:
    started = utc_now()
    corpus = load_corpus(args.corpus)
    strategy = Strategy(args.strategy)
    streams = _corpus_streams(corpus, strategy)
    if args.method == "tfidf":
        model = fit_tfidf(streams)
    else:
        hp = PvDbowHyperparams(
            dim=args.dim, epochs=args.epochs, negative_samples=args.negative_samples,
            min_count=args.min_token_count, seed=args.seed,
        )
        model = train_pvdbow(streams, hyperparams=hp)
    save_model(model, args.out)
    write_manifest(args.out, "train", _flags(args), [args.corpus], args.seed, started)
    print(f"{args.method} model ({strategy.value}) written to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    started = utc_now()
    corpus = load_corpus(args.corpus)
    graph = build_graph(corpus)

    model = None
    external = None
    if args.scores is not None:
        method = "external-scores"
        external = read_score_file(args.scores)
        strategy = Strategy(args.strategy) if args.strategy else None
    elif args.model is not None:
        model = load_model(args.model)
        method = model.method
        strategy = Strategy(args.strategy) if args.strategy else model.strategy
    else:
        raise ValueError("evaluate needs either --model or --scores")

    pool = args.candidate_pool or ("category" if args.category else "all")
    config = EvaluationConfig(
        method=method, strategy=strategy, hop_k=args.hops,
        category_filter=args.category, candidate_pool=pool, seed=args.seed,
    )
    query_ids = None
    if args.queries:
        query_ids = [
            line.strip() for line in Path(args.queries).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    report = evaluate(corpus, graph, config, model=model, external_scores=external,
                      query_ids=query_ids)
    write_json(args.out, report.to_obj())
    inputs = [args.corpus] + [p for p in (args.model, args.scores, args.queries) if p]
    write_manifest(args.out, "evaluate", _flags(args), inputs, args.seed, started)
    print(f"MAP = {report.map_score:.6f} over {report.num_queries} queries "
          f"({len(report.skipped_queries)} skipped) written to {args.out}")
    return 0


def cmd_export_pairs(args) -> int:
    started = utc_now()
    corpus = load_corpus(args.corpus)
    graph = build_graph(corpus)
    train, dev = export_pairs(
        corpus, graph, hop_k=args.hops, negative_ratio=args.negative_ratio,
        dev_fraction=args.dev_fraction, seed=args.seed,
    )
    out = Path(args.out)
    write_pair_file(train, out / "pairs.train.tsv")
    write_pair_file(dev, out / "pairs.dev.tsv")
    write_manifest(out, "export-pairs", _flags(args), [args.corpus], args.seed, started)
    print(f"{len(train)} train / {len(dev)} dev pairs written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="premsel",
        description="Premise-selection corpus and baseline toolkit",
    )
    parser.add_argument("--version", action="version", version=f"premsel {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("build", help="parse wiki sources into a validated corpus")
    p.add_argument("--source", required=True, help="XML export or directory of .wiki files")
    p.add_argument("--out", required=True, help="output corpus directory")
    p.add_argument("--category-rules", default=None, help="category merge rules JSON")
    p.add_argument("--min-count", type=int, default=100,
                   help="minimum entries per harmonized category (default 100)")
    p.add_argument("--exclude-tags", default=None, help="maintenance-tag blocklist file")
    p.add_argument("--workers", type=int, default=1, help="page-level parallelism")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("tokenize", help="tokenize corpus statements")
    p.add_argument("--strategy", required=True, choices=STRATEGY_CHOICES)
    p.add_argument("--in", dest="in_dir", required=True, help="corpus directory")
    p.add_argument("--out", required=True, help="output token file (JSON lines)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("stats", help="corpus and premise-graph statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("hops", help="emit k-hop gold premise sets")
    p.add_argument("--corpus", required=True)
    p.add_argument("--k", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_hops)

    p = sub.add_parser("train", help="fit a retrieval baseline")
    p.add_argument("--method", required=True, choices=["tfidf", "pvdbow"])
    p.add_argument("--strategy", required=True, choices=STRATEGY_CHOICES)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="model file")
    p.add_argument("--dim", type=int, default=100, choices=[50, 100, 200],
                   help="embedding size (pvdbow)")
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--negative-samples", type=int, default=5)
    p.add_argument("--min-token-count", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="rank premises and compute MAP")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="report JSON")
    p.add_argument("--model", default=None, help="trained model file")
    p.add_argument("--scores", default=None, help="external pair-score TSV")
    p.add_argument("--strategy", default=None, choices=STRATEGY_CHOICES,
                   help="expected tokenization strategy (checked against the model)")
    p.add_argument("--hops", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--category", default=None, help="harmonized category filter")
    p.add_argument("--candidate-pool", default=None, choices=["all", "category"])
    p.add_argument("--queries", default=None, help="file of query ids, one per line")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("export-pairs", help="emit pairwise training data")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--hops", type=int, default=1, choices=[1, 2, 3])
    p.add_argument("--negative-ratio", type=int, default=4)
    p.add_argument("--dev-fraction", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_export_pairs)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
