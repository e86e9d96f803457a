"""Secondary acceptance: train-loss decrease on the fixture, score piping
into the core evaluator (MAP checked against an in-test oracle), and the
gated published-dataset comparisons (need PREMSEL_DATASET_DIR plus locally
cached encoders; the neural-vs-TFIDF and encoder-domain checks are also
``slow``)."""
from __future__ import annotations

import json
import os
import random
import shutil
import subprocess
from pathlib import Path

import pytest

from premsel_neural.data import read_pair_file, read_score_file, scoring_pool, read_corpus, write_pair_file, write_score_file
from premsel_neural.score import score_pairs
from premsel_neural.train import FineTuneConfig, fine_tune

from conftest import make_labeled_pairs

DATASET_DIR = os.environ.get("PREMSEL_DATASET_DIR")
PREMSEL = shutil.which("premsel")

acceptance = pytest.mark.acceptance
needs_core_cli = pytest.mark.skipif(
    PREMSEL is None, reason="the core `premsel` CLI must be installed"
)
needs_dataset = pytest.mark.skipif(
    DATASET_DIR is None,
    reason="set PREMSEL_DATASET_DIR to the published corpus JSON directory",
)


def _encoder_cached(encoder_id: str) -> bool:
    from transformers import AutoConfig

    try:
        AutoConfig.from_pretrained(encoder_id, local_files_only=True)
        return True
    except Exception:
        return False


def _run(args: list[str]) -> subprocess.CompletedProcess:
    proc = subprocess.run(args, capture_output=True, text=True)
    assert proc.returncode == 0, f"{args}: {proc.stderr}"
    return proc


def _oracle_map(score_path: Path, gold: dict[str, list[str]], pool: list[str]) -> float:
    """Independent MAP over a score file: rank by (-score, id), average
    precision at each gold rank, divide by gold size, mean over queries."""
    by_query: dict[str, dict[str, float]] = {}
    for qid, cid, score in read_score_file(score_path):
        by_query.setdefault(qid, {})[cid] = score
    aveps = []
    for qid in sorted(by_query):
        scores = by_query[qid]
        ranked = sorted(
            (c for c in pool if c != qid),
            key=lambda c: (-scores.get(c, 0.0), c),
        )
        relevant = set(gold[qid])
        hits, total = 0, 0.0
        for position, cid in enumerate(ranked, start=1):
            if cid in relevant:
                hits += 1
                total += hits / position
        aveps.append(total / len(relevant))
    return sum(aveps) / len(aveps)


@acceptance
def test_train_loss_decreases_on_fixture(tiny_encoder, tmp_path):
    result = fine_tune(
        make_labeled_pairs(seed=5), [], tmp_path / "ckpt",
        FineTuneConfig(encoder=str(tiny_encoder), epochs=3, batch_size=8,
                       learning_rate=5e-4, max_length=64, seed=5),
    )
    assert result.train_losses[-1] < result.train_losses[0]


@acceptance
@needs_core_cli
def test_scores_pipe_into_core_evaluator_and_match_oracle(corpus_dir, tiny_encoder, tmp_path):
    pairs_dir = tmp_path / "pairs"
    _run([PREMSEL, "export-pairs", "--corpus", str(corpus_dir), "--out", str(pairs_dir),
          "--negative-ratio", "2", "--dev-fraction", "0.25", "--seed", "3"])
    train_pairs = read_pair_file(pairs_dir / "pairs.train.tsv")
    dev_pairs = read_pair_file(pairs_dir / "pairs.dev.tsv")
    assert train_pairs and dev_pairs

    ckpt = tmp_path / "ckpt"
    fine_tune(train_pairs, dev_pairs, ckpt,
              FineTuneConfig(encoder=str(tiny_encoder), epochs=2, batch_size=8,
                             learning_rate=5e-4, max_length=64, seed=3))

    entries = read_corpus(corpus_dir)
    queries = sorted(e.id for e in entries.values() if e.kind == "Theorem")
    records = score_pairs(ckpt, scoring_pool(entries, queries), max_length=64)
    score_path = write_score_file(records, tmp_path / "scores.tsv")

    report_path = tmp_path / "report.json"
    _run([PREMSEL, "evaluate", "--corpus", str(corpus_dir), "--scores", str(score_path),
          "--hops", "1", "--out", str(report_path)])
    report = json.loads(report_path.read_text(encoding="utf-8"))

    gold_path = tmp_path / "gold.json"
    _run([PREMSEL, "hops", "--corpus", str(corpus_dir), "--k", "1", "--out", str(gold_path)])
    gold = json.loads(gold_path.read_text(encoding="utf-8"))["gold"]

    expected = _oracle_map(score_path, gold, sorted(entries))
    assert abs(report["map"] - expected) <= 1e-9
    assert set(report["per_query"]) == set(queries)


@acceptance
@needs_core_cli
@needs_dataset
@pytest.mark.slow
@pytest.mark.skipif(not _encoder_cached("bert-base-uncased") if DATASET_DIR else True,
                    reason="bert-base-uncased not in the local cache")
def test_neural_map_beats_tfidf_on_query_subset(tmp_path):
    corpus_dir = Path(DATASET_DIR)

    gold_path = tmp_path / "gold.json"
    _run([PREMSEL, "hops", "--corpus", str(corpus_dir), "--k", "1", "--out", str(gold_path)])
    gold = json.loads(gold_path.read_text(encoding="utf-8"))["gold"]
    eval_queries = sorted(random.Random(42).sample(sorted(gold), 500))
    queries_file = tmp_path / "queries.txt"
    queries_file.write_text("\n".join(eval_queries) + "\n", encoding="utf-8")

    pairs_dir = tmp_path / "pairs"
    _run([PREMSEL, "export-pairs", "--corpus", str(corpus_dir), "--out", str(pairs_dir),
          "--negative-ratio", "4", "--dev-fraction", "0.05", "--seed", "42"])
    held_out = set(eval_queries)
    train_pairs = [p for p in read_pair_file(pairs_dir / "pairs.train.tsv")
                   if p.query_id not in held_out]
    dev_pairs = [p for p in read_pair_file(pairs_dir / "pairs.dev.tsv")
                 if p.query_id not in held_out]

    ckpt = tmp_path / "bert"
    fine_tune(train_pairs, dev_pairs, ckpt,
              FineTuneConfig(encoder="bert-base-uncased", epochs=2, batch_size=16, seed=42))

    entries = read_corpus(corpus_dir)
    records = score_pairs(ckpt, scoring_pool(entries, eval_queries), batch_size=64)
    score_path = write_score_file(records, tmp_path / "scores.tsv")

    neural_report = tmp_path / "neural.json"
    _run([PREMSEL, "evaluate", "--corpus", str(corpus_dir), "--scores", str(score_path),
          "--queries", str(queries_file), "--out", str(neural_report)])

    model_path = tmp_path / "tfidf.bin"
    _run([PREMSEL, "train", "--method", "tfidf", "--strategy", "tokenised",
          "--corpus", str(corpus_dir), "--out", str(model_path)])
    tfidf_report = tmp_path / "tfidf.json"
    _run([PREMSEL, "evaluate", "--corpus", str(corpus_dir), "--model", str(model_path),
          "--queries", str(queries_file), "--out", str(tfidf_report)])

    neural_map = json.loads(neural_report.read_text(encoding="utf-8"))["map"]
    tfidf_map = json.loads(tfidf_report.read_text(encoding="utf-8"))["map"]
    assert neural_map > tfidf_map, f"neural {neural_map:.4f} <= tfidf {tfidf_map:.4f}"


@acceptance
@needs_core_cli
@needs_dataset
@pytest.mark.slow
@pytest.mark.skipif(
    not (_encoder_cached("bert-base-uncased") and _encoder_cached("allenai/scibert_scivocab_uncased"))
    if DATASET_DIR else True,
    reason="bert-base-uncased and allenai/scibert_scivocab_uncased must be cached",
)
def test_scientific_encoder_at_least_matches_general(tmp_path):
    """Soft check over 3 seeds (majority): the scientific-domain encoder's
    MAP on the same 500-query subset is at least the general-domain one's."""
    corpus_dir = Path(DATASET_DIR)
    gold_path = tmp_path / "gold.json"
    _run([PREMSEL, "hops", "--corpus", str(corpus_dir), "--k", "1", "--out", str(gold_path)])
    gold = json.loads(gold_path.read_text(encoding="utf-8"))["gold"]
    eval_queries = sorted(random.Random(42).sample(sorted(gold), 500))
    queries_file = tmp_path / "queries.txt"
    queries_file.write_text("\n".join(eval_queries) + "\n", encoding="utf-8")
    entries = read_corpus(corpus_dir)
    pool = scoring_pool(entries, eval_queries)

    wins = 0
    for seed in (0, 1, 2):
        pairs_dir = tmp_path / f"pairs{seed}"
        _run([PREMSEL, "export-pairs", "--corpus", str(corpus_dir), "--out", str(pairs_dir),
              "--negative-ratio", "4", "--dev-fraction", "0.05", "--seed", str(seed)])
        held_out = set(eval_queries)
        train_pairs = [p for p in read_pair_file(pairs_dir / "pairs.train.tsv")
                       if p.query_id not in held_out]

        maps = {}
        for name, encoder in (("sci", "allenai/scibert_scivocab_uncased"),
                              ("gen", "bert-base-uncased")):
            ckpt = tmp_path / f"{name}{seed}"
            fine_tune(train_pairs, [], ckpt,
                      FineTuneConfig(encoder=encoder, epochs=2, batch_size=16, seed=seed))
            score_path = write_score_file(
                score_pairs(ckpt, pool, batch_size=64), tmp_path / f"{name}{seed}.tsv"
            )
            report = tmp_path / f"{name}{seed}.json"
            _run([PREMSEL, "evaluate", "--corpus", str(corpus_dir), "--scores", str(score_path),
                  "--queries", str(queries_file), "--out", str(report)])
            maps[name] = json.loads(report.read_text(encoding="utf-8"))["map"]
        if maps["sci"] >= maps["gen"]:
            wins += 1
    assert wins >= 2, f"scientific encoder won only {wins}/3 seeds"
