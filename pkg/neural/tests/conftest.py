"""Fixtures: a small two-topic corpus in the documented JSON schema, a tiny
local encoder, and labeled pairs derived from the corpus premise links.

The corpus is written so relevance is lexically learnable: each theorem
statement shares distinctive words with its gold premises.
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from premsel_neural.data import PairExample
from premsel_neural.encoder import build_tiny_encoder

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "acceptance" in getattr(report, "keywords", {}):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE_RESULTS.append((name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome:>6}] {name}")

_DEFINITIONS = {
    "definition:group": "A group is a set with an associative operation, an identity element and inverses.",
    "definition:subgroup": "A subgroup is a subset of a group that is itself a group under the same operation.",
    "definition:integral": "The integral of a function measures the area under its curve.",
    "definition:measure": "A measure assigns a nonnegative size to each measurable set.",
    "definition:prime": "A prime is a number divisible only by one and by itself.",
    "definition:limit": "A limit describes the value a function approaches.",
}

_THEOREMS = {
    "coset_decomposition": (
        "The cosets of a subgroup partition the group.",
        ["definition:group", "definition:subgroup"], [],
    ),
    "lagrange_theorem": (
        "The order of a subgroup of a finite group divides the order of the group.",
        ["definition:group", "definition:subgroup"], ["coset_decomposition"],
    ),
    "group_identity_unique": (
        "The identity element of a group is unique.",
        ["definition:group"], [],
    ),
    "fatou_lemma": (
        "The integral of a limit inferior is at most the limit inferior of the integrals.",
        ["definition:integral", "definition:measure", "definition:limit"], [],
    ),
    "monotone_convergence": (
        "The integral of the limit of a monotone sequence equals the limit of the integrals.",
        ["definition:integral", "definition:limit"], ["fatou_lemma"],
    ),
    "integral_linearity": (
        "The integral is linear in the integrand.",
        ["definition:integral"], [],
    ),
    "prime_divisor_exists": (
        "Every number greater than one has a prime divisor.",
        ["definition:prime"], [],
    ),
    "euclid_infinitude": (
        "There are infinitely many prime numbers.",
        ["definition:prime"], ["prime_divisor_exists"],
    ),
}


def corpus_objects() -> dict[str, list[dict]]:
    definitions = [
        {
            "id": eid, "kind": "Definition", "title": eid, "statement_text": text,
            "categories": [], "supporting_definitions": [], "proofs": [],
            "derived_from": None,
        }
        for eid, text in _DEFINITIONS.items()
    ]
    theorems = [
        {
            "id": eid, "kind": "Theorem", "title": eid, "statement_text": text,
            "categories": [], "supporting_definitions": defs,
            "proofs": [{"proof_text": f"Proof of {eid}.", "supporting_propositions": props}],
            "derived_from": None,
        }
        for eid, (text, defs, props) in _THEOREMS.items()
    ]
    return {"definitions.json": definitions, "theorems.json": theorems,
            "lemmas.json": [], "corollaries.json": []}


def gold_sets() -> dict[str, set[str]]:
    return {
        eid: set(defs) | set(props) for eid, (_, defs, props) in _THEOREMS.items()
    }


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("corpus")
    for name, objs in corpus_objects().items():
        (out / name).write_text(json.dumps(objs, indent=1) + "\n", encoding="utf-8")
    return out


@pytest.fixture(scope="session")
def tiny_encoder(tmp_path_factory) -> Path:
    words = set()
    for text in list(_DEFINITIONS.values()) + [t for t, _, _ in _THEOREMS.values()]:
        words.update(w.strip(".,").lower() for w in text.split())
    return build_tiny_encoder(
        tmp_path_factory.mktemp("encoder"), sorted(words), seed=7, max_positions=128
    )


def make_labeled_pairs(seed: int = 0, negative_ratio: int = 2) -> list[PairExample]:
    texts = dict(_DEFINITIONS) | {eid: t for eid, (t, _, _) in _THEOREMS.items()}
    rng = random.Random(seed)
    pairs = []
    for qid, gold in sorted(gold_sets().items()):
        others = sorted(set(texts) - gold - {qid})
        for g in sorted(gold):
            pairs.append(PairExample(qid, g, texts[qid], texts[g], 1))
        for c in rng.sample(others, k=min(len(others), negative_ratio * len(gold))):
            pairs.append(PairExample(qid, c, texts[qid], texts[c], 0))
    return pairs
