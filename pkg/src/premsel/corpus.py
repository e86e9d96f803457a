"""Structured corpus model: entries, proofs, premise sets, validation, JSON I/O.

An entry is one mathematical document (definition, lemma, theorem or
corollary).  Its premises are the union of the supporting definitions
hyperlinked from its statement and the supporting propositions cited by
its proofs.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable


class EntryKind(str, Enum):
    DEFINITION = "Definition"
    LEMMA = "Lemma"
    THEOREM = "Theorem"
    COROLLARY = "Corollary"


# one JSON file per kind; together they form a corpus directory
KIND_FILES = {
    EntryKind.DEFINITION: "definitions.json",
    EntryKind.THEOREM: "theorems.json",
    EntryKind.LEMMA: "lemmas.json",
    EntryKind.COROLLARY: "corollaries.json",
}

_WS = re.compile(r"\s+")


def entry_id(title: str) -> str:
    """Normalize a page title into a stable entry id (lowercase, spaces to underscores)."""
    return _WS.sub("_", title.strip()).lower()


@dataclass(frozen=True)
class Proof:
    """One proof of an entry, with the propositions its argument cites."""

    proof_text: str
    supporting_propositions: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Entry:
    """One mathematical document.

    ``definiens`` (expression, defining-text pairs) exists in the model but is
    never populated automatically; no extraction procedure is implemented.
    """

    id: str
    kind: EntryKind
    title: str
    statement_text: str
    categories: frozenset[str] = frozenset()
    supporting_definitions: frozenset[str] = frozenset()
    proofs: tuple[Proof, ...] = ()
    derived_from: str | None = None
    definiens: frozenset[tuple[str, str]] | None = None


def premise_set(entry: Entry, proof_index: int | None = None) -> set[str]:
    """Premises of ``entry``: supporting definitions plus proof citations.

    ``proof_index=None`` unions the supporting propositions of every proof;
    an integer restricts to that single proof.  The entry's own id is never
    a member.
    """
    result = set(entry.supporting_definitions)
    if proof_index is None:
        for proof in entry.proofs:
            result |= proof.supporting_propositions
    else:
        if not 0 <= proof_index < len(entry.proofs):
            raise IndexError(
                f"proof index {proof_index} out of range for entry {entry.id!r} "
                f"with {len(entry.proofs)} proof(s)"
            )
        result |= entry.proofs[proof_index].supporting_propositions
    result.discard(entry.id)
    return result


@dataclass(frozen=True)
class Violation:
    code: str
    entry_id: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.code}({self.entry_id}→{self.detail})" if self.detail else f"{self.code}({self.entry_id})"


@dataclass
class ValidationReport:
    problems: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def add(self, code: str, entry_id: str, detail: str = "") -> None:
        self.problems.append(Violation(code, entry_id, detail))

    def codes(self) -> set[str]:
        return {p.code for p in self.problems}


def validate_corpus(entries: Iterable[Entry]) -> ValidationReport:
    """Check every cross-reference and kind/field invariant; empty report means valid."""
    entries = list(entries)
    report = ValidationReport()
    by_id: dict[str, Entry] = {}
    for e in entries:
        if e.id in by_id:
            report.add("duplicate-id", e.id)
        by_id[e.id] = e

    for e in entries:
        if e.kind is EntryKind.DEFINITION:
            if e.proofs:
                report.add("definition-with-proof", e.id)
            if e.derived_from is not None:
                report.add("definition-with-derivation", e.id, e.derived_from)
        if e.kind is EntryKind.THEOREM and e.derived_from is not None:
            report.add("theorem-with-derivation", e.id, e.derived_from)
        if e.kind is EntryKind.COROLLARY and e.derived_from is None:
            report.add("missing-derivation", e.id)
        if e.derived_from is not None and e.kind in (EntryKind.COROLLARY, EntryKind.LEMMA):
            parent = by_id.get(e.derived_from)
            if parent is None or parent.kind is not EntryKind.THEOREM:
                report.add("bad-derivation", e.id, e.derived_from)

        for did in sorted(e.supporting_definitions):
            target = by_id.get(did)
            if target is None:
                report.add("dangling-id", e.id, did)
            elif target.kind is not EntryKind.DEFINITION:
                report.add("bad-supporting-definition", e.id, did)
        for proof in e.proofs:
            for pid in sorted(proof.supporting_propositions):
                target = by_id.get(pid)
                if target is None:
                    report.add("dangling-id", e.id, pid)
                elif target.kind is EntryKind.DEFINITION:
                    report.add("bad-supporting-proposition", e.id, pid)

        all_premises = set(e.supporting_definitions)
        for proof in e.proofs:
            all_premises |= proof.supporting_propositions
        if e.id in all_premises:
            report.add("self-premise", e.id)

    return report


def _entry_to_obj(e: Entry) -> dict:
    obj = {
        "id": e.id,
        "kind": e.kind.value,
        "title": e.title,
        "statement_text": e.statement_text,
        "categories": sorted(e.categories),
        "supporting_definitions": sorted(e.supporting_definitions),
        "proofs": [
            {
                "proof_text": p.proof_text,
                "supporting_propositions": sorted(p.supporting_propositions),
            }
            for p in e.proofs
        ],
        "derived_from": e.derived_from,
    }
    if e.definiens is not None:
        obj["definiens"] = [list(pair) for pair in sorted(e.definiens)]
    return obj


def _entry_from_obj(obj: dict) -> Entry:
    definiens = obj.get("definiens")
    return Entry(
        id=obj["id"],
        kind=EntryKind(obj["kind"]),
        title=obj["title"],
        statement_text=obj["statement_text"],
        categories=frozenset(obj.get("categories", [])),
        supporting_definitions=frozenset(obj.get("supporting_definitions", [])),
        proofs=tuple(
            Proof(p["proof_text"], frozenset(p.get("supporting_propositions", [])))
            for p in obj.get("proofs", [])
        ),
        derived_from=obj.get("derived_from"),
        definiens=None if definiens is None else frozenset((a, b) for a, b in definiens),
    )


def save_corpus(entries: Iterable[Entry], out_dir: str | Path) -> list[Path]:
    """Write one JSON array per kind into ``out_dir``; deterministic ordering."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_kind: dict[EntryKind, list[Entry]] = {k: [] for k in KIND_FILES}
    for e in entries:
        by_kind[e.kind].append(e)
    written = []
    for kind, filename in KIND_FILES.items():
        path = out_dir / filename
        objs = [_entry_to_obj(e) for e in sorted(by_kind[kind], key=lambda e: e.id)]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(objs, fh, ensure_ascii=False, indent=1)
            fh.write("\n")
        written.append(path)
    return written


def load_corpus(src_dir: str | Path) -> list[Entry]:
    """Read the per-kind JSON files from a corpus directory; missing files are empty."""
    src_dir = Path(src_dir)
    if not src_dir.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {src_dir}")
    entries: list[Entry] = []
    for filename in KIND_FILES.values():
        path = src_dir / filename
        if not path.exists():
            continue
        with open(path, encoding="utf-8") as fh:
            entries.extend(_entry_from_obj(obj) for obj in json.load(fh))
    return sorted(entries, key=lambda e: e.id)
