"""End-to-end corpus construction from raw pages.

Pipeline: classify and filter pages, clean wikitext (resolving reference
tags), split sections, extract supporting definitions (definition links in
statement sections) and supporting propositions (proposition links in proof
sections), harmonize categories, and assemble validated entries.  Per-page
failures never abort the build; they are collected in the build report, and
premise links pointing outside the final corpus are dropped so the output
always validates cleanly.
"""
from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from ..corpus import Entry, EntryKind, Proof, entry_id, validate_corpus
from ..data import data_text
from .categories import CategoryMap, load_category_rules
from .classify import Classification, PageKind, classify_page, redirect_target
from .cleaning import TransclusionCycleError, clean_wikitext
from .pages import RawPage
from .sections import SectionRole, split_sections

_TEMPLATE_NAME_RE = re.compile(r"\{\{\s*([^|{}\n]+?)\s*(?:\|[^{}]*)?\}\}")

_CONTENT_KINDS = {
    PageKind.DEFINITION: EntryKind.DEFINITION,
    PageKind.THEOREM: EntryKind.THEOREM,
    PageKind.LEMMA: EntryKind.LEMMA,
    PageKind.COROLLARY: EntryKind.COROLLARY,
}


class BuildError(RuntimeError):
    """Internal pipeline defect: the assembled corpus failed validation."""


@dataclass
class BuildReport:
    excluded: list[dict] = field(default_factory=list)          # {"title", "reason"}
    warnings: list[str] = field(default_factory=list)
    dropped_links: list[dict] = field(default_factory=list)     # {"page", "target", "reason"}
    failures: list[dict] = field(default_factory=list)          # {"title", "error"}
    redirects_followed: int = 0

    def to_obj(self) -> dict:
        return {
            "excluded": sorted(self.excluded, key=lambda d: d["title"]),
            "warnings": sorted(self.warnings),
            "dropped_links": sorted(self.dropped_links, key=lambda d: (d["page"], d["target"])),
            "failures": sorted(self.failures, key=lambda d: d["title"]),
            "redirects_followed": self.redirects_followed,
        }


@dataclass
class BuildResult:
    entries: list[Entry]
    report: BuildReport


@dataclass
class _ParsedPage:
    key: str
    title: str
    classification: Classification
    statement_text: str = ""
    proof_texts: tuple[str, ...] = ()
    statement_links: tuple[str, ...] = ()
    proof_links: tuple[tuple[str, ...], ...] = ()
    raw_categories: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    error: str | None = None


def load_exclude_tags(path: str | Path | None = None) -> frozenset[str]:
    """Maintenance-tag blocklist; ``None`` loads the packaged default."""
    text = data_text("exclude_tags.txt") if path is None else Path(path).read_text(encoding="utf-8")
    tags = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            tags.add(line.lower())
    return frozenset(tags)


def maintenance_tags(wikitext: str, blocklist: frozenset[str]) -> list[str]:
    found = []
    for name in _TEMPLATE_NAME_RE.findall(wikitext):
        if name.strip().lower() in blocklist:
            found.append(name.strip())
    return found


def _parse_one(page: RawPage, classification: Classification,
               by_key: dict[str, RawPage], redirects: dict[str, str]) -> _ParsedPage:
    def resolver(title: str) -> RawPage | None:
        key = entry_id(title)
        return by_key.get(redirects.get(key, key))

    key = entry_id(page.title)
    try:
        clean = clean_wikitext(page, resolver)
    except (TransclusionCycleError, RecursionError) as exc:
        message = str(exc) or "transclusion nesting too deep"
        return _ParsedPage(key=key, title=page.title, classification=classification, error=message)

    sections = split_sections(clean.text)
    warnings = list(clean.warnings)

    statement_parts = [s.body for s in sections if s.role is SectionRole.STATEMENT and s.body]
    proof_sections = [s for s in sections if s.role is SectionRole.PROOF]
    if classification.kind is PageKind.DEFINITION and proof_sections:
        warnings.append("proof section on a definition page ignored")
        proof_sections = []

    statement_links: list[str] = []
    proof_links: list[list[str]] = [[] for _ in proof_sections]
    proof_spans = {s.proof_index: (s.body_start, s.body_end) for s in proof_sections}
    statement_spans = [
        (s.body_start, s.body_end) for s in sections if s.role is SectionRole.STATEMENT
    ]
    for link in clean.links:
        if any(a <= link.start < b for a, b in statement_spans):
            statement_links.append(link.target)
            continue
        for idx, (a, b) in proof_spans.items():
            if a <= link.start < b:
                proof_links[idx].append(link.target)
                break
        # links in satellite sections are commentary, not proof support

    return _ParsedPage(
        key=key,
        title=page.title,
        classification=classification,
        statement_text="\n\n".join(statement_parts),
        proof_texts=tuple(s.body for s in proof_sections),
        statement_links=tuple(statement_links),
        proof_links=tuple(tuple(lst) for lst in proof_links),
        raw_categories=tuple(clean.raw_categories),
        warnings=tuple(warnings),
    )


_WORKER_STATE: dict = {}


def _init_worker(by_key, redirects):
    _WORKER_STATE["by_key"] = by_key
    _WORKER_STATE["redirects"] = redirects


def _parse_in_worker(item):
    page, classification = item
    return _parse_one(page, classification, _WORKER_STATE["by_key"], _WORKER_STATE["redirects"])


def build_corpus(
    pages: Iterable[RawPage],
    category_map: CategoryMap | None = None,
    exclude_tags: frozenset[str] | None = None,
    workers: int = 1,
) -> BuildResult:
    """Build a validated corpus plus a report of everything set aside."""
    report = BuildReport()
    category_map = category_map or load_category_rules()
    blocklist = load_exclude_tags() if exclude_tags is None else exclude_tags

    by_key: dict[str, RawPage] = {}
    for page in sorted(pages, key=lambda p: p.title):
        key = entry_id(page.title)
        if key in by_key:
            report.warnings.append(f"duplicate page title {page.title!r}; keeping the first")
            continue
        by_key[key] = page

    redirects: dict[str, str] = {}
    for key, page in by_key.items():
        target = redirect_target(page.wikitext)
        if target is not None:
            redirects[key] = entry_id(target)

    to_parse: list[tuple[RawPage, Classification]] = []
    for key in sorted(by_key):
        page = by_key[key]
        classification = classify_page(page)
        if classification.kind is PageKind.EXCLUDED:
            report.excluded.append({"title": page.title, "reason": classification.reason})
            continue
        tags = maintenance_tags(page.wikitext, blocklist)
        if tags:
            report.excluded.append(
                {"title": page.title, "reason": f"maintenance-tag:{tags[0].lower()}"}
            )
            continue
        to_parse.append((page, classification))

    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(by_key, redirects)
        ) as pool:
            parsed_list = list(pool.map(_parse_in_worker, to_parse, chunksize=16))
    else:
        parsed_list = [_parse_one(p, c, by_key, redirects) for p, c in to_parse]

    parsed: dict[str, _ParsedPage] = {}
    for item in sorted(parsed_list, key=lambda r: r.key):
        if item.error is not None:
            report.failures.append({"title": item.title, "error": item.error})
            report.excluded.append({"title": item.title, "reason": "parse-failure"})
            continue
        parsed[item.key] = item
        report.warnings.extend(f"{item.title}: {w}" for w in item.warnings)

    def resolve(target: str) -> str:
        key = entry_id(target)
        if key in redirects:
            report.redirects_followed += 1
            return redirects[key]
        return key

    # derivation links are judged against pre-promotion kinds; a corollary
    # whose parent theorem is missing stands alone as a theorem
    initial_kind = {key: _CONTENT_KINDS[p.classification.kind] for key, p in parsed.items()}
    final_kind = dict(initial_kind)
    derived_from: dict[str, str | None] = {}
    for key, p in parsed.items():
        derived_from[key] = None
        parent_title = p.classification.derived_from_title
        if parent_title is None:
            continue
        parent = resolve(parent_title)
        parent_ok = initial_kind.get(parent) is EntryKind.THEOREM
        if p.classification.kind is PageKind.COROLLARY:
            if parent_ok:
                derived_from[key] = parent
            else:
                final_kind[key] = EntryKind.THEOREM
                report.warnings.append(
                    f"{p.title}: no parent theorem {parent_title!r}; kept as a theorem"
                )
        elif p.classification.kind is PageKind.LEMMA:
            if parent_ok:
                derived_from[key] = parent
            else:
                report.warnings.append(
                    f"{p.title}: no parent theorem {parent_title!r}; derivation dropped"
                )

    def premise_targets(page_key: str, targets: Sequence[str], want_definition: bool) -> frozenset[str]:
        kept = set()
        for raw_target in targets:
            target = resolve(raw_target)
            if target == page_key:
                continue
            kind = final_kind.get(target)
            if kind is None:
                reason = "unresolved" if target not in by_key else "excluded-target"
                report.dropped_links.append(
                    {"page": page_key, "target": raw_target, "reason": reason}
                )
                continue
            if (kind is EntryKind.DEFINITION) == want_definition:
                kept.add(target)
        return frozenset(kept)

    raw_cats = {key: list(p.raw_categories) for key, p in parsed.items()}
    categories = category_map.apply(raw_cats)

    entries: list[Entry] = []
    for key in sorted(parsed):
        p = parsed[key]
        kind = final_kind[key]
        proofs = tuple(
            Proof(text, premise_targets(key, links, want_definition=False))
            for text, links in zip(p.proof_texts, p.proof_links)
        )
        entries.append(Entry(
            id=key,
            kind=kind,
            title=p.title,
            statement_text=p.statement_text,
            categories=categories[key],
            supporting_definitions=premise_targets(key, p.statement_links, want_definition=True),
            proofs=proofs if kind is not EntryKind.DEFINITION else (),
            derived_from=derived_from[key],
        ))

    validation = validate_corpus(entries)
    if not validation.ok:
        raise BuildError(
            "assembled corpus failed validation: "
            + "; ".join(str(v) for v in validation.problems[:10])
        )
    return BuildResult(entries=entries, report=report)
