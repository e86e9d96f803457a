"""Deterministic page classification from namespace, title and structure.

Every page maps to exactly one of Definition, Theorem, Lemma, Corollary or
Excluded.  Corollary/Lemma subpages record the parent title they derive
from.  Redirects are excluded as entries (they are still followed when
resolving links).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .pages import RawPage

EXCLUDED_NAMESPACES = frozenset({
    "talk", "user", "user talk", "help", "help talk", "template",
    "template talk", "category", "category talk", "file", "file talk",
    "image", "mediawiki", "special", "project", "book", "axiom",
    "symbols", "mathematician", "source", "proofwiki",
    "definition talk", "axiom talk", "symbols talk", "mathematician talk",
    "book talk", "source talk", "proofwiki talk",
})

# commentary subpages that never form corpus entries of their own
SATELLITE_SUBPAGES = frozenset({
    "historical note", "also see", "sources", "examples", "comment",
    "motivation", "mistake", "linguistic note", "also known as",
    "also defined as", "warning", "notation",
})

_REDIRECT_RE = re.compile(r"^\s*#redirect\s*:?\s*\[\[([^\]|]+)", re.IGNORECASE)
_COROLLARY_SEGMENT = re.compile(r"corollary(?:\s+\d+)?", re.IGNORECASE)
_LEMMA_SEGMENT = re.compile(r"lemma(?:\s+\d+)?", re.IGNORECASE)
_PROOF_SEGMENT = re.compile(r"proof(?:\s+\d+)?", re.IGNORECASE)
_COROLLARY_TO = re.compile(r"corollary\s+to\s+(.+)", re.IGNORECASE)
_LEMMA_TO = re.compile(r"lemma\s+(?:to|for)\s+(.+)", re.IGNORECASE)


class PageKind(str, Enum):
    DEFINITION = "Definition"
    LEMMA = "Lemma"
    THEOREM = "Theorem"
    COROLLARY = "Corollary"
    EXCLUDED = "Excluded"


@dataclass(frozen=True)
class Classification:
    kind: PageKind
    derived_from_title: str | None = None
    reason: str = ""


def redirect_target(wikitext: str) -> str | None:
    m = _REDIRECT_RE.match(wikitext)
    return m.group(1).strip() if m else None


def classify_page(page: RawPage) -> Classification:
    if redirect_target(page.wikitext) is not None:
        return Classification(PageKind.EXCLUDED, reason="redirect")
    ns = page.namespace.lower()
    if ns in EXCLUDED_NAMESPACES:
        return Classification(PageKind.EXCLUDED, reason=f"namespace:{page.namespace}")
    if ns == "definition":
        return Classification(PageKind.DEFINITION)

    segments = page.title.split("/")
    if len(segments) > 1:
        last = segments[-1].strip()
        parent = "/".join(segments[:-1]).strip()
        if _COROLLARY_SEGMENT.fullmatch(last):
            return Classification(PageKind.COROLLARY, derived_from_title=parent)
        if _LEMMA_SEGMENT.fullmatch(last):
            return Classification(PageKind.LEMMA, derived_from_title=parent)
        if _PROOF_SEGMENT.fullmatch(last):
            return Classification(PageKind.EXCLUDED, reason="proof-subpage")
        if last.lower() in SATELLITE_SUBPAGES:
            return Classification(PageKind.EXCLUDED, reason="satellite-subpage")

    m = _COROLLARY_TO.fullmatch(page.title.strip())
    if m:
        return Classification(PageKind.COROLLARY, derived_from_title=m.group(1).strip())
    m = _LEMMA_TO.fullmatch(page.title.strip())
    if m:
        return Classification(PageKind.LEMMA, derived_from_title=m.group(1).strip())
    return Classification(PageKind.THEOREM)
