"""Heading-based sectioning of cleaned page text.

Level-two headings delimit sections; deeper headings stay inside their
section body.  Headings naming the statement (Theorem, Definition, ...) or a
proof get those roles; anything else (Historical Note, Sources, ...) is
satellite commentary, carried along but excluded from premise extraction.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

_HEADING_RE = re.compile(r"^==([^=\n][^\n]*?)==[ \t]*$", re.MULTILINE)
_PROOF_HEADING = re.compile(r"proof(?:\s+\d+)?", re.IGNORECASE)

STATEMENT_HEADINGS = frozenset({
    "theorem", "definition", "lemma", "corollary", "proposition", "statement", "axiom",
})


class SectionRole(str, Enum):
    STATEMENT = "Statement"
    PROOF = "Proof"
    SATELLITE = "Satellite"


@dataclass(frozen=True)
class PageSection:
    heading: str
    body: str
    role: SectionRole
    proof_index: int | None = None
    body_start: int = 0     # span of the body in the cleaned page text
    body_end: int = 0


def split_sections(text: str) -> list[PageSection]:
    """Sections in document order; a headingless page is a single statement.

    Proof sections are indexed 0, 1, ... consecutively in order of
    appearance regardless of the numbers in their headings.
    """
    sections: list[PageSection] = []
    matches = list(_HEADING_RE.finditer(text))
    proof_counter = 0

    def add(heading: str, start: int, end: int) -> None:
        nonlocal proof_counter
        body = text[start:end]
        if not heading and not body.strip():
            return
        stripped = heading.strip().lower()
        if not heading or stripped in STATEMENT_HEADINGS:
            role, idx = SectionRole.STATEMENT, None
        elif _PROOF_HEADING.fullmatch(stripped):
            role, idx = SectionRole.PROOF, proof_counter
            proof_counter += 1
        else:
            role, idx = SectionRole.SATELLITE, None
        sections.append(PageSection(heading.strip(), body.strip(), role, idx, start, end))

    first = matches[0].start() if matches else len(text)
    add("", 0, first)
    for i, m in enumerate(matches):
        start = m.end() + 1 if m.end() < len(text) else m.end()
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        add(m.group(1), start, end)
    return sections
