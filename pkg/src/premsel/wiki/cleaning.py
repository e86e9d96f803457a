"""Wikitext cleaning: markup stripping, link annotation, transclusion.

The cleaner turns page source into plain text while

* keeping math regions (``$...$``, ``<math>`` normalized to ``$``) verbatim,
* replacing ``{{Page}}`` / ``{{Page|passage}}`` reference tags with the
  referenced passage, recursively cleaned, with cycle detection,
* turning ``[[Target|anchor]]`` links into anchor text plus a structured
  annotation carrying the target and the anchor's character span,
* collecting ``[[Category:...]]`` assignments out of the text,
* dropping presentation templates (qed, eqn scaffolding) and rendering
  ``{{eqn|...}}`` rows as inline math.

Unknown angle-bracket tags are preserved as opaque text with a warning; a
live wiki's tag set drifts and must never hard-fail the build.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

from ..corpus import entry_id
from .pages import RawPage


class TransclusionCycleError(RuntimeError):
    """Raised when reference tags form a cycle; names the page chain."""

    def __init__(self, chain: tuple[str, ...]):
        super().__init__("cyclic transclusion: " + " → ".join(chain))
        self.chain = chain


@dataclass(frozen=True)
class LinkAnnotation:
    target: str
    anchor: str
    start: int      # character span of the anchor in the cleaned text
    end: int


@dataclass
class CleanText:
    text: str
    links: list[LinkAnnotation] = field(default_factory=list)
    raw_categories: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


# templates that are pure presentation on ProofWiki-style sources
DROP_TEMPLATES = frozenset({
    "qed", "begin-eqn", "end-eqn", "begin-axiom", "end-axiom", "mistake",
})

_COMMENT_RE = re.compile(r"<!--.*?-->", re.DOTALL)
_MATH_TAG_RE = re.compile(r"<math[^>]*>(.*?)</math>", re.DOTALL | re.IGNORECASE)
_SECTION_MARK_RE = re.compile(r"<section\s+(?:begin|end)\s*=\s*[\"']?[^/>\"']*[\"']?\s*/>", re.IGNORECASE)
_ONLYINCLUDE_MARK_RE = re.compile(r"</?onlyinclude>", re.IGNORECASE)
_NOINCLUDE_RE = re.compile(r"<noinclude>(.*?)</noinclude>", re.DOTALL | re.IGNORECASE)
_INCLUDEONLY_RE = re.compile(r"<includeonly>(.*?)</includeonly>", re.DOTALL | re.IGNORECASE)
_TAG_RE = re.compile(r"</?[a-zA-Z][^>\n]*>")
_EQN_MATH_KEYS = ("ll", "l", "lo", "o", "mo", "r", "ro", "rr")


def transclusion_source(wikitext: str, passage: str | None) -> str | None:
    """Raw text a reference tag pulls from a page.

    A named passage is the region between matching ``<section begin/end>``
    markers; otherwise the ``<onlyinclude>`` region(s) when present, else the
    whole page without its ``<noinclude>`` parts.
    """
    if passage is not None:
        pattern = re.compile(
            r"<section\s+begin\s*=\s*[\"']?" + re.escape(passage) + r"[\"']?\s*/>(.*?)"
            r"<section\s+end\s*=\s*[\"']?" + re.escape(passage) + r"[\"']?\s*/>",
            re.DOTALL | re.IGNORECASE,
        )
        found = pattern.findall(wikitext)
        return "".join(found) if found else None
    only = re.findall(r"<onlyinclude>(.*?)</onlyinclude>", wikitext, re.DOTALL | re.IGNORECASE)
    if only:
        return "".join(only)
    return _NOINCLUDE_RE.sub("", _INCLUDEONLY_RE.sub(r"\1", wikitext))


def _preprocess(wikitext: str) -> str:
    text = _COMMENT_RE.sub("", wikitext)
    text = _MATH_TAG_RE.sub(lambda m: "$" + m.group(1).strip() + "$", text)
    text = _SECTION_MARK_RE.sub("", text)
    text = _ONLYINCLUDE_MARK_RE.sub("", text)
    text = _NOINCLUDE_RE.sub(r"\1", text)
    text = _INCLUDEONLY_RE.sub("", text)
    return text


def _find_math_end(text: str, start: int) -> tuple[int, int]:
    """(content_end, region_end) for the math region opening at ``start``."""
    delim = "$$" if text.startswith("$$", start) else "$"
    i = start + len(delim)
    while i < len(text):
        j = text.find(delim, i)
        if j < 0:
            break
        backslashes = 0
        k = j - 1
        while k >= 0 and text[k] == "\\":
            backslashes += 1
            k -= 1
        if backslashes % 2 == 0:
            return j, j + len(delim)
        i = j + 1
    return len(text), len(text)


def _find_template_end(text: str, start: int) -> int:
    """Index just past the braces matching the ``{{`` at ``start``, or -1.

    Counts single braces so LaTeX groups inside template arguments
    (``\\frac{a}{b}``) stay balanced.
    """
    depth = 0
    i = start
    while i < len(text):
        ch = text[i]
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return -1


def _split_template(inner: str) -> list[str]:
    """Split template content on top-level pipes; braces and ``[[...]]``
    links shield their pipes."""
    parts: list[str] = []
    brace_depth = 0
    link_depth = 0
    current: list[str] = []
    i = 0
    while i < len(inner):
        ch = inner[i]
        if inner.startswith("[[", i):
            link_depth += 1
            current.append("[[")
            i += 2
        elif inner.startswith("]]", i) and link_depth > 0:
            link_depth -= 1
            current.append("]]")
            i += 2
        elif ch == "{":
            brace_depth += 1
            current.append(ch)
            i += 1
        elif ch == "}":
            brace_depth -= 1
            current.append(ch)
            i += 1
        elif ch == "|" and brace_depth == 0 and link_depth == 0:
            parts.append("".join(current))
            current = []
            i += 1
        else:
            current.append(ch)
            i += 1
    parts.append("".join(current))
    return parts


def _eqn_to_text(args: list[str]) -> str:
    """Render one equation-row template as inline math plus its comment."""
    values: dict[str, str] = {}
    for arg in args:
        if "=" not in arg:
            continue
        key, _, value = arg.partition("=")
        values[key.strip().lower()] = value.strip()
    math = " ".join(values[k] for k in _EQN_MATH_KEYS if k in values and values[k])
    out = f"${math}$" if math else ""
    comment = values.get("c", "")
    if comment:
        out = f"{out} {comment}" if out else comment
    return out


class _Cleaner:
    def __init__(self, resolver: Callable[[str], RawPage | None]):
        self.resolver = resolver
        self.parts: list[str] = []
        self.length = 0
        self.links: list[LinkAnnotation] = []
        self.raw_categories: list[str] = []
        self.warnings: list[str] = []
        self.transclusion_depth = 0

    def emit(self, text: str) -> None:
        if text:
            self.parts.append(text)
            self.length += len(text)

    def scan(self, text: str, chain: tuple[str, ...]) -> None:
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch == "$":
                content_end, region_end = _find_math_end(text, i)
                self.emit(text[i:region_end])
                i = region_end
            elif text.startswith("{{", i):
                i = self._handle_template(text, i, chain)
            elif text.startswith("[[", i):
                i = self._handle_link(text, i)
            elif text.startswith("'''", i):
                i += 3
            elif text.startswith("''", i):
                i += 2
            elif ch == "<":
                i = self._handle_tag(text, i)
            else:
                self.emit(ch)
                i += 1

    def _handle_template(self, text: str, start: int, chain: tuple[str, ...]) -> int:
        end = _find_template_end(text, start)
        if end < 0:
            self.warnings.append("unterminated template tag; kept as text")
            self.emit(text[start:])
            return len(text)
        parts = _split_template(text[start + 2 : end - 2])
        name = parts[0].strip()
        if name.lower() in DROP_TEMPLATES:
            return end
        if name.lower() == "eqn":
            rendered = _eqn_to_text(parts[1:])
            # the comment part may itself carry links and math
            self.scan(rendered, chain)
            return end
        self._transclude(name, parts[1:], chain)
        return end

    def _transclude(self, name: str, args: list[str], chain: tuple[str, ...]) -> None:
        title = name.lstrip(":").strip()
        passage = args[0].strip() if args and args[0].strip() else None
        if not title:
            self.warnings.append("empty reference tag dropped")
            return
        if entry_id(title) in {entry_id(t) for t in chain}:
            raise TransclusionCycleError(chain + (title,))
        page = self.resolver(title)
        if page is None:
            self.warnings.append(f"unresolved-reference: {title}")
            return
        source = transclusion_source(page.wikitext, passage)
        if source is None:
            self.warnings.append(f"missing-passage: {title}|{passage}")
            return
        self.transclusion_depth += 1
        try:
            self.scan(_preprocess(source), chain + (title,))
        finally:
            self.transclusion_depth -= 1

    def _handle_link(self, text: str, start: int) -> int:
        end = text.find("]]", start + 2)
        if end < 0:
            self.warnings.append("unterminated link; kept as text")
            self.emit(text[start:])
            return len(text)
        inner = text[start + 2 : end]
        target, _, anchor = inner.partition("|")
        target = target.strip()
        anchor = anchor.strip() if anchor else target
        if target.lower().startswith("category:"):
            # category assignments never transfer from transcluded passages
            if self.transclusion_depth == 0:
                self.raw_categories.append(target.split(":", 1)[1].strip())
            return end + 2
        target = target.split("#")[0].strip()
        if target:
            self.links.append(
                LinkAnnotation(target, anchor, self.length, self.length + len(anchor))
            )
        self.emit(anchor)
        return end + 2

    def _handle_tag(self, text: str, start: int) -> int:
        m = _TAG_RE.match(text, start)
        if m is None:
            self.emit("<")
            return start + 1
        tag = m.group()
        lowered = tag.lower()
        if re.fullmatch(r"<br\s*/?\s*>", lowered):
            self.emit("\n")
            return m.end()
        if lowered in ("<nowiki>", "</nowiki>"):
            return m.end()
        self.warnings.append(f"unknown-tag: {tag}")
        self.emit(tag)
        return m.end()


def clean_wikitext(page: RawPage, resolver: Callable[[str], RawPage | None] | None = None) -> CleanText:
    """Strip markup from one page; pure given the resolver's contents.

    Idempotent on already-clean text: output text contains no link or
    reference markup, so cleaning it again is the identity.
    """
    cleaner = _Cleaner(resolver or (lambda title: None))
    cleaner.scan(_preprocess(page.wikitext), (page.title,))
    return CleanText(
        text="".join(cleaner.parts),
        links=cleaner.links,
        raw_categories=cleaner.raw_categories,
        warnings=cleaner.warnings,
    )
