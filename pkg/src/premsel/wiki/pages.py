"""Raw page acquisition from a MediaWiki XML export or a directory of
one-file-per-page wikitext (``*.wiki``, subdirectories encode ``/`` subpage
titles)."""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

# namespace prefixes recognized in page titles; "definition" is a content
# namespace, the rest are excluded from the corpus
KNOWN_NAMESPACES = frozenset({
    "talk", "user", "user talk", "help", "help talk", "template",
    "template talk", "category", "category talk", "file", "file talk",
    "image", "mediawiki", "special", "project", "book", "axiom",
    "definition", "symbols", "mathematician", "source", "proofwiki",
    "definition talk", "axiom talk", "symbols talk", "mathematician talk",
    "book talk", "source talk", "proofwiki talk",
})


class XmlParseError(ValueError):
    """Malformed XML export; carries the failing byte offset."""

    def __init__(self, message: str, byte_offset: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset


@dataclass(frozen=True)
class RawPage:
    title: str
    wikitext: str
    namespace: str = ""

    def __post_init__(self):
        if not self.title:
            raise ValueError("page title must be nonempty")


def split_namespace(title: str) -> tuple[str, str]:
    """(namespace, rest) when the title carries a known prefix, else ("", title)."""
    if ":" in title:
        prefix, rest = title.split(":", 1)
        if prefix.strip().lower() in KNOWN_NAMESPACES:
            return prefix.strip(), rest.strip()
    return "", title


def _page_from_title(title: str, wikitext: str) -> RawPage:
    namespace, _ = split_namespace(title)
    return RawPage(title=title, wikitext=wikitext, namespace=namespace)


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _byte_offset(path: Path, line: int, column: int) -> int:
    data = path.read_bytes()
    lines = data.split(b"\n")
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


def _load_xml(path: Path) -> list[RawPage]:
    pages: list[RawPage] = []
    title: str | None = None
    text_parts: list[str] = []
    try:
        for event, elem in ET.iterparse(str(path), events=("start", "end")):
            name = _localname(elem.tag)
            if event == "start" and name == "page":
                title, text_parts = None, []
            elif event == "end":
                if name == "title":
                    title = (elem.text or "").strip()
                elif name == "text":
                    text_parts.append(elem.text or "")
                elif name == "page":
                    if title:
                        pages.append(_page_from_title(title, "".join(text_parts)))
                    elem.clear()
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(path, line, column)
        raise XmlParseError(
            f"{path}: malformed XML at byte offset {offset} (line {line}, column {column}): {exc.msg}",
            byte_offset=offset,
        ) from exc
    return pages


def _load_directory(path: Path) -> list[RawPage]:
    pages = []
    for file in sorted(path.rglob("*.wiki")):
        title = str(file.relative_to(path).with_suffix("")).replace("\\", "/")
        pages.append(_page_from_title(title, file.read_text(encoding="utf-8")))
    return pages


def load_pages(source: str | Path) -> list[RawPage]:
    """One RawPage per page, deterministically sorted by title."""
    source = Path(source)
    if source.is_dir():
        pages = _load_directory(source)
    elif source.is_file():
        pages = _load_xml(source)
    else:
        raise FileNotFoundError(f"page source not found: {source}")
    return sorted(pages, key=lambda p: p.title)
