"""Wiki source parsing: pages, cleaning, classification, sections,
categories and corpus assembly."""

from .build import BuildReport, BuildResult, build_corpus, load_exclude_tags
from .categories import CategoryMap, load_category_rules
from .classify import Classification, PageKind, classify_page
from .cleaning import CleanText, LinkAnnotation, TransclusionCycleError, clean_wikitext
from .pages import RawPage, XmlParseError, load_pages
from .sections import PageSection, SectionRole, split_sections

__all__ = [
    "BuildReport",
    "BuildResult",
    "CategoryMap",
    "Classification",
    "CleanText",
    "LinkAnnotation",
    "PageKind",
    "PageSection",
    "RawPage",
    "SectionRole",
    "TransclusionCycleError",
    "XmlParseError",
    "build_corpus",
    "classify_page",
    "clean_wikitext",
    "load_category_rules",
    "load_exclude_tags",
    "load_pages",
    "split_sections",
]
