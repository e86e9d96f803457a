"""Packaged data: default category rules, maintenance-tag blocklist, and the
bundled 12-page wikitext fixture."""
from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_text(name: str) -> str:
    return (resources.files(__name__) / name).read_text(encoding="utf-8")


def fixture_wiki_dir() -> Path:
    """Directory of the bundled mini wiki (12 content pages)."""
    return Path(str(resources.files(__name__) / "fixture_wiki"))
