"""Category harmonization: merge raw wiki categories into a reviewed
inventory of mathematical branches and drop branches with too few entries.

A rule maps a raw category name (or its leading subpage segment) onto one
harmonized name.  The shipped default maps each harmonized branch onto
itself, so ``Real Analysis/Sequences`` lands in ``Real Analysis``; site-
specific synonym rules are supplied as a JSON file.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from ..data import data_text


@dataclass
class CategoryMap:
    merge_rules: dict[str, str]
    harmonized: frozenset[str]
    min_count: int = 100

    def __post_init__(self):
        if self.min_count < 1:
            raise ValueError(f"min_count must be >= 1, got {self.min_count}")
        bad = sorted(set(self.merge_rules.values()) - self.harmonized)
        if bad:
            raise ValueError(f"merge rules target unknown harmonized categories: {bad}")

    def map_raw(self, raw: str) -> str | None:
        raw = raw.strip()
        if raw.lower().startswith("category:"):
            raw = raw.split(":", 1)[1].strip()
        if raw in self.merge_rules:
            return self.merge_rules[raw]
        head = raw.split("/", 1)[0].strip()
        return self.merge_rules.get(head)

    def apply(self, raw_by_entry: dict[str, list[str]]) -> dict[str, frozenset[str]]:
        """Harmonize every entry's raw categories, then drop harmonized
        categories with fewer than ``min_count`` member entries."""
        mapped = {
            eid: {h for h in (self.map_raw(c) for c in cats) if h is not None}
            for eid, cats in raw_by_entry.items()
        }
        member_counts = Counter(h for cats in mapped.values() for h in cats)
        keep = {h for h, count in member_counts.items() if count >= self.min_count}
        return {eid: frozenset(cats & keep) for eid, cats in mapped.items()}


def load_category_rules(path: str | Path | None = None, min_count: int = 100) -> CategoryMap:
    """Read a rules file; ``None`` loads the packaged default inventory."""
    if path is None:
        obj = json.loads(data_text("category_rules.json"))
    else:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return CategoryMap(
        merge_rules=dict(obj["rules"]),
        harmonized=frozenset(obj["harmonized"]),
        min_count=min_count,
    )
