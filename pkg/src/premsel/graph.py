"""Premise dependency graph: construction, corpus statistics, k-hop queries.

Edges point from an entry to each of its premises (union over all proofs).
Entries with no incident edge are not graph nodes, matching the corpus
analysis convention that disconnected entries are left out of the graph.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import Entry, EntryKind, premise_set


@dataclass
class PremiseGraph:
    nodes: frozenset[str]
    edges: tuple[tuple[str, str], ...]          # (from_entry, to_premise), lexicographic
    known_ids: frozenset[str]                   # every corpus id, incl. disconnected
    _succ: dict[str, tuple[str, ...]] = field(default_factory=dict, repr=False)

    def successors(self, entry_id: str) -> tuple[str, ...]:
        return self._succ.get(entry_id, ())

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def build_graph(corpus: Iterable[Entry]) -> PremiseGraph:
    """One edge per (entry, premise) pair; independent of corpus input order."""
    entries = sorted(corpus, key=lambda e: e.id)
    edges: list[tuple[str, str]] = []
    for e in entries:
        for p in sorted(premise_set(e)):
            edges.append((e.id, p))
    edges.sort()
    nodes = frozenset(x for edge in edges for x in edge)
    succ: dict[str, list[str]] = {}
    for src, dst in edges:
        succ.setdefault(src, []).append(dst)
    return PremiseGraph(
        nodes=nodes,
        edges=tuple(edges),
        known_ids=frozenset(e.id for e in entries),
        _succ={k: tuple(v) for k, v in succ.items()},
    )


def k_hop_premises(graph: PremiseGraph, entry_id: str, k: int) -> set[str]:
    """All ids reachable from ``entry_id`` through 1..k premise edges.

    Visited-set BFS, so cycles are tolerated; the start id is never included.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if entry_id not in graph.known_ids:
        raise KeyError(f"unknown entry id: {entry_id!r}")
    reached: set[str] = set()
    frontier = {entry_id}
    for _ in range(k):
        frontier = {nxt for node in frontier for nxt in graph.successors(node)} - reached - {entry_id}
        if not frontier:
            break
        reached |= frontier
    return reached


def cycle_groups(graph: PremiseGraph) -> list[list[str]]:
    """Groups of entries involved in cyclic premise dependencies.

    Wiki cross-references can produce accidental cycles; each nontrivial
    strongly connected component is reported as one sorted group.  Iterative
    Tarjan, safe on corpus-sized graphs.
    """
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    groups: list[list[str]] = []

    for root in sorted(graph.nodes):
        if root in index:
            continue
        work = [(root, iter(graph.successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, succ_it = work[-1]
            advanced = False
            for nxt in succ_it:
                if nxt not in index:
                    index[nxt] = lowlink[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(graph.successors(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    lowlink[node] = min(lowlink[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    groups.append(sorted(component))
    return sorted(groups)


@dataclass(frozen=True)
class GraphStats:
    counts_by_kind: dict[str, int]
    premise_count_histogram: dict[int, int]     # per-entry premise count -> #entries
    dependant_count_histogram: dict[int, int]   # in-degree -> #entries (cited at least once)
    node_count: int
    edge_count: int
    max_premise_entry: tuple[str, int] | None
    avg_symbols_per_statement: float

    def to_obj(self) -> dict:
        return {
            "counts_by_kind": dict(sorted(self.counts_by_kind.items())),
            "total_entries": sum(self.counts_by_kind.values()),
            "premise_count_histogram": {str(k): v for k, v in sorted(self.premise_count_histogram.items())},
            "dependant_count_histogram": {str(k): v for k, v in sorted(self.dependant_count_histogram.items())},
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "max_premise_entry": list(self.max_premise_entry) if self.max_premise_entry else None,
            "avg_symbols_per_statement": self.avg_symbols_per_statement,
        }


def histogram_range_total(histogram: dict[int, int], lo: int, hi: int) -> int:
    """Entries whose bucket lies in [lo, hi]; the published aggregate ranges
    (e.g. one-to-five premises) are computed on top of the unit buckets."""
    return sum(count for bucket, count in histogram.items() if lo <= bucket <= hi)


def compute_stats(corpus: Sequence[Entry], graph: PremiseGraph) -> GraphStats:
    """Exact per-kind counts, premise/dependant histograms and symbol average.

    Symbols are counted as characters of the statement text, math included.
    """
    corpus = list(corpus)
    counts_by_kind = Counter(e.kind.value for e in corpus)
    for kind in EntryKind:
        counts_by_kind.setdefault(kind.value, 0)

    premise_counts = {e.id: len(premise_set(e)) for e in corpus}
    premise_hist = Counter(c for c in premise_counts.values() if c >= 1)

    indegree = Counter(dst for _, dst in graph.edges)
    dependant_hist = Counter(indegree.values())

    max_premise_entry = None
    if any(premise_counts.values()):
        best = max(sorted(premise_counts), key=lambda eid: premise_counts[eid])
        max_premise_entry = (best, premise_counts[best])

    avg_symbols = (
        sum(len(e.statement_text) for e in corpus) / len(corpus) if corpus else 0.0
    )

    return GraphStats(
        counts_by_kind=dict(counts_by_kind),
        premise_count_histogram=dict(premise_hist),
        dependant_count_histogram=dict(dependant_hist),
        node_count=graph.node_count,
        edge_count=graph.edge_count,
        max_premise_entry=max_premise_entry,
        avg_symbols_per_statement=avg_symbols,
    )
