"""Shared fixtures: the 12-entry reference corpus and random corpus generators.

The reference corpus mirrors the bundled wikitext fixture: 4 definitions,
6 theorems, 1 lemma, 1 corollary, wired so the premise graph has exactly
10 nodes and 14 edges (two entries stay disconnected).
"""
from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from premsel.corpus import Entry, EntryKind, Proof

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "acceptance" in getattr(report, "keywords", {}):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE_RESULTS.append((name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome:>6}] {name}")


def make_fixture_entries() -> list[Entry]:
    def d(eid, title, text, defs=(), cats=("Number Theory",)):
        return Entry(
            id=eid, kind=EntryKind.DEFINITION, title=title, statement_text=text,
            categories=frozenset(cats), supporting_definitions=frozenset(defs),
        )

    def prop(eid, kind, title, text, defs=(), proofs=(), derived=None, cats=("Number Theory",)):
        return Entry(
            id=eid, kind=kind, title=title, statement_text=text,
            categories=frozenset(cats), supporting_definitions=frozenset(defs),
            proofs=tuple(Proof(p_text, frozenset(p_refs)) for p_text, p_refs in proofs),
            derived_from=derived,
        )

    return [
        d("definition:integer", "Definition:Integer",
          "The integers are the set $\\Z$ of whole numbers.", defs=(), cats=("Numbers",)),
        d("definition:divisor", "Definition:Divisor",
          "$m$ divides $n$ iff $n = k m$ for some integer $k$.",
          defs=("definition:integer",)),
        d("definition:prime_number", "Definition:Prime Number",
          "A prime is a natural number $p > 1$ whose only positive divisors are $1$ and $p$.",
          defs=("definition:integer", "definition:divisor")),
        d("definition:real_function", "Definition:Real Function",
          "A real function is a mapping $f: \\R \\to \\R$.", defs=(), cats=("Real Analysis",)),
        prop("euclid's_theorem", EntryKind.THEOREM, "Euclid's Theorem",
             "There are infinitely many prime numbers.",
             defs=("definition:prime_number",),
             proofs=[("Consider $N = p_1 \\cdots p_n + 1$ and take a prime divisor.",
                      ("existence_of_prime_divisor",))]),
        prop("euclid's_theorem/corollary", EntryKind.COROLLARY, "Euclid's Theorem/Corollary",
             "There is no largest prime number.",
             proofs=[("Immediate from the main theorem.", ("euclid's_theorem",))],
             derived="euclid's_theorem"),
        prop("existence_of_prime_divisor", EntryKind.THEOREM, "Existence of Prime Divisor",
             "Every natural number $n > 1$ has a prime divisor.",
             defs=("definition:prime_number",),
             proofs=[("Take the smallest divisor exceeding $1$.",
                      ("existence_of_prime_divisor/lemma_1",))]),
        prop("existence_of_prime_divisor/lemma_1", EntryKind.LEMMA,
             "Existence of Prime Divisor/Lemma 1",
             "Every natural number $n > 1$ has a smallest divisor greater than $1$.",
             proofs=[("The divisor set is nonempty and well ordered.", ())],
             derived="existence_of_prime_divisor"),
        prop("fundamental_theorem_of_arithmetic", EntryKind.THEOREM,
             "Fundamental Theorem of Arithmetic",
             "Every natural number greater than $1$ factors uniquely into primes.",
             defs=("definition:prime_number",),
             proofs=[("Strong induction via prime divisors.",
                      ("existence_of_prime_divisor",))]),
        prop("fermat's_little_theorem", EntryKind.THEOREM, "Fermat's Little Theorem",
             "If $p$ is prime then $a^p \\equiv a \\pmod p$.",
             defs=("definition:prime_number",),
             proofs=[("Induction on $a$ using unique factorization.",
                      ("fundamental_theorem_of_arithmetic",)),
                     ("Expand $(a+1)^p$ binomially.", ("binomial_theorem",))]),
        prop("binomial_theorem", EntryKind.THEOREM, "Binomial Theorem",
             "$(x + y)^n = \\sum_{k=0}^n \\binom{n}{k} x^k y^{n-k}$ for integers.",
             defs=("definition:integer",),
             proofs=[("Induction on $n$ with Pascal's rule.", ())],
             cats=("Algebra",)),
        prop("equality_is_reflexive", EntryKind.THEOREM, "Equality is Reflexive",
             "For every object $x$: $x = x$.",
             proofs=[("Axiomatic.", ())],
             cats=("Set Theory",)),
    ]


FIXTURE_EDGES = [
    ("definition:divisor", "definition:integer"),
    ("definition:prime_number", "definition:divisor"),
    ("definition:prime_number", "definition:integer"),
    ("euclid's_theorem", "definition:prime_number"),
    ("euclid's_theorem", "existence_of_prime_divisor"),
    ("euclid's_theorem/corollary", "euclid's_theorem"),
    ("existence_of_prime_divisor", "definition:prime_number"),
    ("existence_of_prime_divisor", "existence_of_prime_divisor/lemma_1"),
    ("fundamental_theorem_of_arithmetic", "definition:prime_number"),
    ("fundamental_theorem_of_arithmetic", "existence_of_prime_divisor"),
    ("fermat's_little_theorem", "definition:prime_number"),
    ("fermat's_little_theorem", "fundamental_theorem_of_arithmetic"),
    ("fermat's_little_theorem", "binomial_theorem"),
    ("binomial_theorem", "definition:integer"),
]


@pytest.fixture
def fixture_corpus() -> list[Entry]:
    return make_fixture_entries()


_VOCAB = [
    "prime", "number", "integer", "divisor", "function", "group", "set",
    "continuous", "finite", "sum", "product", "$x$", "$y$", "$x + y$",
    "$p > 1$", "theorem", "holds", "every", "exists", "unique",
]


def random_valid_corpus(rng: random.Random, max_entries: int = 20) -> list[Entry]:
    """Small random corpus satisfying every validation invariant, with random
    premise edges; used for oracle-equivalence sweeps."""
    n_defs = rng.randint(1, max(1, max_entries // 3))
    n_props = rng.randint(1, max_entries - n_defs)
    def_ids = [f"definition:d{i}" for i in range(n_defs)]
    prop_ids = [f"theorem_{i}" for i in range(n_props)]

    def text() -> str:
        return " ".join(rng.choice(_VOCAB) for _ in range(rng.randint(3, 12)))

    entries = []
    for did in def_ids:
        others = [d for d in def_ids if d != did]
        supports = rng.sample(others, k=min(len(others), rng.randint(0, 2)))
        entries.append(Entry(
            id=did, kind=EntryKind.DEFINITION, title=did, statement_text=text(),
            supporting_definitions=frozenset(supports),
        ))
    for pid in prop_ids:
        supports = rng.sample(def_ids, k=min(len(def_ids), rng.randint(0, 2)))
        others = [p for p in prop_ids if p != pid]
        n_proofs = rng.randint(0, 2)
        proofs = tuple(
            Proof(text(), frozenset(rng.sample(others, k=min(len(others), rng.randint(0, 3)))))
            for _ in range(n_proofs)
        )
        entries.append(Entry(
            id=pid, kind=EntryKind.THEOREM, title=pid, statement_text=text(),
            supporting_definitions=frozenset(supports), proofs=proofs,
        ))
    return entries
