"""Tokenization of mixed word/math text under three granularity strategies.

Math regions are delimited by ``$...$`` (or ``$$...$$`` for display mode) and
their content is carried verbatim.  The three strategies:

* ``expr-word``   — every math region is a single token.
* ``tokenised``   — math regions split on operators, relations, braces,
                    numbers and LaTeX command boundaries.
* ``char``        — the whole text becomes a sequence of single characters.

Plain words are lowercased under every strategy except ``char``, which
preserves the text exactly.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum

logger = logging.getLogger(__name__)


class SegmentKind(str, Enum):
    WORD = "Word"
    MATH = "MathRegion"


class Strategy(str, Enum):
    EXPRESSION_AS_WORD = "expr-word"
    TOKENISED_EXPRESSION = "tokenised"
    CHAR_LEVEL = "char"


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    content: str


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[str, ...]
    strategy: Strategy
    source_id: str = ""


# plain-text side: word runs (letters/digits/apostrophes/hyphens) or single
# punctuation characters
_WORD_RE = re.compile(r"[\w'\u2019-]+|[^\w\s]", re.UNICODE)

# math side: LaTeX command, number, letter run, or any single non-space char
# (operators, relations and braces each become their own token); whitespace
# separates tokens and is dropped
_MATH_TOKEN_RE = re.compile(
    r"\\[a-zA-Z]+\*?"          # \command
    r"|\\."                    # escaped single char, e.g. \{
    r"|[0-9]+(?:\.[0-9]+)?"    # number
    r"|[^\W\d_]+"              # identifier (letter run)
    r"|\S",                    # operator / relation / brace / anything else
    re.UNICODE,
)


def _find_closing(text: str, start: int, delim: str) -> int:
    """Index of the next unescaped ``delim`` at or after ``start``, or -1."""
    i = start
    while i < len(text):
        j = text.find(delim, i)
        if j < 0:
            return -1
        backslashes = 0
        k = j - 1
        while k >= 0 and text[k] == "\\":
            backslashes += 1
            k -= 1
        if backslashes % 2 == 0:
            return j
        i = j + 1
    return -1


def segment(text: str) -> list[Segment]:
    """Split text into Word and MathRegion segments.

    An unbalanced ``$`` closes its region at the end of the text and logs a
    warning; the call still succeeds.
    """
    segments: list[Segment] = []
    pos = 0
    n = len(text)
    while pos < n:
        open_at = _find_closing(text, pos, "$")
        plain_end = open_at if open_at >= 0 else n
        for m in _WORD_RE.finditer(text, pos, plain_end):
            segments.append(Segment(SegmentKind.WORD, m.group()))
        if open_at < 0:
            break
        delim = "$$" if text.startswith("$$", open_at) else "$"
        body_start = open_at + len(delim)
        close_at = _find_closing(text, body_start, delim)
        if close_at < 0:
            logger.warning("unbalanced math delimiter at offset %d; region closed at end of text", open_at)
            close_at = n
            pos = n
        else:
            pos = close_at + len(delim)
        content = text[body_start:close_at].strip()
        if content:
            segments.append(Segment(SegmentKind.MATH, content))
    return segments


def tokenize_math(content: str) -> list[str]:
    """Operator-level tokens of one math region."""
    return _MATH_TOKEN_RE.findall(content)


def tokenize(text: str, strategy: Strategy, source_id: str = "", keep_math_delimiters: bool = True) -> TokenStream:
    """Tokenize ``text`` under ``strategy``; deterministic and pure.

    ``keep_math_delimiters`` only affects ``char``: by default the ``$``
    delimiters stay in the character sequence so the stream is invertible.
    """
    strategy = Strategy(strategy)
    if strategy is Strategy.CHAR_LEVEL:
        chars = list(text) if keep_math_delimiters else [c for c in text if c != "$"]
        return TokenStream(tuple(chars), strategy, source_id)

    tokens: list[str] = []
    for seg in segment(text):
        if seg.kind is SegmentKind.WORD:
            tokens.append(seg.content.lower())
        elif strategy is Strategy.EXPRESSION_AS_WORD:
            tokens.append(seg.content)
        else:
            tokens.extend(tokenize_math(seg.content))
    return TokenStream(tuple(t for t in tokens if t), strategy, source_id)
