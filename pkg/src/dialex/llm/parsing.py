"""Normalization of raw model output into labels, words, or IF errors.

The parsing rules are this package's policy, centralized and versioned
here so a reported instruction-following (IF) error rate is always
attributable to one specific parser version.
"""

from __future__ import annotations

from dataclasses import dataclass

from dialex.dataset import LABELS
from dialex.metrics import IF_ERROR

PARSER_VERSION = "1"

# Symmetric quote pairs stripped from the outside of an answer.
_QUOTE_PAIRS = (
    ('"', '"'),
    ("'", "'"),
    ("“", "”"),
    ("„", "“"),
    ("‘", "’"),
    ("‚", "‘"),
    ("«", "»"),
    ("»", "«"),
    ("`", "`"),
)

_TRAILING_PUNCTUATION = ".,!?:;"


@dataclass(frozen=True)
class ParsedJudgment:
    """Label outcome of one judgment answer, or IF_ERROR."""

    outcome: str
    raw: str


@dataclass(frozen=True)
class ParsedTranslation:
    """Single-word outcome of one translation answer, or IF_ERROR."""

    outcome: str
    raw: str


def strip_quotes(text: str) -> str:
    """Remove one symmetric layer of surrounding quotes, repeatedly."""
    while len(text) >= 2:
        for opener, closer in _QUOTE_PAIRS:
            if text.startswith(opener) and text.endswith(closer):
                text = text[len(opener):-len(closer)].strip()
                break
        else:
            return text
    return text


def parse_judgment(raw: str) -> ParsedJudgment:
    """Trim, unquote, drop at most one trailing punctuation mark, lowercase.

    Anything that is not exactly one of the three labels afterwards is an
    instruction-following error; a label is never invented.
    """
    text = strip_quotes(raw.strip())
    if text and text[-1] in _TRAILING_PUNCTUATION:
        text = text[:-1]
    # Punctuation can sit outside the quotes ("'yes'."), so unquote again.
    text = strip_quotes(text.strip()).lower()
    if text in LABELS:
        return ParsedJudgment(text, raw)
    return ParsedJudgment(IF_ERROR, raw)


def parse_translation(raw: str) -> ParsedTranslation:
    """Trim, unquote, drop one final period; require exactly one word.

    Case is preserved: translation scoring is case-sensitive. Zero or
    several whitespace-delimited tokens are an instruction-following
    error.
    """
    text = strip_quotes(raw.strip())
    if text.endswith("."):
        text = text[:-1]
    tokens = text.split()
    if len(tokens) != 1:
        return ParsedTranslation(IF_ERROR, raw)
    word = strip_quotes(tokens[0])
    if not word:
        return ParsedTranslation(IF_ERROR, raw)
    return ParsedTranslation(word, raw)
