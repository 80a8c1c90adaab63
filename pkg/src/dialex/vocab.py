"""Vocabulary construction for both sides of the pair-matching pipeline.

The standard side keeps the top-n lemmas with their dominant POS tag; the
dialect side keeps every distinct word token (spelling variants make many
dialect terms rare, so no frequency cutoff is applied). Tokens shared
between the two vocabularies are filtered off the dialect side.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable

from dialex.corpus import SentenceRecord, TaggedToken, tokenize

# Standard-vocab entries must be words, not punctuation or symbols.
EXCLUDED_VOCAB_TAGS = frozenset({"PUNCT", "SYM"})

_HAS_LETTER = re.compile(r"[^\W\d_]")

# Tie-break order for the dominant POS tag of a lemma; remaining tags
# rank below these, alphabetically.
_POS_PRIORITY = {"NOUN": 0, "PROPN": 1, "VERB": 2, "ADJ": 3, "ADV": 4}


@dataclass(frozen=True)
class LemmaEntry:
    """A standard-language lemma with its dominant POS tag and frequency."""

    lemma: str
    pos_max: str
    freq: int
    pos_counts: dict[str, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class DialectTermEntry:
    """A dialect surface form and its corpus frequency."""

    surface: str
    freq: int


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs of the candidate-extraction pipeline."""

    n: int = 10000
    k: int = 10
    c: int = 3
    window: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.window < 1:
            raise ValueError("n, k, and window must be positive")
        if self.c < 0:
            raise ValueError("c must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


def _pos_key(tag: str) -> tuple[int, str]:
    return (_POS_PRIORITY.get(tag, len(_POS_PRIORITY)), tag)


def dominant_pos(pos_counts: dict[str, int]) -> str:
    """The most frequent tag; ties resolved by the fixed priority order."""
    best = max(pos_counts.values())
    return min((t for t, c in pos_counts.items() if c == best), key=_pos_key)


def build_standard_vocab(tokens: Iterable[TaggedToken], n: int) -> list[LemmaEntry]:
    """Top-n lemmas by frequency, each with its dominant POS tag.

    Punctuation/symbol tokens and letterless lemmas are not words and do
    not enter the vocabulary. Frequency ties break lexicographically so
    builds are deterministic.
    """
    counts: dict[str, Counter] = {}
    for tok in tokens:
        if tok.upos in EXCLUDED_VOCAB_TAGS or not _HAS_LETTER.search(tok.lemma):
            continue
        counts.setdefault(tok.lemma, Counter())[tok.upos] += 1
    entries = [
        LemmaEntry(lemma, dominant_pos(pc), sum(pc.values()), dict(pc))
        for lemma, pc in counts.items()
    ]
    entries.sort(key=lambda e: (-e.freq, e.lemma))
    return entries[:n]


def build_dialect_vocab(sentences: Iterable[SentenceRecord]) -> list[DialectTermEntry]:
    """Every distinct dialect token with its frequency; no cutoff."""
    counts: Counter = Counter()
    for rec in sentences:
        counts.update(tokenize(rec.text))
    return [DialectTermEntry(surface, freq) for surface, freq in counts.items()]


def filter_shared(
    dialect: list[DialectTermEntry],
    standard_lemmas: set[str],
    fold_case: bool = False,
) -> list[DialectTermEntry]:
    """Drop dialect terms that also occur as standard lemmas.

    Matching is case-sensitive by default; ``fold_case`` folds both sides
    before comparing.
    """
    if fold_case:
        folded = {lemma.casefold() for lemma in standard_lemmas}
        return [e for e in dialect if e.surface.casefold() not in folded]
    return [e for e in dialect if e.surface not in standard_lemmas]


def write_standard_vocab(entries: Iterable[LemmaEntry], out: IO[str]) -> None:
    out.write("lemma\tpos_max\tfreq\n")
    for e in entries:
        out.write(f"{e.lemma}\t{e.pos_max}\t{e.freq}\n")


def read_standard_vocab(lines: Iterable[str]) -> list[LemmaEntry]:
    entries = []
    for i, line in enumerate(lines):
        line = line.rstrip("\n")
        if not line or (i == 0 and line.startswith("lemma\t")):
            continue
        lemma, pos_max, freq = line.split("\t")
        entries.append(LemmaEntry(lemma, pos_max, int(freq), {pos_max: int(freq)}))
    return entries


def write_dialect_vocab(entries: Iterable[DialectTermEntry], out: IO[str]) -> None:
    out.write("surface\tfreq\n")
    for e in entries:
        out.write(f"{e.surface}\t{e.freq}\n")


def read_dialect_vocab(lines: Iterable[str]) -> list[DialectTermEntry]:
    entries = []
    for i, line in enumerate(lines):
        line = line.rstrip("\n")
        if not line or (i == 0 and line.startswith("surface\t")):
            continue
        surface, freq = line.split("\t")
        entries.append(DialectTermEntry(surface, int(freq)))
    return entries
