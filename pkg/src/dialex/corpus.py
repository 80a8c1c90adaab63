"""Corpus ingestion: raw dialect text and pre-tagged standard-language text.

Two input shapes are supported. The dialect corpus is plain UTF-8 text,
either one sentence per line or wiki-extract paragraphs that get split on
sentence-final punctuation. The standard-language corpus arrives already
lemmatized and POS-tagged as a 3-column file (surface, lemma, upos),
tab-separated, with blank lines separating sentences and ``#`` comments;
tagging itself happens out of process.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

from dialex.errors import CorpusDecodeError, CorpusFormatError

# Universal POS tag inventory (17 tags).
UPOS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})

DIALECT_FORMATS = ("plain-lines", "wiki-extract")

_DOC_DIRECTIVE = re.compile(r"^#\s*doc\s*=\s*(.+?)\s*$")

# Maximal runs of Unicode letters, allowing hyphens/apostrophes between
# letters ("d'Wiesn", "Baden-Württemberg"); digits and punctuation drop out.
_WORD = re.compile(r"[^\W\d_]+(?:['’-][^\W\d_]+)*")

# Characters that may open a sentence besides an uppercase letter.
_OPENERS = "\"'«»„“”‚‘(["

_SENT_END = re.compile(r"[.!?]")


@dataclass(frozen=True)
class SentenceRecord:
    """One sentence of a corpus, addressable as (doc_id, sentence_index)."""

    doc_id: str
    sentence_index: int
    text: str


@dataclass(frozen=True)
class TaggedToken:
    """One token of the tagged standard-language corpus."""

    surface: str
    lemma: str
    upos: str
    sentence_ref: tuple[str, int]


Source = Union[str, bytes, IO[str], IO[bytes]]


def _decode_lines(source: Source) -> Iterator[str]:
    """Read a source line by line, decoding byte sources as UTF-8.

    Decode failures report the byte offset of the offending byte within
    the whole source, not within its line.
    """
    if isinstance(source, (str, bytes)):
        raw_lines = source.splitlines(keepends=True)
    else:
        raw_lines = source
    offset = 0
    for raw in raw_lines:
        if isinstance(raw, str):
            yield raw.rstrip("\r\n")
            continue
        try:
            yield raw.decode("utf-8").rstrip("\r\n")
        except UnicodeDecodeError as exc:
            raise CorpusDecodeError(offset + exc.start, exc.reason) from exc
        offset += len(raw)


def token_spans(sentence: str) -> Iterator[tuple[int, int, str]]:
    """Yield (start, end, token) for every word token in the sentence."""
    for m in _WORD.finditer(sentence):
        yield m.start(), m.end(), m.group()


def tokenize(sentence: str) -> list[str]:
    """Word tokens of a sentence; letters only, case preserved."""
    return _WORD.findall(sentence)


def split_sentences(text: str) -> list[str]:
    """Split wiki-extract text on ./!/? followed by whitespace and a
    sentence opener (uppercase letter, quote, or bracket)."""
    pieces = []
    start = 0
    for m in _SENT_END.finditer(text):
        k = m.end()
        if k >= len(text) or not text[k].isspace():
            continue
        while k < len(text) and text[k].isspace():
            k += 1
        if k < len(text) and (text[k].isupper() or text[k] in _OPENERS):
            pieces.append(text[start:m.end()])
            start = k
    pieces.append(text[start:])
    return [p.strip() for p in pieces if p.strip()]


def ingest_dialect_corpus(
    source: Source,
    format: str = "plain-lines",
    doc_id: str = "doc0",
) -> Iterator[SentenceRecord]:
    """Parse a raw dialect corpus into a stream of sentence records."""
    if format not in DIALECT_FORMATS:
        raise ValueError(f"unknown dialect corpus format: {format!r}")
    index = 0
    for line in _decode_lines(source):
        if format == "plain-lines":
            sentences = [line.strip()] if line.strip() else []
        else:
            sentences = split_sentences(line)
        for text in sentences:
            yield SentenceRecord(doc_id, index, text)
            index += 1


def ingest_tagged_corpus(source: Source, doc_id: str = "tagged") -> Iterator[TaggedToken]:
    """Parse a 3-column tagged corpus into a stream of tokens.

    Blank lines separate sentences; ``# doc = <id>`` switches documents
    (resetting the sentence counter); other ``#`` lines are comments.
    """
    doc = doc_id
    sent = 0
    in_sentence = False
    for line_no, line in enumerate(_decode_lines(source), start=1):
        if line.startswith("#"):
            m = _DOC_DIRECTIVE.match(line)
            if m:
                if in_sentence:
                    sent += 1
                    in_sentence = False
                doc = m.group(1)
                sent = 0
            continue
        if not line.strip():
            if in_sentence:
                sent += 1
                in_sentence = False
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusFormatError(
                line_no, f"expected 3 tab-separated columns, got {len(cols)}")
        surface, lemma, upos = cols
        if not surface or not lemma:
            raise CorpusFormatError(line_no, "surface and lemma must be non-empty")
        if upos not in UPOS_TAGS:
            raise CorpusFormatError(line_no, f"unknown POS tag {upos!r}")
        in_sentence = True
        yield TaggedToken(surface, lemma, upos, (doc, sent))


def write_tagged_corpus(tokens: Iterable[TaggedToken], out: IO[str]) -> None:
    """Serialize tokens back to the 3-column format (round-trip safe)."""
    prev_ref: tuple[str, int] | None = None
    for tok in tokens:
        doc, sent = tok.sentence_ref
        if prev_ref is None or doc != prev_ref[0]:
            out.write(f"# doc = {doc}\n")
        elif sent != prev_ref[1]:
            out.write("\n")
        out.write(f"{tok.surface}\t{tok.lemma}\t{tok.upos}\n")
        prev_ref = (doc, sent)


def write_sentence_records(records: Iterable[SentenceRecord], out: IO[str]) -> None:
    """Serialize sentences as 3-column TSV (doc_id, index, text).

    Tabs and newlines inside the text would break the table, so they
    collapse to single spaces; word matching is unaffected.
    """
    out.write("doc_id\tsentence_index\ttext\n")
    for rec in records:
        text = rec.text.replace("\t", " ").replace("\n", " ").replace("\r", " ")
        out.write(f"{rec.doc_id}\t{rec.sentence_index}\t{text}\n")


def read_sentence_records(source: IO[str]) -> list[SentenceRecord]:
    header = source.readline().rstrip("\r\n")
    if header != "doc_id\tsentence_index\ttext":
        raise CorpusFormatError(1, f"unexpected header {header!r}")
    records = []
    for line_no, line in enumerate(source, start=2):
        line = line.rstrip("\r\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise CorpusFormatError(line_no, f"expected 3 columns, got {len(parts)}")
        doc_id, index_text, text = parts
        try:
            index = int(index_text)
        except ValueError:
            raise CorpusFormatError(
                line_no, f"sentence_index {index_text!r} is not an integer"
            ) from None
        records.append(SentenceRecord(doc_id, index, text))
    return records


def sentence_records_from_tokens(tokens: Iterable[TaggedToken]) -> list[SentenceRecord]:
    """Reconstruct sentence records (joined surfaces) from a token stream."""
    records: list[SentenceRecord] = []
    current: list[str] = []
    current_ref: tuple[str, int] | None = None
    for tok in tokens:
        if tok.sentence_ref != current_ref:
            if current_ref is not None:
                records.append(SentenceRecord(current_ref[0], current_ref[1],
                                              " ".join(current)))
            current = []
            current_ref = tok.sentence_ref
        current.append(tok.surface)
    if current_ref is not None:
        records.append(SentenceRecord(current_ref[0], current_ref[1], " ".join(current)))
    return records
