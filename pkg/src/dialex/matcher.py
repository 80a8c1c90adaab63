"""k-nearest-neighbor matching of standard lemmas against a dialect vocabulary.

Comparing every lemma with every dialect term is quadratic and intractable
at full corpus scale. The indexes here prune the scan, one by the length
lower bound (|len(a) - len(b)| <= distance(a, b)), one by the metric
triangle inequality, while returning exactly what an exhaustive scan
would: the same distance multiset for every query.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import logging
import random
from dataclasses import dataclass, field
from typing import IO, Iterable, Protocol

from dialex.corpus import SentenceRecord, token_spans
from dialex.editdist import levenshtein, levenshtein_bounded
from dialex.errors import PipelineError
from dialex.vocab import DialectTermEntry, LemmaEntry, PipelineConfig

log = logging.getLogger(__name__)

INDEX_KINDS = ("length-bucket", "bk-tree")


@dataclass(frozen=True)
class CandidatePair:
    """One lemma/term candidate with its edit distance and rank."""

    lemma: str
    pos_max: str
    term: str
    distance: int
    rank: int
    term_freq: int


@dataclass(frozen=True)
class UsageContext:
    """A snippet showing a term used inside one corpus sentence."""

    term: str
    snippet: str
    source: tuple[str, int]


@dataclass
class CandidateRow:
    """All candidates of one lemma, with usage contexts per term."""

    lemma: str
    pos_max: str
    lemma_freq: int
    pairs: list[CandidatePair]
    contexts: dict[str, list[UsageContext]] = field(default_factory=dict)
    truncated: bool = False


class NeighborIndex(Protocol):
    """Exact nearest-neighbor search over a fixed dialect vocabulary.

    Implementations are immutable after construction and safe to query
    concurrently.
    """

    def __len__(self) -> int: ...

    def freq(self, term: str) -> int: ...

    def range_knn(self, query: str, k: int) -> list[tuple[str, int]]:
        """All (term, distance) pairs with distance <= the k-th smallest.

        The result therefore contains every strict top-(k-1) term plus the
        entire tie cohort at the boundary distance. Fewer than k terms in
        the vocabulary means the whole vocabulary is returned.
        """
        ...


def _merge_freqs(vocab: Iterable[DialectTermEntry]) -> dict[str, int]:
    freqs: dict[str, int] = {}
    for entry in vocab:
        freqs[entry.surface] = freqs.get(entry.surface, 0) + entry.freq
    if not freqs:
        raise ValueError("cannot index an empty vocabulary")
    return freqs


class _KnnScan:
    """Shared bookkeeping for adaptive-radius scans.

    Tracks the k smallest distances seen so far; `tau` is the current
    pruning radius (k-th smallest, or None while fewer than k terms were
    seen). Terms are only recorded when within tau, so the final filter
    pass yields exactly the <= k-th-smallest set.
    """

    def __init__(self, k: int):
        self.k = k
        self.found: list[tuple[int, str]] = []
        self._heap: list[int] = []
        self.tau: int | None = None

    def offer(self, term: str, dist: int) -> None:
        if self.tau is not None and dist > self.tau:
            return
        self.found.append((dist, term))
        if len(self._heap) < self.k:
            heapq.heappush(self._heap, -dist)
        elif dist < -self._heap[0]:
            heapq.heapreplace(self._heap, -dist)
        if len(self._heap) == self.k:
            self.tau = -self._heap[0]

    def result(self) -> list[tuple[str, int]]:
        boundary = self.tau
        return [
            (term, dist)
            for dist, term in self.found
            if boundary is None or dist <= boundary
        ]


class LengthBucketIndex:
    """Buckets terms by length; a query visits buckets in growing length gap.

    A bucket whose length gap already exceeds the current pruning radius
    cannot contain a closer term, so the scan stops there.
    """

    def __init__(self, vocab: Iterable[DialectTermEntry]):
        self._freqs = _merge_freqs(vocab)
        self._buckets: dict[int, list[str]] = {}
        for term in self._freqs:
            self._buckets.setdefault(len(term), []).append(term)
        self._lengths = sorted(self._buckets)

    def __len__(self) -> int:
        return len(self._freqs)

    def freq(self, term: str) -> int:
        return self._freqs[term]

    def range_knn(self, query: str, k: int) -> list[tuple[str, int]]:
        qlen = len(query)
        scan = _KnnScan(k)
        max_delta = max(qlen - self._lengths[0], self._lengths[-1] - qlen, 0)
        for delta in range(max_delta + 1):
            if scan.tau is not None and delta > scan.tau:
                break
            lengths = {qlen - delta, qlen + delta}
            for length in sorted(lengths):
                for term in self._buckets.get(length, ()):
                    if scan.tau is None:
                        scan.offer(term, levenshtein(query, term))
                    else:
                        d = levenshtein_bounded(query, term, scan.tau)
                        if d <= scan.tau:
                            scan.offer(term, d)
        return scan.result()


class _BKNode:
    __slots__ = ("term", "children")

    def __init__(self, term: str):
        self.term = term
        self.children: dict[int, _BKNode] = {}


class BKTreeIndex:
    """Metric tree keyed by edit distance to each node's term.

    The triangle inequality restricts a query within radius tau at a node
    with distance d to child edges labelled within [d - tau, d + tau].
    """

    def __init__(self, vocab: Iterable[DialectTermEntry]):
        self._freqs = _merge_freqs(vocab)
        terms = iter(sorted(self._freqs))
        self._root = _BKNode(next(terms))
        for term in terms:
            node = self._root
            while True:
                d = levenshtein(term, node.term)
                child = node.children.get(d)
                if child is None:
                    node.children[d] = _BKNode(term)
                    break
                node = child

    def __len__(self) -> int:
        return len(self._freqs)

    def freq(self, term: str) -> int:
        return self._freqs[term]

    def range_knn(self, query: str, k: int) -> list[tuple[str, int]]:
        scan = _KnnScan(k)
        stack = [self._root]
        while stack:
            node = stack.pop()
            d = levenshtein(query, node.term)
            scan.offer(node.term, d)
            tau = scan.tau
            for edge, child in node.children.items():
                if tau is None or abs(d - edge) <= tau:
                    stack.append(child)
        return scan.result()


def build_index(
    vocab: Iterable[DialectTermEntry], kind: str = "length-bucket"
) -> NeighborIndex:
    if kind == "length-bucket":
        return LengthBucketIndex(vocab)
    if kind == "bk-tree":
        return BKTreeIndex(vocab)
    raise ValueError(f"unknown index kind {kind!r}; expected one of {INDEX_KINDS}")


def rng_for_lemma(seed: int, lemma: str) -> random.Random:
    """Generator whose stream depends only on (seed, lemma).

    Deriving per-lemma streams from a hash keeps output independent of
    the order lemmas are processed in, so parallel runs stay reproducible.
    """
    digest = hashlib.sha256(f"{seed}\x00{lemma}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest, "big"))


def knn(
    lemma: str,
    index: NeighborIndex,
    k: int,
    rng: random.Random,
    pos_max: str = "X",
) -> list[CandidatePair]:
    """The k nearest dialect terms of a lemma, ranked by distance.

    Terms strictly closer than the boundary distance are always included,
    ordered lexicographically within each distance. When the boundary tie
    cohort is larger than the remaining slots, the slot-fillers are drawn
    uniformly from it with rng; their draw order fixes their ranks.
    """
    if k < 1:
        raise ValueError("k must be positive")
    by_dist: dict[int, list[str]] = {}
    for term, dist in index.range_knn(lemma, k):
        by_dist.setdefault(dist, []).append(term)
    selected: list[tuple[str, int]] = []
    remaining = k
    for dist in sorted(by_dist):
        group = sorted(by_dist[dist])
        if len(group) <= remaining:
            selected.extend((term, dist) for term in group)
            remaining -= len(group)
        else:
            selected.extend((term, dist) for term in rng.sample(group, remaining))
            remaining = 0
            break
    if remaining:
        log.warning(
            "vocabulary has only %d terms; lemma %r gets fewer than k=%d candidates",
            len(index), lemma, k,
        )
    return [
        CandidatePair(lemma, pos_max, term, dist, rank, index.freq(term))
        for rank, (term, dist) in enumerate(selected, start=1)
    ]


class SentenceIndex:
    """Token-boundary occurrence index over sentence records.

    Occurrences are stored in corpus order (record order, then position
    within the sentence).
    """

    def __init__(self, records: Iterable[SentenceRecord]):
        self.records = list(records)
        self._occurrences: dict[str, list[tuple[int, int, int]]] = {}
        for i, rec in enumerate(self.records):
            for start, end, token in token_spans(rec.text):
                self._occurrences.setdefault(token, []).append((i, start, end))

    def occurrences(self, term: str) -> list[tuple[SentenceRecord, int, int]]:
        return [
            (self.records[i], start, end)
            for i, start, end in self._occurrences.get(term, [])
        ]


def extract_contexts(
    term: str, corpus: SentenceIndex, c: int, window: int
) -> list[UsageContext]:
    """Up to c snippets of the term in use, first corpus occurrences first.

    A snippet spans at most `window` characters on each side of the term
    and never crosses its sentence boundary. A term absent from the corpus
    yields no contexts.
    """
    contexts = []
    for rec, start, end in corpus.occurrences(term)[:c]:
        snippet = rec.text[max(0, start - window):end + window]
        contexts.append(UsageContext(term, snippet, (rec.doc_id, rec.sentence_index)))
    return contexts


def build_candidate_table(
    standard: list[LemmaEntry],
    dialect: list[DialectTermEntry],
    corpus: SentenceIndex | Iterable[SentenceRecord],
    config: PipelineConfig,
    index_kind: str = "length-bucket",
) -> list[CandidateRow]:
    """One row of k ranked candidates (with contexts) per standard lemma.

    Output order follows the standard vocabulary; with a fixed seed the
    table is fully deterministic. Expects share-filtered vocabularies: a
    distance-0 pair means the filter was skipped and is an error.
    """
    if not isinstance(corpus, SentenceIndex):
        corpus = SentenceIndex(corpus)
    index = build_index(dialect, index_kind)
    rows = []
    for entry in standard:
        rng = rng_for_lemma(config.seed, entry.lemma)
        pairs = knn(entry.lemma, index, config.k, rng, pos_max=entry.pos_max)
        if pairs and pairs[0].distance == 0:
            raise PipelineError(
                f"lemma {entry.lemma!r} is still present in the dialect "
                "vocabulary; shared tokens must be filtered before matching"
            )
        contexts = {
            p.term: extract_contexts(p.term, corpus, config.c, config.window)
            for p in pairs
        }
        rows.append(
            CandidateRow(
                lemma=entry.lemma,
                pos_max=entry.pos_max,
                lemma_freq=entry.freq,
                pairs=pairs,
                contexts=contexts,
                truncated=len(pairs) < config.k,
            )
        )
    return rows


def write_candidate_table(rows: Iterable[CandidateRow], out: IO[str]) -> None:
    """JSONL export, one object per candidate pair."""
    for row in rows:
        for pair in row.pairs:
            obj = {
                "lemma": pair.lemma,
                "pos_max": pair.pos_max,
                "lemma_freq": row.lemma_freq,
                "term": pair.term,
                "term_freq": pair.term_freq,
                "distance": pair.distance,
                "rank": pair.rank,
                "contexts": [
                    {
                        "snippet": ctx.snippet,
                        "doc_id": ctx.source[0],
                        "sentence_index": ctx.source[1],
                    }
                    for ctx in row.contexts.get(pair.term, [])
                ],
            }
            out.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_candidate_table(lines: Iterable[str]) -> list[CandidateRow]:
    rows: list[CandidateRow] = []
    current: CandidateRow | None = None
    for line in lines:
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        if current is None or current.lemma != obj["lemma"]:
            current = CandidateRow(obj["lemma"], obj["pos_max"], obj["lemma_freq"], [])
            rows.append(current)
        current.pairs.append(
            CandidatePair(
                lemma=obj["lemma"],
                pos_max=obj["pos_max"],
                term=obj["term"],
                distance=obj["distance"],
                rank=obj["rank"],
                term_freq=obj["term_freq"],
            )
        )
        current.contexts[obj["term"]] = [
            UsageContext(obj["term"], c["snippet"], (c["doc_id"], c["sentence_index"]))
            for c in obj["contexts"]
        ]
    return rows
