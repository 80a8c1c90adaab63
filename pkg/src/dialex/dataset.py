"""Annotation storage, adjudication, agreement, splits, and the dictionary.

Judgments are collected per (pair, annotator) into an append-only JSONL
log; replaying the log reconstructs store state after a crash. Gold
labels come from strict majority adjudication, agreement is measured
with Fleiss' kappa, and adjudicated items compile into the variation
dictionary.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Sequence

from dialex.errors import (
    ConfigError,
    DatasetFormatError,
    LabelValidationError,
    UnknownPairError,
)
from dialex.matcher import CandidateRow

log = logging.getLogger(__name__)

LABELS = ("yes", "inflected", "no")
UNRESOLVED = "unresolved"
SPLITS = ("dev", "test", "unassigned")


def validate_label(label: str) -> str:
    if label not in LABELS:
        raise LabelValidationError(f"label must be one of {LABELS}, got {label!r}")
    return label


@dataclass(frozen=True)
class AnnotationRecord:
    """One annotator's judgment of one candidate pair."""

    pair_id: str
    annotator_id: str
    label: str
    timestamp: datetime

    def to_json(self) -> str:
        obj = {
            "pair_id": self.pair_id,
            "annotator_id": self.annotator_id,
            "label": self.label,
            "ts": self.timestamp.astimezone(timezone.utc).isoformat(),
        }
        return json.dumps(obj, ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> "AnnotationRecord":
        obj = json.loads(line)
        return cls(
            pair_id=obj["pair_id"],
            annotator_id=obj["annotator_id"],
            label=validate_label(obj["label"]),
            timestamp=datetime.fromisoformat(obj["ts"]),
        )


@dataclass
class DatasetItem:
    """One candidate pair as presented to annotators and systems."""

    pair_id: str
    lemma: str
    pos_max: str
    term: str
    distance: int
    contexts: tuple[str, ...] = ()
    gold: str = UNRESOLVED
    split: str = "unassigned"


@dataclass
class VariationDictionary:
    """Per-lemma dialect translations and inflected dialect forms."""

    entries: dict[str, dict[str, list[str]]] = field(default_factory=dict)

    def add(self, lemma: str, term: str, gold: str) -> None:
        entry = self.entries.setdefault(
            lemma, {"translations": [], "inflected_forms": []}
        )
        bucket = "translations" if gold == "yes" else "inflected_forms"
        if term not in entry["translations"] and term not in entry["inflected_forms"]:
            entry[bucket].append(term)


def pair_id_for(lemma: str, term: str) -> str:
    """Opaque id that is stable across runs and table orderings."""
    return hashlib.sha1(f"{lemma}\x1f{term}".encode("utf-8")).hexdigest()[:12]


def items_from_candidate_table(rows: Iterable[CandidateRow]) -> list[DatasetItem]:
    items = []
    for row in rows:
        for pair in row.pairs:
            contexts = tuple(
                ctx.snippet for ctx in row.contexts.get(pair.term, [])[:3]
            )
            items.append(
                DatasetItem(
                    pair_id=pair_id_for(pair.lemma, pair.term),
                    lemma=pair.lemma,
                    pos_max=pair.pos_max,
                    term=pair.term,
                    distance=pair.distance,
                    contexts=contexts,
                )
            )
    return items


class AnnotationStore:
    """Durable annotation collection with newest-wins overwrite semantics.

    Every accepted record is appended to the log file before it becomes
    visible; state is the replay of the log. Writes are serialized by the
    caller (single-writer discipline).
    """

    def __init__(self, log_path: str | Path, known_pairs: set[str] | None = None):
        self.log_path = Path(log_path)
        self.known_pairs = known_pairs
        self._records: dict[tuple[str, str], AnnotationRecord] = {}
        self._tail_torn = False
        if self.log_path.exists():
            self._replay()

    def _replay(self) -> None:
        # A crash can leave the file without a final newline; appending
        # onto that torn line would corrupt the next record too.
        with open(self.log_path, "rb") as fh:
            fh.seek(0, 2)
            if fh.tell() > 0:
                fh.seek(-1, 2)
                self._tail_torn = fh.read(1) != b"\n"
        with open(self.log_path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = AnnotationRecord.from_json(line)
                except (json.JSONDecodeError, KeyError, ValueError):
                    # A torn final line after a crash is recoverable; drop it.
                    log.warning("skipping malformed log line %d", lineno)
                    continue
                self._records[(rec.pair_id, rec.annotator_id)] = rec

    def record(self, rec: AnnotationRecord) -> AnnotationRecord:
        validate_label(rec.label)
        if self.known_pairs is not None and rec.pair_id not in self.known_pairs:
            raise UnknownPairError(f"unknown pair_id {rec.pair_id!r}")
        with open(self.log_path, "a", encoding="utf-8") as fh:
            if self._tail_torn:
                fh.write("\n")
                self._tail_torn = False
            fh.write(rec.to_json() + "\n")
        self._records[(rec.pair_id, rec.annotator_id)] = rec
        return rec

    def annotate(
        self, pair_id: str, annotator_id: str, label: str
    ) -> AnnotationRecord:
        rec = AnnotationRecord(
            pair_id, annotator_id, label, datetime.now(timezone.utc)
        )
        return self.record(rec)

    def labels_for(self, pair_id: str) -> list[AnnotationRecord]:
        return sorted(
            (r for (pid, _), r in self._records.items() if pid == pair_id),
            key=lambda r: r.annotator_id,
        )

    def annotators(self) -> list[str]:
        return sorted({aid for (_, aid) in self._records})

    def labeled_pairs(self) -> set[str]:
        return {pid for (pid, _) in self._records}

    def pairs_labeled_by(self, annotator_id: str) -> set[str]:
        return {pid for (pid, aid) in self._records if aid == annotator_id}

    def label_counts(self, annotator_id: str) -> dict[str, int]:
        """Current labels of one annotator, tallied per class."""
        counts = {label: 0 for label in LABELS}
        for (_, aid), rec in self._records.items():
            if aid == annotator_id:
                counts[rec.label] += 1
        return counts

    def progress(self) -> dict[str, int]:
        """Labels recorded per annotator."""
        counts: dict[str, int] = {}
        for (_, aid) in self._records:
            counts[aid] = counts.get(aid, 0) + 1
        return counts

    def matrix(self, annotators: Sequence[str] | None = None) -> list[list[str]]:
        """Label rows (one per pair) over pairs labeled by every annotator.

        Pair order is sorted by pair_id so the matrix is reproducible.
        """
        if annotators is None:
            annotators = self.annotators()
        rows = []
        for pid in sorted(self.labeled_pairs()):
            row = [
                self._records[(pid, aid)].label
                for aid in annotators
                if (pid, aid) in self._records
            ]
            if len(row) == len(annotators):
                rows.append(row)
        return rows


def adjudicate(records: Sequence[AnnotationRecord | str]) -> str:
    """Strict-majority label of one pair's records, else unresolved.

    Gold labels are never invented: without a strict majority the pair
    stays unresolved and is queued for expert review.
    """
    if not records:
        raise ValueError("adjudicate requires at least one record")
    labels = [r if isinstance(r, str) else r.label for r in records]
    counts: dict[str, int] = {}
    for label in labels:
        counts[validate_label(label)] = counts.get(label, 0) + 1
    best = max(counts.values())
    if best * 2 > len(labels):
        return next(lab for lab in LABELS if counts.get(lab) == best)
    return UNRESOLVED


def apply_adjudication(
    items: Iterable[DatasetItem], store: AnnotationStore
) -> list[DatasetItem]:
    """Set each item's gold label from the store's records."""
    out = []
    for item in items:
        records = store.labels_for(item.pair_id)
        gold = adjudicate(records) if records else UNRESOLVED
        out.append(replace(item, gold=gold))
    return out


def fleiss_kappa(matrix: Sequence[Sequence[str]]) -> float | None:
    """Chance-corrected agreement over items x annotators label rows.

    Returns None when expected agreement is 1 (every rater used one
    single category on every item), where the statistic is undefined.
    """
    if not matrix:
        raise ValueError("empty matrix")
    r = len(matrix[0])
    if r < 2:
        raise ValueError("kappa needs at least 2 annotators per item")
    if any(len(row) != r for row in matrix):
        raise ValueError("all items must have the same number of annotations")
    categories = sorted({label for row in matrix for label in row})
    n = len(matrix)
    counts = []
    for row in matrix:
        counts.append([sum(1 for lab in row if lab == cat) for cat in categories])
    p_bar = sum(
        (sum(c * c for c in row) - r) / (r * (r - 1)) for row in counts
    ) / n
    totals = [sum(row[j] for row in counts) for j in range(len(categories))]
    p_j = [t / (n * r) for t in totals]
    p_e = sum(p * p for p in p_j)
    if p_e == 1.0:
        return None
    return (p_bar - p_e) / (1.0 - p_e)


def split_dev_test(
    items: Sequence[DatasetItem], dev_size: int, seed: int
) -> list[DatasetItem]:
    """Mark dev_size uniformly sampled items dev, the rest test."""
    if dev_size < 1:
        raise ConfigError("dev_size must be positive")
    if len(items) <= dev_size:
        raise ConfigError(
            f"need more than {dev_size} items to hold out {dev_size}, "
            f"got {len(items)}"
        )
    rng = random.Random(seed)
    dev_indices = set(rng.sample(range(len(items)), dev_size))
    return [
        replace(item, split="dev" if i in dev_indices else "test")
        for i, item in enumerate(items)
    ]


def compile_dictionary(items: Iterable[DatasetItem]) -> VariationDictionary:
    """Gold yes-items become translations, inflected-items inflected forms.

    No-items and unresolved items are excluded.
    """
    dictionary = VariationDictionary()
    for item in items:
        if item.gold in ("yes", "inflected"):
            dictionary.add(item.lemma, item.term, item.gold)
    return dictionary


DATASET_COLUMNS = (
    "pair_id", "lemma", "pos_max", "term", "distance", "gold", "split",
    "context_1", "context_2", "context_3",
)


def write_dataset_tsv(items: Iterable[DatasetItem], out: IO[str]) -> None:
    out.write("\t".join(DATASET_COLUMNS) + "\n")
    for item in items:
        contexts = list(item.contexts[:3]) + [""] * (3 - len(item.contexts[:3]))
        cells = [
            item.pair_id, item.lemma, item.pos_max, item.term,
            str(item.distance), item.gold, item.split, *contexts,
        ]
        safe = [c.replace("\t", " ").replace("\n", " ") for c in cells]
        out.write("\t".join(safe) + "\n")


def load_released_dataset(lines: Iterable[str]) -> list[DatasetItem]:
    """Parse the dataset TSV; schema errors carry the offending line."""
    items = []
    header: list[str] | None = None
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        cells = line.split("\t")
        if header is None:
            header = cells
            if header != list(DATASET_COLUMNS):
                raise DatasetFormatError(
                    lineno, f"expected columns {DATASET_COLUMNS}, got {tuple(header)}"
                )
            continue
        if len(cells) != len(DATASET_COLUMNS):
            raise DatasetFormatError(
                lineno, f"expected {len(DATASET_COLUMNS)} columns, got {len(cells)}"
            )
        row = dict(zip(header, cells))
        try:
            distance = int(row["distance"])
        except ValueError:
            raise DatasetFormatError(lineno, f"bad distance {row['distance']!r}")
        if row["gold"] not in LABELS + (UNRESOLVED,):
            raise DatasetFormatError(lineno, f"bad gold label {row['gold']!r}")
        if row["split"] not in SPLITS:
            raise DatasetFormatError(lineno, f"bad split {row['split']!r}")
        contexts = tuple(
            row[c] for c in ("context_1", "context_2", "context_3") if row[c]
        )
        items.append(
            DatasetItem(
                pair_id=row["pair_id"],
                lemma=row["lemma"],
                pos_max=row["pos_max"],
                term=row["term"],
                distance=distance,
                contexts=contexts,
                gold=row["gold"],
                split=row["split"],
            )
        )
    if header is None:
        raise DatasetFormatError(0, "empty dataset file")
    return items


def translation_slice(items: Iterable[DatasetItem]) -> list[DatasetItem]:
    """The translation task covers gold 'yes' items only."""
    return [item for item in items if item.gold == "yes"]
