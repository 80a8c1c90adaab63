"""Task execution over item sets, with a persistent response cache.

Every completion is cached as raw text keyed by (model, template id,
pair id, variant), so reruns are free and parsed outcomes can always be
re-derived from what the model actually said. Prompt selection evaluates
a whole pool on a labeled development set and persists per-template
scores next to the chosen id.
"""

from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from dialex import metrics
from dialex.dataset import LABELS, DatasetItem
from dialex.errors import PartialRunError, TemplateError, TransportError
from dialex.llm.client import ModelEndpointConfig, complete
from dialex.llm.parsing import parse_judgment, parse_translation
from dialex.llm.templates import TASKS, PromptTemplate, render_prompt

CacheKey = tuple[str, int, str, str]


@dataclass(frozen=True)
class PredictionRecord:
    """One scored model response for one item."""

    pair_id: str
    model: str
    template_id: int
    variant: str
    raw: str
    outcome: str
    latency_ms: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "pair_id": self.pair_id,
                "model": self.model,
                "template_id": self.template_id,
                "variant": self.variant,
                "raw": self.raw,
                "outcome": self.outcome,
                "latency_ms": self.latency_ms,
            },
            ensure_ascii=False,
        )


@dataclass(frozen=True)
class RunResult:
    """Completed predictions in item order, plus unscored pair ids."""

    records: tuple[PredictionRecord, ...]
    pending: tuple[str, ...]

    @property
    def complete(self) -> bool:
        return not self.pending

    def outcomes(self) -> dict[str, str]:
        return {record.pair_id: record.outcome for record in self.records}


def parse_outcome(task: str, raw: str) -> str:
    if task == "judge":
        return parse_judgment(raw).outcome
    return parse_translation(raw).outcome


class ResponseCache:
    """Append-only JSONL store of raw completions.

    Lines are written under a lock so concurrent workers never interleave;
    a torn final line from a killed run is skipped on reload.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[CacheKey, dict] = {}
        self._tail_torn = False
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        # A killed run can leave the file without a final newline; appending
        # onto that torn line would corrupt the next entry too.
        with self.path.open("rb") as handle:
            handle.seek(0, os.SEEK_END)
            if handle.tell() > 0:
                handle.seek(-1, os.SEEK_END)
                self._tail_torn = handle.read(1) != b"\n"
        with self.path.open("r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                    key = (
                        entry["model"],
                        int(entry["template_id"]),
                        entry["pair_id"],
                        entry["variant"],
                    )
                    raw = entry["raw"]
                except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                    continue
                if isinstance(raw, str):
                    self._entries[key] = entry

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, key: CacheKey) -> dict | None:
        return self._entries.get(key)

    def put(self, key: CacheKey, raw: str, latency_ms: int) -> dict:
        entry = {
            "model": key[0],
            "template_id": key[1],
            "pair_id": key[2],
            "variant": key[3],
            "raw": raw,
            "latency_ms": latency_ms,
        }
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                if self._tail_torn:
                    handle.write("\n")
                    self._tail_torn = False
                handle.write(json.dumps(entry, ensure_ascii=False) + "\n")
            self._entries[key] = entry
        return entry


def _render_for_item(template: PromptTemplate, item: DatasetItem) -> str:
    context = None
    if template.with_context:
        if not item.contexts:
            raise TemplateError(
                f"pair {item.pair_id} has no usage context for "
                f"context template {template.id}"
            )
        context = item.contexts[0]
    lemma = item.lemma if template.task == "judge" else None
    return render_prompt(template, item.term, lemma=lemma, context=context)


def run_task(
    task: str,
    items: Sequence[DatasetItem],
    template: PromptTemplate,
    endpoint: ModelEndpointConfig,
    cache_path: str | Path,
    predictions_path: str | Path | None = None,
    max_concurrency: int = 1,
) -> RunResult:
    """Collect one prediction per item, reusing cached responses.

    Transport failures leave their items pending instead of aborting the
    run; everything that did complete is cached, so a rerun only asks the
    endpoint about the remainder. Records come back in item order no
    matter in which order responses arrived.
    """
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    if template.task != task:
        raise TemplateError(
            f"template {template.id} is for task {template.task!r}, not {task!r}"
        )
    if max_concurrency < 1:
        raise ValueError("max_concurrency must be at least 1")
    prompts = [_render_for_item(template, item) for item in items]
    cache = ResponseCache(cache_path)
    slots: list[PredictionRecord | None] = [None] * len(items)
    pending: list[str] = []
    fresh: list[int] = []
    for position, item in enumerate(items):
        key = (endpoint.model_name, template.id, item.pair_id, template.variant)
        entry = cache.get(key)
        if entry is None:
            fresh.append(position)
            continue
        raw = entry["raw"]
        slots[position] = PredictionRecord(
            pair_id=item.pair_id,
            model=endpoint.model_name,
            template_id=template.id,
            variant=template.variant,
            raw=raw,
            outcome=parse_outcome(task, raw),
            latency_ms=int(entry.get("latency_ms", 0)),
        )

    def fetch(position: int) -> tuple[int, str | None, int]:
        start = time.perf_counter()
        try:
            raw = complete(endpoint, prompts[position])
        except TransportError:
            return position, None, 0
        latency_ms = int(round((time.perf_counter() - start) * 1000.0))
        key = (
            endpoint.model_name,
            template.id,
            items[position].pair_id,
            template.variant,
        )
        cache.put(key, raw, latency_ms)
        return position, raw, latency_ms

    if fresh:
        with ThreadPoolExecutor(max_workers=max_concurrency) as pool:
            for position, raw, latency_ms in pool.map(fetch, fresh):
                if raw is None:
                    pending.append(items[position].pair_id)
                    continue
                slots[position] = PredictionRecord(
                    pair_id=items[position].pair_id,
                    model=endpoint.model_name,
                    template_id=template.id,
                    variant=template.variant,
                    raw=raw,
                    outcome=parse_outcome(task, raw),
                    latency_ms=latency_ms,
                )
    records = tuple(record for record in slots if record is not None)
    if predictions_path is not None:
        write_predictions(records, predictions_path)
    return RunResult(records=records, pending=tuple(pending))


def write_predictions(
    records: Sequence[PredictionRecord], path: str | Path
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_json() + "\n")


def read_predictions(path: str | Path) -> list[PredictionRecord]:
    records = []
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            entry = json.loads(line)
            records.append(
                PredictionRecord(
                    pair_id=entry["pair_id"],
                    model=entry["model"],
                    template_id=int(entry["template_id"]),
                    variant=entry["variant"],
                    raw=entry["raw"],
                    outcome=entry["outcome"],
                    latency_ms=int(entry["latency_ms"]),
                )
            )
    return records


def score_predictions(
    task: str,
    records: Sequence[PredictionRecord],
    items: Sequence[DatasetItem],
    system: str = "",
) -> metrics.EvaluationReport:
    """Score a completed run with the task's headline protocol."""
    predictions = {record.pair_id: record.outcome for record in records}
    if task == "judge":
        return metrics.score_judgment(predictions, items, system=system)
    if task == "translate":
        return metrics.score_translation(predictions, items, system=system)
    raise ValueError(f"unknown task {task!r}")


def _dev_score(
    task: str, records: Sequence[PredictionRecord], items: Sequence[DatasetItem]
) -> float:
    report = score_predictions(task, records, items)
    if task == "judge":
        return report.overall
    return report.accuracy


def select_best_prompt(
    pool: Sequence[PromptTemplate],
    dev_items: Sequence[DatasetItem],
    endpoint: ModelEndpointConfig,
    task: str,
    cache_path: str | Path,
    scores_path: str | Path | None = None,
    max_concurrency: int = 1,
) -> int:
    """Evaluate every template on the full dev set and return the best id.

    Judgment templates compete on macro-F1, translation templates on
    accuracy; ties go to the lowest id. The per-template scores are
    persisted so the selection can be re-derived as a pure argmax.
    """
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}")
    templates = sorted(pool, key=lambda t: t.id)
    if not templates:
        raise ValueError("prompt pool is empty")
    for template in templates:
        if template.task != task:
            raise TemplateError(
                f"template {template.id} is for task {template.task!r}, "
                f"not {task!r}"
            )
    if task == "judge":
        unlabeled = [i.pair_id for i in dev_items if i.gold not in LABELS]
        if unlabeled:
            raise ValueError(
                f"{len(unlabeled)} dev items lack a gold label "
                f"(first: {unlabeled[0]})"
            )
    scores: dict[int, float] = {}
    for template in templates:
        result = run_task(
            task,
            dev_items,
            template,
            endpoint,
            cache_path,
            max_concurrency=max_concurrency,
        )
        if result.pending:
            raise PartialRunError(
                f"template {template.id}: {len(result.pending)} of "
                f"{len(dev_items)} dev items unscored",
                resume_path=str(cache_path),
            )
        scores[template.id] = _dev_score(task, result.records, dev_items)
    best = min(scores, key=lambda tid: (-scores[tid], tid))
    if scores_path is not None:
        payload = {
            "task": task,
            "model": endpoint.model_name,
            "n_dev_items": len(dev_items),
            "scores": {str(tid): scores[tid] for tid in sorted(scores)},
            "selected": best,
        }
        scores_file = Path(scores_path)
        scores_file.parent.mkdir(parents=True, exist_ok=True)
        scores_file.write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
    return best
