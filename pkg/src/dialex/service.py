"""HTTP service that serves annotation tasks and persists judgments.

The service is the only stateful piece of the pipeline: it loads an
exported task file, appends accepted labels to the annotation log, and
answers progress and agreement queries from the replayed store. Task
order is fixed per run: frequent lemmas first, then closer candidates,
then pair id, so the likely-positive pairs get labeled earliest.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from dialex.dataset import (
    AnnotationStore,
    adjudicate,
    fleiss_kappa,
    pair_id_for,
    validate_label,
)
from dialex.errors import (
    DatasetFormatError,
    LabelValidationError,
    UnknownPairError,
)
from dialex.matcher import CandidateRow


@dataclass(frozen=True)
class ServiceTask:
    """One pair as queued for annotation."""

    pair_id: str
    lemma: str
    pos_max: str
    lemma_freq: int
    term: str
    distance: int
    contexts: tuple[str, ...] = ()

    def to_payload(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "lemma": self.lemma,
            "pos_max": self.pos_max,
            "lemma_freq": self.lemma_freq,
            "term": self.term,
            "distance": self.distance,
            "contexts": list(self.contexts),
        }


def task_order_key(task: ServiceTask) -> tuple:
    return (-task.lemma_freq, task.distance, task.pair_id)


def tasks_from_candidate_table(
    rows: Iterable[CandidateRow], contexts_per_pair: int = 3
) -> list[ServiceTask]:
    """Flatten a candidate table into annotation tasks, queue-ordered."""
    tasks = []
    for row in rows:
        for pair in row.pairs:
            snippets = tuple(
                ctx.snippet
                for ctx in row.contexts.get(pair.term, ())[:contexts_per_pair]
            )
            tasks.append(
                ServiceTask(
                    pair_id=pair_id_for(row.lemma, pair.term),
                    lemma=row.lemma,
                    pos_max=row.pos_max,
                    lemma_freq=row.lemma_freq,
                    term=pair.term,
                    distance=pair.distance,
                    contexts=snippets,
                )
            )
    return sorted(tasks, key=task_order_key)


def write_tasks(tasks: Iterable[ServiceTask], out: IO[str]) -> None:
    for task in tasks:
        out.write(json.dumps(task.to_payload(), ensure_ascii=False) + "\n")


def read_tasks(source: IO[str]) -> list[ServiceTask]:
    tasks = []
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = json.loads(line)
            tasks.append(
                ServiceTask(
                    pair_id=row["pair_id"],
                    lemma=row["lemma"],
                    pos_max=row["pos_max"],
                    lemma_freq=int(row["lemma_freq"]),
                    term=row["term"],
                    distance=int(row["distance"]),
                    contexts=tuple(row.get("contexts", ())),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(lineno, f"bad task row: {exc}") from exc
    return sorted(tasks, key=task_order_key)


def load_tasks(path: str | Path) -> list[ServiceTask]:
    with open(path, encoding="utf-8") as handle:
        return read_tasks(handle)


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(tasks: Sequence[ServiceTask], store: AnnotationStore) -> FastAPI:
    """Build the annotation API around a task queue and a store.

    Writes go through one lock so the append-only log stays serialized
    even when the HTTP server runs handlers concurrently.
    """
    queue = sorted(tasks, key=task_order_key)
    by_id = {task.pair_id: task for task in queue}
    if store.known_pairs is None:
        store.known_pairs = set(by_id)
    lock = threading.Lock()
    skips: dict[str, set[str]] = {}
    app = FastAPI(title="dialex annotation service")

    async def parse_body(request: Request) -> dict:
        body = await request.body()
        try:
            data = json.loads(body)
        except ValueError:
            raise _BadRequest("request body is not valid JSON")
        if not isinstance(data, dict):
            raise _BadRequest("request body must be a JSON object")
        return data

    class _BadRequest(Exception):
        def __init__(self, detail: str):
            self.detail = detail

    @app.exception_handler(_BadRequest)
    async def _on_bad_request(request: Request, exc: _BadRequest):
        return _error(400, exc.detail)

    def require_annotator(data: dict) -> str | JSONResponse:
        annotator = data.get("annotator")
        if not isinstance(annotator, str) or not annotator.strip():
            return _error(422, "annotator must be a non-empty string")
        return annotator.strip()

    @app.get("/api/tasks/next")
    def next_task(annotator: str = ""):
        annotator = annotator.strip()
        if not annotator:
            return _error(422, "annotator must be a non-empty string")
        with lock:
            done = store.pairs_labeled_by(annotator)
            skipped = skips.get(annotator, set())
            remaining = [
                task
                for task in queue
                if task.pair_id not in done and task.pair_id not in skipped
            ]
            if not remaining:
                return {"task": None, "remaining": 0}
            task = remaining[0]
            payload = task.to_payload()
            payload["annotator_id"] = annotator
            payload["served_at"] = datetime.now(timezone.utc).isoformat()
            return {"task": payload, "remaining": len(remaining)}

    @app.post("/api/tasks/{pair_id}/label")
    async def label_task(pair_id: str, request: Request):
        data = await parse_body(request)
        if pair_id not in by_id:
            return _error(404, f"unknown pair_id {pair_id!r}")
        annotator = require_annotator(data)
        if isinstance(annotator, JSONResponse):
            return annotator
        label = data.get("label")
        if not isinstance(label, str):
            return _error(422, "label must be a string")
        try:
            validate_label(label)
        except LabelValidationError as exc:
            return _error(422, str(exc))
        with lock:
            try:
                record = store.annotate(pair_id, annotator, label)
            except UnknownPairError as exc:
                return _error(404, str(exc))
            skips.get(annotator, set()).discard(pair_id)
            labeled = len(store.pairs_labeled_by(annotator))
        return {
            "ok": True,
            "pair_id": pair_id,
            "annotator": annotator,
            "label": record.label,
            "labeled": labeled,
        }

    @app.post("/api/tasks/{pair_id}/skip")
    async def skip_task(pair_id: str, request: Request):
        data = await parse_body(request)
        if pair_id not in by_id:
            return _error(404, f"unknown pair_id {pair_id!r}")
        annotator = require_annotator(data)
        if isinstance(annotator, JSONResponse):
            return annotator
        with lock:
            skips.setdefault(annotator, set()).add(pair_id)
        return {"ok": True, "pair_id": pair_id, "annotator": annotator}

    @app.get("/api/progress")
    def progress():
        with lock:
            per_annotator = {
                annotator: {
                    "labeled": count,
                    "by_label": store.label_counts(annotator),
                }
                for annotator, count in sorted(store.progress().items())
            }
            total_labels = sum(
                entry["labeled"] for entry in per_annotator.values()
            )
            annotators = store.annotators()
            fully = (
                len(store.matrix(annotators)) if len(annotators) >= 2 else 0
            )
        return {
            "total_pairs": len(queue),
            "total_labels": total_labels,
            "annotators": per_annotator,
            "fully_labeled": fully,
        }

    @app.get("/api/agreement")
    def agreement():
        with lock:
            annotators = store.annotators()
            if len(annotators) < 2:
                return {
                    "kappa": None,
                    "n_items": 0,
                    "n_annotators": len(annotators),
                }
            matrix = store.matrix(annotators)
            kappa = fleiss_kappa(matrix) if matrix else None
        return {
            "kappa": kappa,
            "n_items": len(matrix),
            "n_annotators": len(annotators),
        }

    @app.get("/api/pairs/{pair_id}")
    def pair_detail(pair_id: str):
        task = by_id.get(pair_id)
        if task is None:
            return _error(404, f"unknown pair_id {pair_id!r}")
        with lock:
            records = store.labels_for(pair_id)
            labels = {rec.annotator_id: rec.label for rec in records}
            verdict = adjudicate(records) if records else "unresolved"
        payload = task.to_payload()
        return {"task": payload, "labels": labels, "adjudicated": verdict}

    return app


def serve(
    tasks: Sequence[ServiceTask],
    store: AnnotationStore,
    host: str = "127.0.0.1",
    port: int = 8000,
) -> None:
    """Run the annotation API on a local uvicorn server (blocking)."""
    import uvicorn

    uvicorn.run(create_app(tasks, store), host=host, port=port, log_level="warning")
