"""Scoring for the judgment and translation tasks.

Judgment systems are scored with macro-averaged F1 over the three label
classes plus a confusion matrix that keeps instruction-following (IF)
errors in their own row, so every gold column stays conserved. The
translation task is exact-match word accuracy. Group breakdowns cover
POS tags and edit-distance bands; delta reports compare two system runs.
"""

from __future__ import annotations

import csv
import io
import json
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from dialex.dataset import LABELS, DatasetItem
from dialex.errors import ScoringError

IF_ERROR = "IF_ERROR"
IF_POLICIES = ("invalid", "map-to-no")


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass
class ConfusionMatrix:
    """Predicted x actual counts over the label classes, IF errors apart.

    `counts[predicted][actual]` holds items whose raw outcome was the
    predicted label; IF-errored items appear only in `if_errors[actual]`.
    Each actual-class column (three cells plus the IF cell) sums to that
    class's gold count.
    """

    counts: dict[str, dict[str, int]] = field(
        default_factory=lambda: {p: {a: 0 for a in LABELS} for p in LABELS}
    )
    if_errors: dict[str, int] = field(
        default_factory=lambda: {a: 0 for a in LABELS}
    )

    def add(self, predicted: str, actual: str) -> None:
        if predicted == IF_ERROR:
            self.if_errors[actual] += 1
        else:
            self.counts[predicted][actual] += 1

    def gold_total(self, actual: str) -> int:
        return sum(self.counts[p][actual] for p in LABELS) + self.if_errors[actual]

    def predicted_total(self, predicted: str) -> int:
        return sum(self.counts[predicted].values())

    def total(self) -> int:
        return sum(self.gold_total(a) for a in LABELS)

    def column_percentages(self) -> dict[str, dict[str, float]]:
        """Per-actual-class relative distribution of predictions, in %."""
        out: dict[str, dict[str, float]] = {p: {} for p in (*LABELS, "IF")}
        for actual in LABELS:
            total = self.gold_total(actual)
            for pred in LABELS:
                out[pred][actual] = (
                    100.0 * self.counts[pred][actual] / total if total else 0.0
                )
            out["IF"][actual] = (
                100.0 * self.if_errors[actual] / total if total else 0.0
            )
        return out


@dataclass
class EvaluationReport:
    """All published numbers for one system on one task."""

    system: str
    task: str
    n_items: int
    overall: float
    accuracy: float
    if_error_rate: float
    per_class: dict[str, dict[str, float]] = field(default_factory=dict)
    per_pos: dict[str, float] = field(default_factory=dict)
    per_pos_mean: float = 0.0
    per_ld: dict[int, float] = field(default_factory=dict)
    confusion: ConfusionMatrix | None = None
    lenient_accuracy: float | None = None

    def to_json(self) -> str:
        obj = {
            "system": self.system,
            "task": self.task,
            "n_items": self.n_items,
            "overall": self.overall,
            "accuracy": self.accuracy,
            "if_error_rate": self.if_error_rate,
            "per_class": self.per_class,
            "per_pos": self.per_pos,
            "per_pos_mean": self.per_pos_mean,
            "per_ld": {str(k): v for k, v in self.per_ld.items()},
        }
        if self.confusion is not None:
            obj["confusion"] = {
                "counts": self.confusion.counts,
                "if_errors": self.confusion.if_errors,
                "column_percentages": self.confusion.column_percentages(),
            }
        if self.lenient_accuracy is not None:
            obj["lenient_accuracy"] = self.lenient_accuracy
        return json.dumps(obj, ensure_ascii=False, indent=2)


def _require_predictions(
    predictions: Mapping[str, str], items: Sequence[DatasetItem]
) -> None:
    missing = [item.pair_id for item in items if item.pair_id not in predictions]
    if missing:
        shown = ", ".join(missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        raise ScoringError(f"missing predictions for pair_ids: {shown}{more}")


def _check_outcomes(predictions: Mapping[str, str], items, valid) -> None:
    bad = {
        predictions[i.pair_id]
        for i in items
        if predictions[i.pair_id] not in valid
    }
    if bad:
        raise ScoringError(f"invalid outcomes: {sorted(bad)}")


def confusion(
    predictions: Mapping[str, str], items: Sequence[DatasetItem]
) -> ConfusionMatrix:
    _require_predictions(predictions, items)
    matrix = ConfusionMatrix()
    for item in items:
        matrix.add(predictions[item.pair_id], item.gold)
    return matrix


def per_class_metrics(
    matrix: ConfusionMatrix, if_policy: str = "invalid"
) -> dict[str, dict[str, float]]:
    """Precision/recall/F1 per class under the chosen IF policy.

    "invalid": an IF-errored item counts in its gold column total (it can
    never be a true positive) but never as a predicted label.
    "map-to-no": IF-errored items are scored as if 'no' had been
    predicted. Both use the 0/0 convention F1 = 0.
    """
    if if_policy not in IF_POLICIES:
        raise ScoringError(f"if_policy must be one of {IF_POLICIES}")
    out = {}
    total_if = sum(matrix.if_errors.values())
    for cls in LABELS:
        tp = matrix.counts[cls][cls]
        predicted = matrix.predicted_total(cls)
        gold = matrix.gold_total(cls)
        if if_policy == "map-to-no" and cls == "no":
            tp += matrix.if_errors["no"]
            predicted += total_if
        precision = tp / predicted if predicted else 0.0
        recall = tp / gold if gold else 0.0
        out[cls] = {
            "precision": precision,
            "recall": recall,
            "f1": f1_score(precision, recall),
        }
    return out


def group_report(
    predictions: Mapping[str, str],
    items: Sequence[DatasetItem],
    grouping: str,
    task: str = "judgment",
    if_policy: str = "invalid",
) -> dict:
    """Metric per POS tag or per edit distance; empty groups are omitted.

    POS groups report the task's headline metric (macro-F1 for judgment,
    accuracy for translation). Distance groups report accuracy; for the
    judgment task gold-'no' items are dropped first, since 'no'-biased
    systems would otherwise dominate every distance band.
    """
    if grouping not in ("pos", "ld"):
        raise ScoringError("grouping must be 'pos' or 'ld'")
    _require_predictions(predictions, items)
    if grouping == "ld" and task == "judgment":
        items = [item for item in items if item.gold != "no"]
    groups: dict = {}
    for item in items:
        key = item.pos_max if grouping == "pos" else item.distance
        groups.setdefault(key, []).append(item)
    out = {}
    for key in sorted(groups):
        members = groups[key]
        if grouping == "pos" and task == "judgment":
            matrix = confusion(predictions, members)
            classes = per_class_metrics(matrix, if_policy)
            out[key] = sum(classes[c]["f1"] for c in LABELS) / len(LABELS)
        else:
            correct = sum(
                1 for m in members if predictions[m.pair_id] == _reference(m, task)
            )
            out[key] = correct / len(members)
    return out


def _reference(item: DatasetItem, task: str) -> str:
    if task == "judgment":
        return item.gold
    return unicodedata.normalize("NFC", item.lemma)


def score_judgment(
    predictions: Mapping[str, str],
    items: Sequence[DatasetItem],
    system: str = "",
    if_policy: str = "invalid",
) -> EvaluationReport:
    """Macro-F1 report over {yes, inflected, no} with IF errors split out.

    `overall` is the unweighted mean of the three per-class F1 values;
    `per_pos_mean` additionally averages the per-POS macro-F1 values
    (the aggregation used for headline per-POS tables). `accuracy` is the
    confusion-diagonal fraction and never counts IF outcomes as correct.
    """
    _require_predictions(predictions, items)
    _check_outcomes(predictions, items, set(LABELS) | {IF_ERROR})
    if not items:
        raise ScoringError("cannot score an empty item set")
    matrix = confusion(predictions, items)
    classes = per_class_metrics(matrix, if_policy)
    macro = sum(classes[c]["f1"] for c in LABELS) / len(LABELS)
    diag = sum(matrix.counts[c][c] for c in LABELS)
    per_pos = group_report(predictions, items, "pos", "judgment", if_policy)
    per_ld = group_report(predictions, items, "ld", "judgment", if_policy)
    return EvaluationReport(
        system=system,
        task="judgment",
        n_items=len(items),
        overall=macro,
        accuracy=diag / len(items),
        if_error_rate=sum(matrix.if_errors.values()) / len(items),
        per_class=classes,
        per_pos=per_pos,
        per_pos_mean=sum(per_pos.values()) / len(per_pos) if per_pos else 0.0,
        per_ld=per_ld,
        confusion=matrix,
    )


def score_translation(
    predictions: Mapping[str, str],
    items: Sequence[DatasetItem],
    system: str = "",
) -> EvaluationReport:
    """Exact-match word accuracy against the standard lemma.

    Matching is case-sensitive over NFC-normalized strings; IF errors
    count as incorrect. A case-folded lenient accuracy is reported as a
    diagnostic only.
    """
    _require_predictions(predictions, items)
    if not items:
        raise ScoringError("cannot score an empty item set")
    correct = 0
    lenient = 0
    if_count = 0
    for item in items:
        outcome = predictions[item.pair_id]
        if outcome == IF_ERROR:
            if_count += 1
            continue
        reference = unicodedata.normalize("NFC", item.lemma)
        normalized = unicodedata.normalize("NFC", outcome)
        if normalized == reference:
            correct += 1
        if normalized.casefold() == reference.casefold():
            lenient += 1
    accuracy = correct / len(items)
    per_pos = group_report(predictions, items, "pos", "translation")
    return EvaluationReport(
        system=system,
        task="translation",
        n_items=len(items),
        overall=accuracy,
        accuracy=accuracy,
        if_error_rate=if_count / len(items),
        per_class={},
        per_pos=per_pos,
        per_pos_mean=sum(per_pos.values()) / len(per_pos) if per_pos else 0.0,
        per_ld=group_report(predictions, items, "ld", "translation"),
        confusion=None,
        lenient_accuracy=lenient / len(items),
    )


def delta_report(a: EvaluationReport, b: EvaluationReport) -> dict:
    """Per-metric differences b - a between two runs on the same items."""
    if a.task != b.task or a.n_items != b.n_items:
        raise ScoringError(
            f"reports are not comparable: {a.task}/{a.n_items} items vs "
            f"{b.task}/{b.n_items} items"
        )
    keys_pos = sorted(set(a.per_pos) | set(b.per_pos))
    keys_ld = sorted(set(a.per_ld) | set(b.per_ld))
    return {
        "system_a": a.system,
        "system_b": b.system,
        "task": a.task,
        "delta_overall": b.overall - a.overall,
        "delta_if_rate": b.if_error_rate - a.if_error_rate,
        "per_pos": {
            k: b.per_pos.get(k, 0.0) - a.per_pos.get(k, 0.0) for k in keys_pos
        },
        "per_ld": {
            k: b.per_ld.get(k, 0.0) - a.per_ld.get(k, 0.0) for k in keys_ld
        },
    }


def ld_histogram(items: Iterable[DatasetItem]) -> dict[int, int]:
    """Item counts per edit distance (plot-ready)."""
    out: dict[int, int] = {}
    for item in items:
        out[item.distance] = out.get(item.distance, 0) + 1
    return dict(sorted(out.items()))


def report_to_text(report: EvaluationReport) -> str:
    """Aligned human-readable summary of one report."""
    lines = [
        f"system: {report.system or '-'}    task: {report.task}    "
        f"items: {report.n_items}",
        f"overall: {report.overall:.3f}    accuracy: {report.accuracy:.3f}    "
        f"IF rate: {report.if_error_rate:.3f}",
    ]
    if report.per_class:
        lines.append(f"{'class':<12}{'P':>8}{'R':>8}{'F1':>8}")
        for cls in LABELS:
            m = report.per_class[cls]
            lines.append(
                f"{cls:<12}{m['precision']:>8.3f}{m['recall']:>8.3f}"
                f"{m['f1']:>8.3f}"
            )
    if report.confusion is not None:
        pct = report.confusion.column_percentages()
        corner = "pred/actual"
        lines.append(f"{corner:<12}" + "".join(f"{a:>12}" for a in LABELS))
        for pred in (*LABELS, "IF"):
            lines.append(
                f"{pred:<12}"
                + "".join(f"{pct[pred][a]:>11.2f}%" for a in LABELS)
            )
    if report.per_pos:
        lines.append("per-POS: " + "  ".join(
            f"{pos}={val:.3f}" for pos, val in report.per_pos.items()
        ))
        lines.append(f"per-POS mean: {report.per_pos_mean:.3f}")
    if report.per_ld:
        lines.append("per-LD:  " + "  ".join(
            f"{ld}={val:.3f}" for ld, val in report.per_ld.items()
        ))
    if report.lenient_accuracy is not None:
        lines.append(f"lenient accuracy (diagnostic): {report.lenient_accuracy:.3f}")
    return "\n".join(lines) + "\n"


def groups_to_csv(report: EvaluationReport, grouping: str) -> str:
    """CSV series (group, metric) for external plotting."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    if grouping == "pos":
        writer.writerow(["pos", "metric"])
        for key, val in report.per_pos.items():
            writer.writerow([key, f"{val:.6f}"])
    elif grouping == "ld":
        writer.writerow(["ld", "metric"])
        for key, val in report.per_ld.items():
            writer.writerow([key, f"{val:.6f}"])
    else:
        raise ScoringError("grouping must be 'pos' or 'ld'")
    return buf.getvalue()


def delta_to_csv(delta: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["series", "key", "delta"])
    writer.writerow(["overall", "", f"{delta['delta_overall']:.6f}"])
    writer.writerow(["if_rate", "", f"{delta['delta_if_rate']:.6f}"])
    for key, val in delta["per_pos"].items():
        writer.writerow(["pos", key, f"{val:.6f}"])
    for key, val in delta["per_ld"].items():
        writer.writerow(["ld", key, f"{val:.6f}"])
    return buf.getvalue()


def histogram_to_csv(hist: Mapping[int, int]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["ld", "count"])
    for key, val in hist.items():
        writer.writerow([key, val])
    return buf.getvalue()
