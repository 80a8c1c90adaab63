"""Reference systems for the judgment task.

Four baselines bracket the task: uniform random, a Levenshtein threshold
(distance two or less means 'yes', else 'no'), the constant majority
label 'no', and a multinomial logistic regression over string-similarity
features trained on the development split.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from dialex.dataset import DatasetItem

CLASS_ORDER = ("yes", "inflected", "no")
FEATURE_NAMES = ("ld", "jac2", "jac3", "bias")


def char_ngrams(s: str, n: int) -> set[str]:
    """All length-n substrings over Unicode scalars; no padding."""
    if n < 1:
        raise ValueError("n must be positive")
    return {s[i:i + n] for i in range(len(s) - n + 1)}


def jaccard(a: set, b: set) -> float:
    """Set overlap ratio; two empty sets count as identical (1.0)."""
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def features(item: DatasetItem) -> np.ndarray:
    """[ld, bigram jaccard, trigram jaccard, bias] for one pair."""
    return np.array(
        [
            float(item.distance),
            jaccard(char_ngrams(item.lemma, 2), char_ngrams(item.term, 2)),
            jaccard(char_ngrams(item.lemma, 3), char_ngrams(item.term, 3)),
            1.0,
        ]
    )


def predict_random(item: DatasetItem, rng: random.Random) -> str:
    return rng.choice(CLASS_ORDER)


def predict_ld_threshold(item: DatasetItem) -> str:
    """Distance two or less means variant; never predicts 'inflected'."""
    return "yes" if item.distance <= 2 else "no"


def predict_majority(item: DatasetItem) -> str:
    return "no"


@dataclass
class LogRegModel:
    """Multinomial logistic regression with stored standardization."""

    weights: np.ndarray
    feature_means: np.ndarray
    feature_stds: np.ndarray
    learning_rate: float
    l2: float
    max_iterations: int
    iterations: int
    final_loss: float
    converged: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "classes": list(CLASS_ORDER),
                "features": list(FEATURE_NAMES),
                "weights": self.weights.tolist(),
                "feature_means": self.feature_means.tolist(),
                "feature_stds": self.feature_stds.tolist(),
                "hyperparams": {
                    "learning_rate": self.learning_rate,
                    "l2": self.l2,
                    "max_iterations": self.max_iterations,
                },
                "training": {
                    "iterations": self.iterations,
                    "final_loss": self.final_loss,
                    "converged": self.converged,
                },
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "LogRegModel":
        obj = json.loads(text)
        if obj["classes"] != list(CLASS_ORDER) or obj["features"] != list(FEATURE_NAMES):
            raise ValueError("model file does not match this feature/class layout")
        return cls(
            weights=np.array(obj["weights"]),
            feature_means=np.array(obj["feature_means"]),
            feature_stds=np.array(obj["feature_stds"]),
            learning_rate=obj["hyperparams"]["learning_rate"],
            l2=obj["hyperparams"]["l2"],
            max_iterations=obj["hyperparams"]["max_iterations"],
            iterations=obj["training"]["iterations"],
            final_loss=obj["training"]["final_loss"],
            converged=obj["training"]["converged"],
        )


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def loss_and_gradient(
    weights: np.ndarray, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Mean cross-entropy plus L2 (bias column exempt), with its gradient.

    weights: classes x features; x: items x features; y: items x classes
    one-hot.
    """
    probs = softmax(x @ weights.T)
    eps = 1e-12
    ce = -np.mean(np.sum(y * np.log(probs + eps), axis=1))
    penalty = weights.copy()
    penalty[:, -1] = 0.0
    loss = ce + 0.5 * l2 * float(np.sum(penalty ** 2))
    grad = (probs - y).T @ x / x.shape[0] + l2 * penalty
    return float(loss), grad


def _standardize_params(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    means = x.mean(axis=0)
    stds = x.std(axis=0)
    constant = stds == 0.0
    means[constant] = 0.0
    stds[constant] = 1.0
    return means, stds


def train_logreg(
    items: Sequence[DatasetItem],
    learning_rate: float = 0.1,
    max_iterations: int = 5000,
    l2: float = 1e-4,
    tolerance: float = 1e-7,
) -> LogRegModel:
    """Fit by full-batch gradient descent from zero-initialized weights."""
    golds = [item.gold for item in items]
    if len(set(golds)) < 2:
        raise ValueError("training needs at least 2 distinct gold classes")
    if any(g not in CLASS_ORDER for g in golds):
        raise ValueError("training items must carry adjudicated gold labels")
    raw = np.stack([features(item) for item in items])
    means, stds = _standardize_params(raw)
    x = (raw - means) / stds
    y = np.zeros((len(items), len(CLASS_ORDER)))
    for i, g in enumerate(golds):
        y[i, CLASS_ORDER.index(g)] = 1.0
    weights = np.zeros((len(CLASS_ORDER), len(FEATURE_NAMES)))
    loss = float("inf")
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        new_loss, grad = loss_and_gradient(weights, x, y, l2)
        weights -= learning_rate * grad
        if abs(loss - new_loss) < tolerance:
            loss = new_loss
            converged = True
            break
        loss = new_loss
    return LogRegModel(
        weights=weights,
        feature_means=means,
        feature_stds=stds,
        learning_rate=learning_rate,
        l2=l2,
        max_iterations=max_iterations,
        iterations=iterations,
        final_loss=loss,
        converged=converged,
    )


def predict_logreg(model: LogRegModel, item: DatasetItem) -> str:
    """Argmax class; exact ties fall to the earliest class in order."""
    x = (features(item) - model.feature_means) / model.feature_stds
    logits = model.weights @ x
    return CLASS_ORDER[int(np.argmax(logits))]


def save_model(model: LogRegModel, out: IO[str]) -> None:
    out.write(model.to_json() + "\n")


def load_model(source: IO[str]) -> LogRegModel:
    return LogRegModel.from_json(source.read())
