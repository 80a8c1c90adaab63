"""Accessors for the bundled toy corpora.

The toy pair (a 12-sentence Bavarian sample and a tagged German sample)
exists so the whole pipeline can run end to end in tests and demos with
no external downloads.
"""

from __future__ import annotations

from importlib import resources


def _toy(name: str):
    return resources.files("dialex") / "data" / "toy" / name


def toy_dialect_text() -> str:
    """The bundled dialect corpus (plain-lines format, 12 sentences)."""
    return _toy("bar_sentences.txt").read_text(encoding="utf-8")


def toy_tagged_text() -> str:
    """The bundled standard corpus (tagged three-column format)."""
    return _toy("deu_tagged.tsv").read_text(encoding="utf-8")
