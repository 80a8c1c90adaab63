"""Dialect lexicon induction and evaluation toolkit.

Builds dialect variation dictionaries from two monolingual corpora
(Levenshtein nearest-neighbor candidate extraction plus human annotation)
and evaluates LLMs and baselines on judging and translating
dialect-standard word pairs.
"""

__version__ = "0.1.0"
