"""Edit-distance kernels with a compiled fast path.

``levenshtein`` and ``levenshtein_bounded`` resolve at import time to the
compiled extension when it was built, and to the pure-Python
implementations below otherwise. ``BACKEND`` records which one is active;
the pure versions stay importable either way (the benchmark compares both).
"""

from __future__ import annotations

__all__ = [
    "BACKEND",
    "levenshtein",
    "levenshtein_bounded",
    "py_levenshtein",
    "py_levenshtein_bounded",
]


def _strip_common(a: str, b: str) -> tuple[str, str]:
    la, lb = len(a), len(b)
    pre = 0
    while pre < la and pre < lb and a[pre] == b[pre]:
        pre += 1
    suf = 0
    while suf < la - pre and suf < lb - pre and a[la - 1 - suf] == b[lb - 1 - suf]:
        suf += 1
    return a[pre:la - suf], b[pre:lb - suf]


def py_levenshtein(a: str, b: str) -> int:
    """Exact Levenshtein distance, two-row dynamic program."""
    a, b = _strip_common(a, b)
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(b) > len(a):
        a, b = b, a
    row = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        diag = row[0]
        row[0] = i
        for j, cb in enumerate(b, start=1):
            above = row[j]
            if ca == cb:
                best = diag
            else:
                best = min(above, row[j - 1], diag) + 1
            diag = above
            row[j] = best
    return row[-1]


def py_levenshtein_bounded(a: str, b: str, limit: int) -> int:
    """Levenshtein distance if it is <= limit, else limit + 1.

    Band-restricted dynamic program with early exit; cells outside the
    band |i - j| <= limit cannot fall below the limit.
    """
    if limit < 0:
        raise ValueError("limit must be >= 0")
    a, b = _strip_common(a, b)
    la, lb = len(a), len(b)
    if abs(la - lb) > limit:
        return limit + 1
    if la == 0:
        return lb
    if lb == 0:
        return la
    big = limit + 1
    prev = [j if j <= limit else big for j in range(lb + 1)]
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        ca = a[i - 1]
        lo = max(1, i - limit)
        hi = min(lb, i + limit)
        cur[0] = i if i <= limit else big
        if lo > 1:
            cur[lo - 1] = big
        rowmin = cur[0] if lo == 1 else big
        for j in range(lo, hi + 1):
            above = prev[j]
            if ca == b[j - 1]:
                best = prev[j - 1]
            else:
                best = min(above, cur[j - 1], prev[j - 1]) + 1
                if best > big:
                    best = big
            cur[j] = best
            if best < rowmin:
                rowmin = best
        if hi < lb:
            cur[hi + 1] = big
        if rowmin > limit:
            return big
        prev, cur = cur, prev
    return prev[lb] if prev[lb] <= limit else big


try:
    from dialex._speedups import levenshtein, levenshtein_bounded

    BACKEND = "c"
except ImportError:
    levenshtein = py_levenshtein
    levenshtein_bounded = py_levenshtein_bounded
    BACKEND = "python"
