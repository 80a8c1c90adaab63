# cython: boundscheck=False, wraparound=False
"""Compiled edit-distance kernels.

Unit-cost Levenshtein distance over Unicode scalar values. The bounded
variant is what the nearest-neighbor matcher hammers: it gives up as soon
as the distance provably exceeds ``limit`` and returns ``limit + 1``.
"""

from libc.stdlib cimport free, malloc


cdef inline Py_ssize_t _min3(Py_ssize_t a, Py_ssize_t b, Py_ssize_t c):
    if b < a:
        a = b
    if c < a:
        a = c
    return a


def levenshtein(str a, str b):
    """Exact Levenshtein distance between two strings."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t pre = 0, suf = 0
    cdef Py_ssize_t i, j, above, left, diag, best
    cdef Py_UCS4 ca
    cdef Py_ssize_t *row

    # strip common prefix and suffix; edits never touch them
    while pre < la and pre < lb and a[pre] == b[pre]:
        pre += 1
    while suf < la - pre and suf < lb - pre and a[la - 1 - suf] == b[lb - 1 - suf]:
        suf += 1
    a = a[pre:la - suf]
    b = b[pre:lb - suf]
    la -= pre + suf
    lb -= pre + suf

    if la == 0:
        return lb
    if lb == 0:
        return la
    if lb > la:
        a, b = b, a
        la, lb = lb, la

    row = <Py_ssize_t *> malloc((lb + 1) * sizeof(Py_ssize_t))
    if row == NULL:
        raise MemoryError()
    try:
        for j in range(lb + 1):
            row[j] = j
        for i in range(1, la + 1):
            ca = a[i - 1]
            diag = row[0]
            row[0] = i
            for j in range(1, lb + 1):
                above = row[j]
                left = row[j - 1]
                if ca == b[j - 1]:
                    best = diag
                else:
                    best = _min3(above, left, diag) + 1
                diag = above
                row[j] = best
        return row[lb]
    finally:
        free(row)


def levenshtein_bounded(str a, str b, Py_ssize_t limit):
    """Levenshtein distance if it is <= limit, else limit + 1.

    Computes only the diagonal band of width 2*limit+1 and exits early
    once every cell in a row exceeds the limit.
    """
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t pre = 0, suf = 0
    cdef Py_ssize_t big, i, j, lo, hi, rowmin, diag, above, left, best
    cdef Py_UCS4 ca
    cdef Py_ssize_t *prev
    cdef Py_ssize_t *cur
    cdef Py_ssize_t *tmp

    if limit < 0:
        raise ValueError("limit must be >= 0")

    while pre < la and pre < lb and a[pre] == b[pre]:
        pre += 1
    while suf < la - pre and suf < lb - pre and a[la - 1 - suf] == b[lb - 1 - suf]:
        suf += 1
    a = a[pre:la - suf]
    b = b[pre:lb - suf]
    la -= pre + suf
    lb -= pre + suf

    if la - lb > limit or lb - la > limit:
        return limit + 1
    if la == 0:
        return lb
    if lb == 0:
        return la

    big = limit + 1
    prev = <Py_ssize_t *> malloc((lb + 1) * sizeof(Py_ssize_t))
    cur = <Py_ssize_t *> malloc((lb + 1) * sizeof(Py_ssize_t))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    try:
        for j in range(lb + 1):
            prev[j] = j if j <= limit else big
        for i in range(1, la + 1):
            ca = a[i - 1]
            lo = i - limit
            if lo < 1:
                lo = 1
            hi = i + limit
            if hi > lb:
                hi = lb
            cur[0] = i if i <= limit else big
            if lo > 1:
                cur[lo - 1] = big
            rowmin = cur[0] if lo == 1 else big
            for j in range(lo, hi + 1):
                above = prev[j]
                left = cur[j - 1]
                diag = prev[j - 1]
                if ca == b[j - 1]:
                    best = diag
                else:
                    best = _min3(above, left, diag) + 1
                if best > big:
                    best = big
                cur[j] = best
                if best < rowmin:
                    rowmin = best
            if hi < lb:
                cur[hi + 1] = big
            if rowmin > limit:
                return big
            tmp = prev
            prev = cur
            cur = tmp
        return prev[lb] if prev[lb] <= limit else big
    finally:
        free(prev)
        free(cur)
