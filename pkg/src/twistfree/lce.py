"""Longest-common-extension queries over an integer text.

Suffix array by prefix doubling, LCP by Kasai et al., and a sparse table
for range minima, all in numpy.  Queries are vectorized: pass arrays of
positions and get an array of extension lengths back.
"""

from __future__ import annotations

import numpy as np


def suffix_array(text) -> np.ndarray:
    """Suffix array of a sequence of non-negative integers."""
    t = np.asarray(text, dtype=np.int64)
    n = len(t)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    rank = np.unique(t, return_inverse=True)[1].astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    if n == 1:
        return sa
    h = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - h] = rank[h:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        bump = np.empty(n, dtype=np.int64)
        bump[0] = 0
        bump[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.cumsum(bump)
        rank = new
        if rank[sa[-1]] == n - 1:
            return sa
        h *= 2
        if h >= n:
            return sa


def lcp_array(text, sa: np.ndarray) -> np.ndarray:
    """``lcp[r]`` = LCP of suffixes ``sa[r-1]`` and ``sa[r]``; ``lcp[0] = 0``."""
    t = np.asarray(text).tolist()
    n = len(t)
    rank = [0] * n
    sal = sa.tolist()
    for r, p in enumerate(sal):
        rank[p] = r
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sal[r - 1]
        while i + h < n and j + h < n and t[i + h] == t[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.array(lcp, dtype=np.int64)


class SparseTable:
    """O(1) range-minimum over a fixed array after O(n log n) preprocessing."""

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=np.int64)
        self.levels = [values]
        span = 1
        while 2 * span <= len(values):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2

    def query(self, lo, hi):
        """Minimum over the inclusive ranges ``[lo, hi]`` (arrays, ``lo <= hi``)."""
        lo = np.asarray(lo, dtype=np.int64)
        hi = np.asarray(hi, dtype=np.int64)
        length = hi - lo + 1
        level = np.floor(np.log2(length)).astype(np.int64)
        out = np.empty(lo.shape, dtype=np.int64)
        for lv in np.unique(level):
            sel = level == lv
            row = self.levels[lv]
            a = lo[sel]
            b = hi[sel] - (1 << int(lv)) + 1
            out[sel] = np.minimum(row[a], row[b])
        return out


class LCEIndex:
    """Answers LCE(p, q) = length of the longest common prefix of text[p:] and text[q:]."""

    def __init__(self, text):
        self.text = np.asarray(text, dtype=np.int64)
        self.sa = suffix_array(self.text)
        self.rank = np.empty(len(self.sa), dtype=np.int64)
        self.rank[self.sa] = np.arange(len(self.sa))
        self.lcp = lcp_array(self.text, self.sa)
        self.rmq = SparseTable(self.lcp)

    def query(self, p, q) -> np.ndarray:
        p = np.asarray(p, dtype=np.int64)
        q = np.asarray(q, dtype=np.int64)
        out = np.empty(p.shape, dtype=np.int64)
        same = p == q
        out[same] = len(self.text) - p[same]
        rp, rq = self.rank[p[~same]], self.rank[q[~same]]
        lo = np.minimum(rp, rq) + 1
        hi = np.maximum(rp, rq)
        out[~same] = self.rmq.query(lo, hi) if lo.size else lo
        return out
