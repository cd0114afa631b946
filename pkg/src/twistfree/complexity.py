"""Factor complexity of finite words.

``complexity_profile`` counts distinct factors of every length at once with a
suffix automaton: a state whose right-equivalence class holds the lengths
``(len(link), len]`` adds one factor to each of those lengths.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .words import Word


@dataclass(frozen=True)
class ComplexityProfile:
    # counts[k] for k = 0..k_max; counts[0] = 1 (the empty factor)
    counts: tuple[int, ...]
    word_length: int
    stable_upto: int
    alphabet_size: int = 0

    @property
    def k_max(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, k: int) -> int:
        if not 1 <= k <= self.k_max:
            raise IndexError(f"k={k} outside 1..{self.k_max}")
        return self.counts[k]


@dataclass(frozen=True)
class LinearFit:
    slope: Fraction
    intercept: Fraction
    window: tuple[int, int]
    max_residual: Fraction

    @property
    def exact(self) -> bool:
        return self.max_residual == 0


def factor_count_naive(w: Word, k: int) -> int:
    if not 1 <= k <= len(w):
        raise ValueError(f"k={k} outside 1..{len(w)}")
    s = w.symbols
    return len({s[i : i + k] for i in range(len(s) - k + 1)})


class SuffixAutomaton:
    """Suffix automaton of an integer sequence, stored as parallel lists."""

    def __init__(self, symbols):
        self.length = [0]
        self.link = [-1]
        self.next: list[dict[int, int]] = [{}]
        last = 0
        length, link, nxt = self.length, self.link, self.next
        for c in symbols:
            cur = len(length)
            length.append(length[last] + 1)
            link.append(0)
            nxt.append({})
            p = last
            while p != -1 and c not in nxt[p]:
                nxt[p][c] = cur
                p = link[p]
            if p != -1:
                q = nxt[p][c]
                if length[p] + 1 == length[q]:
                    link[cur] = q
                else:
                    clone = len(length)
                    length.append(length[p] + 1)
                    link.append(link[q])
                    nxt.append(dict(nxt[q]))
                    while p != -1 and nxt[p].get(c) == q:
                        nxt[p][c] = clone
                        p = link[p]
                    link[q] = clone
                    link[cur] = clone
            last = cur

    def __len__(self) -> int:
        return len(self.length)

    def counts_by_length(self, k_max: int) -> list[int]:
        """Distinct factors of each length ``0..k_max``."""
        diff = np.zeros(k_max + 2, dtype=np.int64)
        ln = np.array(self.length[1:], dtype=np.int64)
        lo = np.array([self.length[x] for x in self.link[1:]], dtype=np.int64) + 1
        hi = np.minimum(ln, k_max)
        keep = lo <= hi
        np.add.at(diff, lo[keep], 1)
        np.add.at(diff, hi[keep] + 1, -1)
        counts = np.cumsum(diff)[: k_max + 1]
        counts[0] = 1
        return counts.tolist()


def _counts(symbols, k_max: int) -> list[int]:
    return SuffixAutomaton(symbols).counts_by_length(k_max)


def complexity_profile(w: Word, k_max: int) -> ComplexityProfile:
    """Factor counts for lengths ``1..k_max`` plus the trusted horizon.

    ``stable_upto`` is the largest ``K`` such that the half-length prefix
    already shows the same counts for every length ``1..K``.
    """
    if not 1 <= k_max <= len(w):
        raise ValueError(f"k_max={k_max} outside 1..{len(w)}")
    counts = _counts(w.symbols, k_max)
    half = len(w) // 2
    stable = 0
    if half:
        ref = _counts(w.symbols[:half], min(k_max, half))
        for k in range(1, len(ref)):
            if ref[k] != counts[k]:
                break
            stable = k
    return ComplexityProfile(tuple(counts), len(w), stable, w.alphabet.size)


def fit_linear(profile: ComplexityProfile, window: tuple[int, int] | None = None) -> LinearFit:
    """Median-based line through ``counts[k_lo..k_hi]``.

    The window defaults to ``[8, stable_upto]`` and may not reach past the
    stable horizon.
    """
    k_lo, k_hi = window if window is not None else (8, profile.stable_upto)
    if k_lo < 1:
        raise ValueError(f"window start must be >= 1, got {k_lo}")
    if k_hi > profile.stable_upto:
        raise ValueError(
            f"window end {k_hi} exceeds stable horizon {profile.stable_upto}; counts there may be truncated"
        )
    if k_lo >= k_hi:
        raise ValueError(f"window [{k_lo}, {k_hi}] needs at least two lengths")
    c = profile.counts
    slope = Fraction(statistics.median(Fraction(c[k + 1] - c[k]) for k in range(k_lo, k_hi)))
    intercept = Fraction(statistics.median(c[k] - slope * k for k in range(k_lo, k_hi + 1)))
    resid = max(abs(c[k] - (slope * k + intercept)) for k in range(k_lo, k_hi + 1))
    return LinearFit(slope, intercept, (k_lo, k_hi), resid)


def entropy_estimate(profile: ComplexityProfile) -> float:
    """``log(p(K)) / K`` at the stable horizon ``K`` (natural log)."""
    K = profile.stable_upto
    if K < 2:
        raise ValueError(f"stable horizon {K} too short for an entropy estimate")
    return math.log(profile.counts[K]) / K
