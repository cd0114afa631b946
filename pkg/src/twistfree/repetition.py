"""The block law shared by the scanners and the descent checker."""

from __future__ import annotations

from dataclasses import dataclass

from .words import Permutation, Word, _check_same, perm_power


@dataclass(frozen=True, order=True)
class Occurrence:
    """A strongly (k, delta)-repetition hosted at ``word[start : start + k*m]``."""

    start: int
    m: int
    k: int

    @property
    def end(self) -> int:
        return self.start + self.k * self.m

    def factor(self, w: Word) -> Word:
        return w[self.start : self.end]

    def blocks(self, w: Word) -> list[Word]:
        return [w[self.start + i * self.m : self.start + (i + 1) * self.m] for i in range(self.k)]


def is_strong_repetition(u: Word, k: int, delta: Permutation) -> int | None:
    """Return the block length ``m`` if ``u`` is a strongly (k, delta)-repetition."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    _check_same(u.alphabet, delta.alphabet)
    n = len(u)
    if n == 0 or n % k:
        return None
    m = n // k
    s = u.symbols
    head = s[:m]
    for i in range(1, k):
        img = perm_power(delta, i).image
        block = s[i * m : (i + 1) * m]
        if any(b != img[a] for a, b in zip(head, block)):
            return None
    return m


def occurrence_holds(w: Word, occ: Occurrence, delta: Permutation) -> bool:
    if occ.start < 0 or occ.m < 1 or occ.end > len(w):
        return False
    return is_strong_repetition(occ.factor(w), occ.k, delta) == occ.m
