"""The 2-uniform morphism ``a -> a sigma(a)`` and its fixed points."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .repetition import Occurrence, is_strong_repetition, occurrence_holds
from .words import Alphabet, Permutation, Word, _check_same, perm_order, perm_power


@dataclass(frozen=True)
class CyclicShiftMorphism:
    sigma: Permutation
    seed: int = 0

    def __post_init__(self):
        if self.seed not in self.sigma.alphabet:
            raise ValueError(f"seed {self.seed} outside alphabet of size {self.alphabet.size}")

    @classmethod
    def canonical(cls, n: int, seed: int = 0) -> "CyclicShiftMorphism":
        return cls(Permutation.cyclic_shift(n, 1), seed)

    @property
    def alphabet(self) -> Alphabet:
        return self.sigma.alphabet

    def image(self, a: int) -> tuple[int, int]:
        return (a, self.sigma(a))


@dataclass(frozen=True)
class DescentReport:
    occurrence: Occurrence
    start_parity: int
    m_even: bool
    preimage_blocks: tuple[Word, ...] | None = None
    preimage_is_repetition: bool | None = None

    def to_dict(self) -> dict:
        return {
            "start": self.occurrence.start,
            "m": self.occurrence.m,
            "k": self.occurrence.k,
            "start_parity": self.start_parity,
            "m_even": self.m_even,
            "preimage_blocks": (
                None if self.preimage_blocks is None else [list(b.symbols) for b in self.preimage_blocks]
            ),
            "preimage_is_repetition": self.preimage_is_repetition,
        }


def apply_morphism(psi: CyclicShiftMorphism, w: Word) -> Word:
    _check_same(psi.alphabet, w.alphabet)
    if not len(w):
        return w
    out = np.empty(2 * len(w), dtype=np.int64)
    out[0::2] = w.array
    out[1::2] = psi.sigma.table[w.array]
    return Word.from_array(out, w.alphabet)


def generate_prefix(psi: CyclicShiftMorphism, length: int) -> Word:
    """First ``length`` letters of the fixed point starting with ``psi.seed``.

    Fills the index recurrence ``W[2i] = W[i]``, ``W[2i+1] = sigma(W[i])``
    one doubling at a time.
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    out = np.empty(length, dtype=np.int64)
    out[0] = psi.seed
    sigma = psi.sigma.table
    filled = 1
    while filled < length:
        # positions [filled, 2*filled) come from indices [filled//2, filled)
        hi = min(2 * filled, length)
        idx = np.arange(filled, hi)
        src = out[idx >> 1]
        out[filled:hi] = np.where(idx & 1, sigma[src], src)
        filled = hi
    return Word.from_array(out, psi.alphabet)


@lru_cache(maxsize=64)
def _seed_orbit(psi: CyclicShiftMorphism) -> tuple[int, ...]:
    return tuple(perm_power(psi.sigma, e)(psi.seed) for e in range(perm_order(psi.sigma)))


def letter_at(psi: CyclicShiftMorphism, n: int) -> int:
    """``W[n] = sigma^popcount(n)(seed)``."""
    if n < 0:
        raise ValueError("index must be non-negative")
    orbit = _seed_orbit(psi)
    return orbit[bin(n).count("1") % len(orbit)]


def desubstitute(psi: CyclicShiftMorphism, w: Word, phase: int = 0) -> Word | None:
    """Recover the preimage of the aligned core of ``w``.

    With ``phase=1`` the first letter is taken to be the tail of a block and
    dropped; a trailing half-block is dropped too.  Returns ``None`` when an
    aligned pair ``(x, y)`` has ``y != sigma(x)``.
    """
    if phase not in (0, 1):
        raise ValueError(f"phase must be 0 or 1, got {phase}")
    _check_same(psi.alphabet, w.alphabet)
    s = w.symbols[phase:]
    if len(s) % 2:
        s = s[:-1]
    img = psi.sigma.image
    out = []
    for t in range(0, len(s), 2):
        x, y = s[t], s[t + 1]
        if img[x] != y:
            return None
        out.append(x)
    return Word(tuple(out), w.alphabet)


def descend_occurrence(
    psi: CyclicShiftMorphism, prefix: Word, occ: Occurrence, delta: Permutation
) -> DescentReport:
    """Run one descent step on a located repetition and report what happened."""
    if occ.start < 0 or occ.m < 1 or occ.end > len(prefix):
        raise ValueError(f"occurrence {occ} out of bounds for word of length {len(prefix)}")
    if not occurrence_holds(prefix, occ, delta):
        raise ValueError(f"{occ} is not a strongly ({occ.k}, delta)-repetition in the given word")
    parity = occ.start % 2
    m_even = occ.m % 2 == 0
    if parity or not m_even:
        return DescentReport(occ, parity, m_even)
    blocks = [desubstitute(psi, b, 0) for b in occ.blocks(prefix)]
    if any(b is None for b in blocks):
        return DescentReport(occ, parity, m_even)
    joined = Word(tuple(s for b in blocks for s in b.symbols), prefix.alphabet)
    again = is_strong_repetition(joined, occ.k, delta)
    return DescentReport(occ, parity, m_even, tuple(blocks), again is not None)
