"""Alphabets, words and permutations of a finite alphabet.

Symbols are the integers ``0..N-1``.  Text rendering maps symbol ``i`` to the
``i``-th lowercase Latin letter, so it is only available for ``N <= 26``.
"""

from __future__ import annotations

import math
import re
import string
import struct
from dataclasses import dataclass, field
from functools import cached_property, reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

LETTERS = string.ascii_lowercase

# words longer than this are written in the binary format
BINARY_THRESHOLD = 1 << 20


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.size}")

    def __contains__(self, symbol: int) -> bool:
        return 0 <= symbol < self.size

    def letter(self, symbol: int) -> str:
        if self.size > len(LETTERS):
            raise ValueError(f"no text rendering for alphabet of size {self.size}")
        return LETTERS[symbol]


@dataclass(frozen=True, eq=True)
class Word:
    """Immutable finite word over an :class:`Alphabet`."""

    symbols: tuple[int, ...]
    alphabet: Alphabet = field(compare=True)

    def __post_init__(self):
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        n = self.alphabet.size
        for pos, s in enumerate(self.symbols):
            if not 0 <= s < n:
                raise ValueError(f"symbol {s} at position {pos} outside alphabet of size {n}")

    @classmethod
    def from_array(cls, arr, alphabet: Alphabet) -> "Word":
        arr = np.asarray(arr)
        if arr.size and (arr.min() < 0 or arr.max() >= alphabet.size):
            raise ValueError(f"symbols outside alphabet of size {alphabet.size}")
        w = cls.__new__(cls)
        object.__setattr__(w, "symbols", tuple(arr.tolist()))
        object.__setattr__(w, "alphabet", alphabet)
        return w

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.symbols, dtype=np.int64)
        a.setflags(write=False)
        return a

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return Word(self.symbols[idx], self.alphabet)
        return self.symbols[idx]

    def __iter__(self):
        return iter(self.symbols)

    def __add__(self, other: "Word") -> "Word":
        _check_same(self.alphabet, other.alphabet)
        return Word(self.symbols + other.symbols, self.alphabet)

    def __str__(self) -> str:
        return render_word(self)

    def __repr__(self) -> str:
        if self.alphabet.size <= len(LETTERS) and len(self) <= 64:
            return f"Word({render_word(self)!r}, N={self.alphabet.size})"
        return f"Word(len={len(self)}, N={self.alphabet.size})"


def _check_same(a: Alphabet, b: Alphabet) -> None:
    if a.size != b.size:
        raise AlphabetMismatch(f"alphabet size mismatch: {a.size} != {b.size}")


@dataclass(frozen=True)
class Permutation:
    """Bijection of an alphabet; ``image[i]`` is the image of symbol ``i``."""

    image: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(x) for x in self.image))
        if len(self.image) != self.alphabet.size:
            raise ValueError(
                f"permutation has {len(self.image)} images for alphabet of size {self.alphabet.size}"
            )
        if sorted(self.image) != list(range(self.alphabet.size)):
            raise ValueError(f"{list(self.image)} is not a permutation")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)), Alphabet(n))

    @classmethod
    def cyclic_shift(cls, n: int, j: int = 1) -> "Permutation":
        """The canonical ``n``-cycle ``i -> i+1 mod n`` raised to the power ``j``."""
        return cls(tuple((i + j) % n for i in range(n)), Alphabet(n))

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "Permutation":
        """Parse cycle notation such as ``"(0 2 1)(3 4)"``; unlisted symbols are fixed."""
        image = list(range(n))
        seen: set[int] = set()
        body = text.strip()
        if re.fullmatch(r"(\(\s*[0-9a-z]+(\s*[ ,]\s*[0-9a-z]+)*\s*\)\s*)*", body) is None:
            raise ValueError(f"malformed cycle notation: {text!r}")
        for cyc in re.findall(r"\(([^)]*)\)", body):
            elems = [_cycle_symbol(tok, n) for tok in re.split(r"[\s,]+", cyc.strip()) if tok]
            for e in elems:
                if e in seen:
                    raise ValueError(f"symbol {e} appears twice in {text!r}")
                seen.add(e)
            for a, b in zip(elems, elems[1:] + elems[:1]):
                image[a] = b
        return cls(tuple(image), Alphabet(n))

    def __call__(self, symbol: int) -> int:
        return self.image[symbol]

    @cached_property
    def table(self) -> np.ndarray:
        t = np.array(self.image, dtype=np.int64)
        t.setflags(write=False)
        return t

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, x in enumerate(self.image):
            inv[x] = i
        return Permutation(tuple(inv), self.alphabet)

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycle decomposition, each cycle starting at its smallest element."""
        seen = [False] * len(self.image)
        out = []
        for start in range(len(self.image)):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.image[x]
            out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1) or "()"

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.image))


def _cycle_symbol(tok: str, n: int) -> int:
    if tok.isdigit():
        s = int(tok)
    elif len(tok) == 1 and tok in LETTERS:
        s = LETTERS.index(tok)
    else:
        raise ValueError(f"bad symbol {tok!r} in cycle notation")
    if not 0 <= s < n:
        raise ValueError(f"symbol {tok!r} outside alphabet of size {n}")
    return s


def perm_compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p o q``: apply ``q`` first, then ``p``."""
    _check_same(p.alphabet, q.alphabet)
    return Permutation(tuple(p.image[x] for x in q.image), p.alphabet)


def perm_order(p: Permutation) -> int:
    return reduce(math.lcm, (len(c) for c in p.cycles()), 1)


def perm_power(p: Permutation, e: int) -> Permutation:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    e %= perm_order(p)
    result = Permutation.identity(p.alphabet.size)
    base = p
    while e:
        if e & 1:
            result = perm_compose(base, result)
        base = perm_compose(base, base)
        e >>= 1
    return result


def perm_is_cyclic(p: Permutation) -> bool:
    return len(p.cycles()) == 1


def twist(w: Word, delta: Permutation) -> Word:
    """Apply ``delta`` letterwise to ``w``."""
    _check_same(w.alphabet, delta.alphabet)
    img = delta.image
    return Word(tuple(img[s] for s in w.symbols), w.alphabet)


def parse_word(text: str, alphabet: Alphabet | None = None) -> Word:
    """Parse lowercase letters into a word.

    Without an explicit alphabet the size is inferred as ``max symbol + 1``.
    """
    text = text.rstrip("\n")
    limit = alphabet.size if alphabet is not None else len(LETTERS)
    symbols = []
    for pos, ch in enumerate(text):
        idx = LETTERS.find(ch) if len(ch) == 1 else -1
        if idx < 0 or idx >= limit:
            raise ValueError(f"invalid character {ch!r} at position {pos}")
        symbols.append(idx)
    if alphabet is None:
        alphabet = Alphabet(max(symbols, default=0) + 1)
    return Word(tuple(symbols), alphabet)


def render_word(w: Word) -> str:
    if w.alphabet.size > len(LETTERS):
        raise ValueError(f"no text rendering for alphabet of size {w.alphabet.size}")
    return "".join(LETTERS[s] for s in w.symbols)


def word_of(text: str, n: int) -> Word:
    """Shorthand for ``parse_word(text, Alphabet(n))``."""
    return parse_word(text, Alphabet(n))


def write_word_file(path: str | Path, w: Word, binary: bool | None = None) -> int:
    """Write ``w`` as text (one line) or binary (8-byte LE length + 1 byte/symbol).

    Binary is chosen automatically above ``BINARY_THRESHOLD`` symbols.
    Returns the number of bytes written.
    """
    if binary is None:
        binary = len(w) > BINARY_THRESHOLD
    if binary:
        if w.alphabet.size > 256:
            raise ValueError("binary format holds at most 256 symbols")
        data = struct.pack("<Q", len(w)) + w.array.astype(np.uint8).tobytes()
    else:
        data = (render_word(w) + "\n").encode("ascii")
    Path(path).write_bytes(data)
    return len(data)


def read_word_file(path: str | Path, alphabet: Alphabet | None = None) -> Word:
    data = Path(path).read_bytes()
    if len(data) >= 8 and struct.unpack("<Q", data[:8])[0] == len(data) - 8:
        arr = np.frombuffer(data[8:], dtype=np.uint8)
        if alphabet is None:
            alphabet = Alphabet(int(arr.max()) + 1 if arr.size else 1)
        return Word.from_array(arr, alphabet)
    return parse_word(data.decode("ascii"), alphabet)


def as_word(symbols: Iterable[int] | Sequence[int], n: int) -> Word:
    return Word(tuple(symbols), Alphabet(n))
