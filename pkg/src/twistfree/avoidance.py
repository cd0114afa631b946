"""Detection of strongly (k, delta)-repetitions and theorem campaigns."""

from __future__ import annotations

import logging
import os
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lce import LCEIndex
from .morphism import CyclicShiftMorphism, generate_prefix
from .repetition import Occurrence, is_strong_repetition, occurrence_holds
from .words import Permutation, Word, _check_same, perm_power

log = logging.getLogger(__name__)

__all__ = [
    "Occurrence",
    "is_strong_repetition",
    "occurrence_holds",
    "RepetitionQuery",
    "FreenessReport",
    "SelfCheckError",
    "scan_naive",
    "scan_fast",
    "classical_powers",
    "verify_freeness",
    "CampaignCell",
    "CampaignReport",
    "theorem_campaign",
    "StructureAuditReport",
    "audit_length3_structure",
]

THEOREM_FREE = "theorem_free_as_predicted"
THEOREM_COUNTEREXAMPLE = "theorem_COUNTEREXAMPLE"
EXCLUDED_FOUND = "excluded_repetitions_found"
EXCLUDED_NONE = "excluded_none_found"
CELL_ERROR = "error"


class SelfCheckError(RuntimeError):
    """An emitted occurrence failed re-verification."""


@dataclass(frozen=True)
class RepetitionQuery:
    k: int
    delta: Permutation
    m_max: int
    m_min: int = 1

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if not 1 <= self.m_min <= self.m_max:
            raise ValueError(f"need 1 <= m_min <= m_max, got m_min={self.m_min}, m_max={self.m_max}")

    def m_range(self, length: int) -> range:
        return range(self.m_min, min(self.m_max, length // self.k) + 1)


@dataclass(frozen=True)
class FreenessReport:
    query: RepetitionQuery
    word_length: int
    occurrences: tuple[Occurrence, ...]
    scan_algorithm: str = "fast"

    @property
    def free(self) -> bool:
        return not self.occurrences

    @property
    def minimal_m(self) -> int | None:
        return min((o.m for o in self.occurrences), default=None)

    @property
    def earliest(self) -> Occurrence | None:
        return min(self.occurrences, default=None)

    @property
    def scanned_m_max(self) -> int:
        return min(self.query.m_max, self.word_length // self.query.k)

    def summary(self) -> str:
        scope = f"word_length={self.word_length} k={self.query.k} m={self.query.m_min}..{self.scanned_m_max}"
        if self.free:
            return f"free within range ({scope})"
        return f"{len(self.occurrences)} occurrences, minimal m={self.minimal_m} ({scope})"


def scan_naive(w: Word, q: RepetitionQuery) -> list[Occurrence]:
    """Every (start, m) hosting a repetition, by direct symbol comparison."""
    _check_same(w.alphabet, q.delta.alphabet)
    # bytes slices compare with memcmp; tuples are the fallback for large alphabets
    seq = bytes if w.alphabet.size <= 256 else tuple
    s = seq(w.symbols)
    n = len(s)
    k = q.k
    twisted = [None] + [seq(perm_power(q.delta, i).image[x] for x in s) for i in range(1, k)]
    # block 1 must start with delta(w[start]): only those positions are candidates
    where: dict[int, list[int]] = {}
    for p, x in enumerate(s):
        where.setdefault(x, []).append(p)
    out = []
    for start in range(n):
        top = min(q.m_max, (n - start) // k)
        lo = bisect_left(where.get(twisted[1][start], ()), start + q.m_min)
        for p in where.get(twisted[1][start], ())[lo:]:
            m = p - start
            if m > top:
                break
            for i in range(1, k):
                a = start + i * m
                d = twisted[i]
                if s[a] != d[start] or s[a : a + m] != d[start : start + m]:
                    break
            else:
                out.append(Occurrence(start, m, k))
    return out


def scan_fast(w: Word, q: RepetitionQuery) -> list[Occurrence]:
    """Same output as :func:`scan_naive`, using LCE queries.

    Block ``i`` at ``start + i*m`` must match the ``delta^i``-twisted word at
    ``start`` for at least ``m`` symbols.  All twisted copies share one
    suffix structure, glued with separators outside the alphabet.
    """
    _check_same(w.alphabet, q.delta.alphabet)
    n = len(w)
    k = q.k
    ms = q.m_range(n)
    if not len(ms):
        return []
    base = w.array
    parts = [base]
    offsets = [0]
    sep = w.alphabet.size
    pos = n
    for i in range(1, k):
        parts.append(np.array([sep + i - 1]))
        pos += 1
        offsets.append(pos)
        parts.append(perm_power(q.delta, i).table[base])
        pos += n
    parts.append(np.array([sep + k - 1]))
    index = LCEIndex(np.concatenate(parts))

    starts_out = []
    m_out = []
    for m in ms:
        alive = np.arange(n - k * m + 1)
        for i in range(1, k):
            if not alive.size:
                break
            ext = index.query(alive + i * m, offsets[i] + alive)
            alive = alive[ext >= m]
        if alive.size:
            starts_out.append(alive)
            m_out.append(np.full(alive.size, m))
    if not starts_out:
        return []
    st = np.concatenate(starts_out)
    mm = np.concatenate(m_out)
    order = np.lexsort((mm, st))
    return [Occurrence(int(a), int(b), k) for a, b in zip(st[order], mm[order])]


def classical_powers(w: Word, k: int, m_min: int, m_max: int) -> list[tuple[int, int]]:
    """Classical k-powers ``X^k`` as (start, period), via runs of ``w[t] == w[t+p]``."""
    a = w.array
    n = len(a)
    out = []
    for p in range(m_min, min(m_max, n // k) + 1):
        eq = (a[p:] == a[:-p]).astype(np.int64)
        csum = np.concatenate([[0], np.cumsum(eq)])
        need = (k - 1) * p
        starts = np.arange(n - k * p + 1)
        ok = csum[starts + need] - csum[starts] == need
        out.extend((int(s), p) for s in starts[ok])
    out.sort()
    return out


def verify_freeness(prefix: Word, q: RepetitionQuery) -> FreenessReport:
    """Scan with :func:`scan_fast` and re-verify every hit before reporting it."""
    found = scan_fast(prefix, q)
    for occ in found:
        if not occurrence_holds(prefix, occ, q.delta):
            raise SelfCheckError(f"scanner emitted {occ}, which fails re-verification")
    found.sort(key=lambda o: (o.m, o.start))
    return FreenessReport(q, len(prefix), tuple(found), "fast")


@dataclass(frozen=True)
class CampaignCell:
    N: int
    j: int
    theorem_case: bool
    status: str
    report: FreenessReport | None = None
    error: str | None = None

    @property
    def occurrences(self) -> tuple[Occurrence, ...]:
        return self.report.occurrences if self.report else ()


@dataclass(frozen=True)
class CampaignReport:
    N_values: tuple[int, ...]
    j_policy: str
    prefix_length: int
    m_max: int
    seed: int
    k: int
    cells: tuple[CampaignCell, ...] = field(default_factory=tuple)

    def cell(self, N: int, j: int) -> CampaignCell:
        for c in self.cells:
            if (c.N, c.j) == (N, j):
                return c
        raise KeyError((N, j))

    @property
    def counterexamples(self) -> list[CampaignCell]:
        return [c for c in self.cells if c.status == THEOREM_COUNTEREXAMPLE]


def _theorem_case(N: int, j: int) -> bool:
    return N >= 3 and j % N != 1


def _run_cell(N: int, j: int, prefix_length: int, m_max: int, seed: int, k: int) -> CampaignCell:
    theorem = _theorem_case(N, j)
    try:
        psi = CyclicShiftMorphism(Permutation.cyclic_shift(N, 1), seed % N)
        prefix = generate_prefix(psi, prefix_length)
        q = RepetitionQuery(k, Permutation.cyclic_shift(N, j), m_max)
        report = verify_freeness(prefix, q)
    except Exception as exc:  # recorded per cell, never fatal
        log.exception("campaign cell N=%d j=%d failed", N, j)
        return CampaignCell(N, j, theorem, CELL_ERROR, error=f"{type(exc).__name__}: {exc}")
    if theorem:
        status = THEOREM_FREE if report.free else THEOREM_COUNTEREXAMPLE
    else:
        status = EXCLUDED_NONE if report.free else EXCLUDED_FOUND
    return CampaignCell(N, j, theorem, status, report)


def theorem_campaign(
    N_values,
    j_policy: str = "theorem_only",
    prefix_length: int = 1 << 15,
    m_max: int = 512,
    seed: int = 0,
    k: int = 3,
    threads: int | None = None,
) -> CampaignReport:
    """Scan fixed-point prefixes for every (N, j) cell with ``delta = sigma^j``.

    ``j_policy="theorem_only"`` keeps the cells with ``j != 1 mod N``;
    ``"all_j"`` adds the excluded ones.  Cells run concurrently (capped by
    ``threads`` or ``TW_THREADS``) and come back sorted by (N, j).
    """
    if j_policy not in ("theorem_only", "all_j"):
        raise ValueError(f"unknown j_policy {j_policy!r}")
    Ns = tuple(sorted(set(N_values)))
    if any(N < 2 for N in Ns):
        raise ValueError("every N must be >= 2")
    if prefix_length < 3 * m_max:
        raise ValueError(f"prefix_length {prefix_length} < 3*m_max = {3 * m_max}")
    jobs = [
        (N, j)
        for N in Ns
        for j in range(1, N)
        if j_policy == "all_j" or _theorem_case(N, j)
    ]
    if threads is None:
        threads = int(os.environ.get("TW_THREADS", "0") or 0) or min(4, os.cpu_count() or 1)
    threads = max(1, threads)
    if threads == 1 or len(jobs) <= 1:
        cells = [_run_cell(N, j, prefix_length, m_max, seed, k) for N, j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(lambda nj: _run_cell(*nj, prefix_length, m_max, seed, k), jobs))
    cells.sort(key=lambda c: (c.N, c.j))
    return CampaignReport(Ns, j_policy, prefix_length, m_max, seed, k, tuple(cells))


@dataclass(frozen=True)
class StructureAuditReport:
    """Length-3 factors of a fixed-point prefix against the shape ``x sigma(x) sigma^2(x)``."""

    sigma: Permutation
    seed: int
    prefix_length: int
    # (factor symbols, first start, conforms)
    entries: tuple[tuple[tuple[int, int, int], int, bool], ...]

    @property
    def conforming(self) -> list[tuple[int, int, int]]:
        return [f for f, _, ok in self.entries if ok]

    @property
    def nonconforming(self) -> list[tuple[int, int, int]]:
        return [f for f, _, ok in self.entries if not ok]

    def recheck(self, prefix: Word | None = None) -> bool:
        """Re-derive every classification; optionally confirm each factor sits where claimed."""
        img = self.sigma.image
        for f, start, ok in self.entries:
            x = f[0]
            if ok != (f == (x, img[x], img[img[x]])):
                return False
            if prefix is not None and tuple(prefix.symbols[start : start + 3]) != f:
                return False
        return True


def audit_length3_structure(psi: CyclicShiftMorphism, prefix_length: int) -> StructureAuditReport:
    if prefix_length < 3:
        raise ValueError(f"prefix_length must be >= 3, got {prefix_length}")
    w = generate_prefix(psi, prefix_length).symbols
    img = psi.sigma.image
    first: dict[tuple[int, int, int], int] = {}
    for t in range(len(w) - 2):
        first.setdefault((w[t], w[t + 1], w[t + 2]), t)
    entries = tuple(
        (f, start, f == (f[0], img[f[0]], img[img[f[0]]]))
        for f, start in sorted(first.items())
    )
    return StructureAuditReport(psi.sigma, psi.seed, prefix_length, entries)
