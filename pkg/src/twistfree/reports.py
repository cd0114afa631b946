"""TSV and JSON serialization of every report type.

Occurrence TSV
    header ``start  m  k  j  N``; one row per occurrence; ``#`` summary lines.
Complexity TSV
    header ``k  p(k)  stable``; fit and entropy as trailing ``#`` lines.
JSON
    ``{"tool_version", "params", "generated_at", "body"}``.  ``generated_at``
    is ``null`` when timestamps are disabled, which makes output byte-stable.
"""

from __future__ import annotations

import datetime as _dt
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .avoidance import CampaignReport, FreenessReport, StructureAuditReport
from .complexity import ComplexityProfile, LinearFit
from .morphism import DescentReport
from .words import LETTERS, Permutation, perm_power

OCCURRENCE_HEADER = ("start", "m", "k", "j", "N")


def _num(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def _letters(symbols) -> str:
    return "".join(LETTERS[s] for s in symbols) if all(s < 26 for s in symbols) else ",".join(map(str, symbols))


def exponent_of(delta: Permutation) -> int | None:
    """``j`` with ``delta = sigma^j`` for the canonical cycle, if there is one."""
    n = delta.alphabet.size
    sigma = Permutation.cyclic_shift(n, 1)
    for j in range(n):
        if perm_power(sigma, j) == delta:
            return j
    return None


def _occ_rows(occurrences, j, N) -> list[str]:
    jj = "-" if j is None else str(j)
    return [f"{o.start}\t{o.m}\t{o.k}\t{jj}\t{N}" for o in occurrences]


def freeness_tsv(report: FreenessReport, j: int | None = None) -> str:
    N = report.query.delta.alphabet.size
    if j is None:
        j = exponent_of(report.query.delta)
    lines = ["\t".join(OCCURRENCE_HEADER)]
    lines += _occ_rows(report.occurrences, j, N)
    lines.append(f"# {report.summary()}")
    return "\n".join(lines) + "\n"


def freeness_body(report: FreenessReport, j: int | None = None) -> dict:
    q = report.query
    return {
        "N": q.delta.alphabet.size,
        "j": exponent_of(q.delta) if j is None else j,
        "delta": list(q.delta.image),
        "k": q.k,
        "m_min": q.m_min,
        "m_max": q.m_max,
        "scanned_m_max": report.scanned_m_max,
        "word_length": report.word_length,
        "scan_algorithm": report.scan_algorithm,
        "free_within_range": report.free,
        "minimal_m": report.minimal_m,
        "occurrences": [{"start": o.start, "m": o.m, "k": o.k} for o in report.occurrences],
    }


def campaign_tsv(report: CampaignReport) -> str:
    lines = ["\t".join(OCCURRENCE_HEADER)]
    for c in report.cells:
        lines += _occ_rows(c.occurrences, c.j, c.N)
    lines.append(
        f"# campaign k={report.k} prefix_length={report.prefix_length} m_max={report.m_max} "
        f"seed={report.seed} j_policy={report.j_policy}"
    )
    for c in report.cells:
        extra = f" error={c.error}" if c.error else ""
        first = c.report.earliest if c.report else None
        where = f" earliest=({first.start},{first.m})" if first else ""
        lines.append(f"# cell N={c.N} j={c.j} status={c.status} occurrences={len(c.occurrences)}{where}{extra}")
    return "\n".join(lines) + "\n"


def campaign_body(report: CampaignReport) -> dict:
    return {
        "params": {
            "N_values": list(report.N_values),
            "j_policy": report.j_policy,
            "prefix_length": report.prefix_length,
            "m_max": report.m_max,
            "seed": report.seed,
            "k": report.k,
        },
        "cells": [
            {
                "N": c.N,
                "j": c.j,
                "theorem_case": c.theorem_case,
                "status": c.status,
                "error": c.error,
                "occurrences": [{"start": o.start, "m": o.m, "k": o.k} for o in c.occurrences],
            }
            for c in report.cells
        ],
    }


def complexity_tsv(profile: ComplexityProfile, fit: LinearFit | None = None, entropy: float | None = None) -> str:
    lines = ["k\tp(k)\tstable"]
    for k in range(1, profile.k_max + 1):
        lines.append(f"{k}\t{profile.counts[k]}\t{int(k <= profile.stable_upto)}")
    lines.append(f"# word_length={profile.word_length} stable_upto={profile.stable_upto}")
    if fit is not None:
        lines.append(
            f"# fit window={fit.window[0]}..{fit.window[1]} slope={_num(fit.slope)} "
            f"intercept={_num(fit.intercept)} max_residual={_num(fit.max_residual)}"
        )
        if profile.alphabet_size:
            lines.append(f"# conjectured slope N-1={profile.alphabet_size - 1} observed={_num(fit.slope)}")
    else:
        lines.append("# fit unavailable (window outside stable horizon)")
    if entropy is not None:
        lines.append(f"# entropy_estimate={entropy:.12g}")
    return "\n".join(lines) + "\n"


def complexity_body(profile: ComplexityProfile, fit: LinearFit | None = None, entropy: float | None = None) -> dict:
    return {
        "word_length": profile.word_length,
        "k_max": profile.k_max,
        "stable_upto": profile.stable_upto,
        "counts": list(profile.counts[1:]),
        "fit": None
        if fit is None
        else {
            "window": list(fit.window),
            "slope": _num(fit.slope),
            "intercept": _num(fit.intercept),
            "max_residual": _num(fit.max_residual),
        },
        "entropy_estimate": entropy,
    }


def descent_tsv(reports: list[DescentReport]) -> str:
    lines = ["start\tm\tk\tstart_parity\tm_even\tpreimage\tpreimage_is_repetition"]
    for r in reports:
        pre = "-" if r.preimage_blocks is None else "|".join(_letters(b.symbols) for b in r.preimage_blocks)
        again = "-" if r.preimage_is_repetition is None else str(int(r.preimage_is_repetition))
        o = r.occurrence
        lines.append(f"{o.start}\t{o.m}\t{o.k}\t{r.start_parity}\t{int(r.m_even)}\t{pre}\t{again}")
    descended = sum(r.preimage_blocks is not None for r in reports)
    lines.append(f"# {len(reports)} occurrences examined, {descended} descended")
    return "\n".join(lines) + "\n"


def descent_body(reports: list[DescentReport]) -> dict:
    return {"reports": [r.to_dict() for r in reports]}


def audit_tsv(report: StructureAuditReport) -> str:
    lines = ["factor\tfirst_start\tconforms"]
    for f, start, ok in report.entries:
        lines.append(f"{_letters(f)}\t{start}\t{int(ok)}")
    lines.append(
        f"# prefix_length={report.prefix_length} distinct={len(report.entries)} "
        f"conforming={len(report.conforming)} nonconforming={len(report.nonconforming)}"
    )
    return "\n".join(lines) + "\n"


def audit_body(report: StructureAuditReport) -> dict:
    return {
        "sigma": list(report.sigma.image),
        "seed": report.seed,
        "prefix_length": report.prefix_length,
        "factors": [
            {"factor": _letters(f), "first_start": start, "conforms": ok} for f, start, ok in report.entries
        ],
    }


def _dispatch(report):
    if isinstance(report, FreenessReport):
        return freeness_tsv, freeness_body
    if isinstance(report, CampaignReport):
        return campaign_tsv, campaign_body
    if isinstance(report, StructureAuditReport):
        return audit_tsv, audit_body
    if isinstance(report, ComplexityProfile):
        return complexity_tsv, complexity_body
    if isinstance(report, list) and all(isinstance(r, DescentReport) for r in report):
        return descent_tsv, descent_body
    raise TypeError(f"no serializer for {type(report).__name__}")


def render_report(report, fmt: str = "tsv", params: dict | None = None, timestamp: bool = True, **extra) -> str:
    to_tsv, to_body = _dispatch(report)
    if fmt == "tsv":
        return to_tsv(report, **extra)
    if fmt == "json":
        doc = {
            "tool_version": __version__,
            "params": params or {},
            "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds") if timestamp else None,
            "body": to_body(report, **extra),
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(report, fmt: str = "tsv", path: str | Path | None = None, params: dict | None = None,
                timestamp: bool = True, **extra) -> int:
    """Serialize ``report`` to ``path`` (stdout when ``None``); returns bytes written."""
    data = render_report(report, fmt, params, timestamp, **extra).encode("utf-8")
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)
    return len(data)
