"""Command-line entry point.

Subcommands: generate, twist, scan, verify, campaign, complexity, descend,
audit3.  Exit codes: 0 run completed, 1 I/O failure, 2 invalid
configuration, 3 self-check failure (an emitted occurrence did not
re-verify).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .avoidance import (
    FreenessReport,
    RepetitionQuery,
    SelfCheckError,
    audit_length3_structure,
    occurrence_holds,
    scan_naive,
    theorem_campaign,
    verify_freeness,
)
from .complexity import complexity_profile, entropy_estimate, fit_linear
from .morphism import CyclicShiftMorphism, descend_occurrence, generate_prefix
from .repetition import Occurrence
from .reports import emit_report
from .words import (
    LETTERS,
    Alphabet,
    Permutation,
    Word,
    parse_word,
    perm_power,
    read_word_file,
    render_word,
    twist,
    write_word_file,
)

log = logging.getLogger("twistfree")

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_SELFCHECK = 0, 1, 2, 3

class ConfigError(ValueError):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


@dataclass
class RunConfig:
    subcommand: str
    N: int | None = None
    j: int = 1
    seed_symbol: int = 0
    prefix_length: int | None = None
    k: int = 3
    m_max: int | None = None
    m_min: int = 1
    output_format: str = "tsv"
    output_path: Path | None = None
    input_path: Path | None = None
    input_word: str | None = None
    sigma: str | None = None
    timestamp: bool = True
    # subcommand extras
    algorithm: str = "fast"
    recheck: Path | None = None
    N_values: tuple[int, ...] = ()
    j_policy: str = "theorem_only"
    threads: int | None = None
    k_max: int | None = None
    window: tuple[int, int] | None = None
    start: int | None = None
    m: int | None = None
    binary: bool = False


def _parse_seed(text: str) -> int:
    if text.isdigit():
        return int(text)
    if len(text) == 1 and text in LETTERS:
        return LETTERS.index(text)
    raise argparse.ArgumentTypeError(f"seed must be a letter or a non-negative integer, got {text!r}")


def _parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {text!r}") from None


def _parse_ns(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistfree", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, help="alphabet size")
    common.add_argument("--j", type=int, default=1, help="twist exponent, delta = sigma^j (reduced mod N)")
    common.add_argument("--seed", type=_parse_seed, default=0, dest="seed_symbol", help="seed letter a0 (letter or index)")
    common.add_argument("--sigma", help='explicit sigma in cycle notation, e.g. "(0 2 1)"')
    common.add_argument("--length", type=int, dest="prefix_length", help="prefix length")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv", dest="output_format")
    common.add_argument("--output", type=Path, dest="output_path")
    common.add_argument("--input", type=Path, dest="input_path", help="word file (text or binary)")
    common.add_argument("--no-timestamp", action="store_false", dest="timestamp")

    scan_opts = argparse.ArgumentParser(add_help=False)
    scan_opts.add_argument("--k", type=int, default=3)
    scan_opts.add_argument("--m-max", type=int, dest="m_max")
    scan_opts.add_argument("--m-min", type=int, default=1, dest="m_min")

    p = sub.add_parser("generate", parents=[common], help="prefix of the fixed point")
    p.add_argument("--binary", action="store_true", help="force the binary word format (needs --output)")

    p = sub.add_parser("twist", parents=[common], help="apply delta = sigma^j letterwise")
    p.add_argument("--input-word", dest="input_word")

    p = sub.add_parser("scan", parents=[common, scan_opts], help="list strongly (k, delta)-repetitions")
    p.add_argument("--input-word", dest="input_word")
    p.add_argument("--algorithm", choices=("fast", "naive"), default="fast")

    p = sub.add_parser("verify", parents=[common, scan_opts], help="self-checking freeness verification")
    p.add_argument("--recheck", type=Path, help="re-verify every occurrence in an emitted report")

    p = sub.add_parser("campaign", parents=[common, scan_opts], help="sweep (N, j) cells")
    p.add_argument("--N-values", type=_parse_ns, dest="N_values", default=(3, 4, 5))
    p.add_argument("--j-policy", choices=("theorem_only", "all_j"), default="theorem_only", dest="j_policy")
    p.add_argument("--threads", type=int)

    p = sub.add_parser("complexity", parents=[common], help="factor complexity profile")
    p.add_argument("--input-word", dest="input_word")
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--window", type=_parse_window)

    p = sub.add_parser("descend", parents=[common, scan_opts], help="descent step on located repetitions")
    p.add_argument("--start", type=int)
    p.add_argument("--m", type=int)

    sub.add_parser("audit3", parents=[common], help="length-3 factor shape audit")
    return parser


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    known = set(RunConfig.__dataclass_fields__)
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in known})


# -- helpers -----------------------------------------------------------------


def _require(cfg: RunConfig, name: str, flag: str):
    value = getattr(cfg, name)
    if value is None:
        raise ConfigError(flag, f"required for '{cfg.subcommand}'")
    return value


def _alphabet_size(cfg: RunConfig) -> int:
    N = _require(cfg, "N", "--N")
    if N < 2:
        raise ConfigError("--N", f"must be >= 2, got {N}")
    return N


def _sigma(cfg: RunConfig, N: int) -> Permutation:
    if cfg.sigma is None:
        return Permutation.cyclic_shift(N, 1)
    try:
        return Permutation.from_cycles(cfg.sigma, N)
    except ValueError as exc:
        raise ConfigError("--sigma", str(exc)) from None


def _reduced_j(cfg: RunConfig, N: int) -> int:
    if cfg.j < 0:
        raise ConfigError("--j", f"must be >= 0, got {cfg.j}")
    j = cfg.j % N
    if j == 0:
        log.warning("j = %d is 0 mod %d: delta is the identity, scanning classical powers", cfg.j, N)
    return j


def _morphism(cfg: RunConfig, N: int) -> CyclicShiftMorphism:
    if not 0 <= cfg.seed_symbol < N:
        raise ConfigError("--seed", f"symbol {cfg.seed_symbol} outside alphabet of size {N}")
    return CyclicShiftMorphism(_sigma(cfg, N), cfg.seed_symbol)


def _length(cfg: RunConfig) -> int:
    L = _require(cfg, "prefix_length", "--length")
    if L < 1:
        raise ConfigError("--length", f"must be >= 1, got {L}")
    return L


def _input_word(cfg: RunConfig, N: int | None) -> Word | None:
    alphabet = Alphabet(N) if N else None
    if cfg.input_word is not None:
        try:
            return parse_word(cfg.input_word, alphabet)
        except ValueError as exc:
            raise ConfigError("--input-word", str(exc)) from None
    if cfg.input_path is not None:
        try:
            return read_word_file(cfg.input_path, alphabet)
        except ValueError as exc:
            raise ConfigError("--input", str(exc)) from None
    return None


def _subject_word(cfg: RunConfig, N: int) -> Word:
    w = _input_word(cfg, N)
    if w is None:
        w = generate_prefix(_morphism(cfg, N), _length(cfg))
    return w


def _query(cfg: RunConfig, N: int, length: int) -> RepetitionQuery:
    if cfg.k < 2:
        raise ConfigError("--k", f"must be >= 2, got {cfg.k}")
    m_max = cfg.m_max if cfg.m_max is not None else max(1, length // cfg.k)
    if m_max < 1:
        raise ConfigError("--m-max", f"must be >= 1, got {m_max}")
    if not 1 <= cfg.m_min <= m_max:
        raise ConfigError("--m-min", f"must lie in 1..{m_max}, got {cfg.m_min}")
    delta = perm_power(_sigma(cfg, N), _reduced_j(cfg, N))
    return RepetitionQuery(cfg.k, delta, m_max, cfg.m_min)


def _params(cfg: RunConfig, **more) -> dict:
    out = {"subcommand": cfg.subcommand}
    for name in ("N", "j", "seed_symbol", "prefix_length", "k", "m_max", "sigma"):
        value = getattr(cfg, name)
        if value is not None:
            out[name] = value
    out.update(more)
    return out


def _emit(cfg: RunConfig, report, **kw) -> None:
    emit_report(report, cfg.output_format, cfg.output_path, timestamp=cfg.timestamp, **kw)


# -- subcommands -------------------------------------------------------------


def _cmd_generate(cfg: RunConfig) -> int:
    N = _alphabet_size(cfg)
    w = generate_prefix(_morphism(cfg, N), _length(cfg))
    if cfg.output_path is not None:
        write_word_file(cfg.output_path, w, binary=True if cfg.binary else None)
    else:
        if cfg.binary:
            raise ConfigError("--binary", "needs --output")
        sys.stdout.write(render_word(w) + "\n")
    return EXIT_OK


def _cmd_twist(cfg: RunConfig) -> int:
    N = _alphabet_size(cfg)
    w = _input_word(cfg, N)
    if w is None:
        raise ConfigError("--input-word", "twist needs --input-word or --input")
    out = twist(w, perm_power(_sigma(cfg, N), _reduced_j(cfg, N)))
    if cfg.output_path is not None:
        write_word_file(cfg.output_path, out)
    else:
        sys.stdout.write(render_word(out) + "\n")
    return EXIT_OK


def _cmd_scan(cfg: RunConfig) -> int:
    N = _alphabet_size(cfg)
    w = _subject_word(cfg, N)
    q = _query(cfg, N, len(w))
    if cfg.algorithm == "naive":
        found = scan_naive(w, q)
        for occ in found:
            if not occurrence_holds(w, occ, q.delta):
                raise SelfCheckError(f"{occ} fails re-verification")
        found.sort(key=lambda o: (o.m, o.start))
        report = FreenessReport(q, len(w), tuple(found), "naive")
    else:
        report = verify_freeness(w, q)
    _emit(cfg, report, params=_params(cfg, j=cfg.j % N, word_length=len(w)))
    return EXIT_OK


def _recheck(cfg: RunConfig) -> int:
    try:
        text = cfg.recheck.read_text()
    except OSError as exc:
        raise OSError(f"cannot read {cfg.recheck}: {exc}") from exc
    rows = []
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        body = doc.get("body", {})
        params = doc.get("params", {})
        seed = params.get("seed_symbol", params.get("seed", cfg.seed_symbol))
        if "cells" in body:
            seed = body.get("params", {}).get("seed", seed)
            for c in body["cells"]:
                rows += [(o["start"], o["m"], o["k"], c["j"], c["N"]) for o in c["occurrences"]]
        else:
            rows += [(o["start"], o["m"], o["k"], body["j"], body["N"]) for o in body.get("occurrences", [])]
    else:
        seed = cfg.seed_symbol
        for line in text.splitlines():
            if not line or line.startswith("#") or line.startswith("start\t"):
                continue
            start, m, k, j, N = line.split("\t")
            rows.append((int(start), int(m), int(k), int(j), int(N)))
    failures = 0
    by_n: dict[int, Word] = {}
    for N in sorted({r[4] for r in rows}):
        need = max(r[0] + r[1] * r[2] for r in rows if r[4] == N)
        by_n[N] = generate_prefix(CyclicShiftMorphism(_sigma(cfg, N), seed % N), need)
    for start, m, k, j, N in rows:
        delta = perm_power(_sigma(cfg, N), j % N)
        if not occurrence_holds(by_n[N], Occurrence(start, m, k), delta):
            failures += 1
            print(f"FAILED {start}\t{m}\t{k}\t{j}\t{N}", file=sys.stderr)
    print(f"rechecked {len(rows)} occurrences: {len(rows) - failures} verified, {failures} failed")
    return EXIT_SELFCHECK if failures else EXIT_OK


def _cmd_verify(cfg: RunConfig) -> int:
    if cfg.recheck is not None:
        return _recheck(cfg)
    N = _alphabet_size(cfg)
    psi = _morphism(cfg, N)
    w = generate_prefix(psi, _length(cfg))
    report = verify_freeness(w, _query(cfg, N, len(w)))
    _emit(cfg, report, params=_params(cfg, j=cfg.j % N))
    return EXIT_OK


def _cmd_campaign(cfg: RunConfig) -> int:
    if not cfg.N_values or any(n < 2 for n in cfg.N_values):
        raise ConfigError("--N-values", "need one or more alphabet sizes, each >= 2")
    length = cfg.prefix_length if cfg.prefix_length is not None else 1 << 15
    m_max = cfg.m_max if cfg.m_max is not None else 512
    if length < 3 * m_max:
        raise ConfigError("--length", f"must be >= 3 * m_max = {3 * m_max}")
    if cfg.k < 2:
        raise ConfigError("--k", f"must be >= 2, got {cfg.k}")
    if cfg.sigma is not None:
        raise ConfigError("--sigma", "campaigns always use the canonical cycle")
    threads = cfg.threads
    if threads is None and os.environ.get("TW_THREADS"):
        threads = int(os.environ["TW_THREADS"])
    report = theorem_campaign(cfg.N_values, cfg.j_policy, length, m_max, cfg.seed_symbol, cfg.k, threads)
    params = {
        "subcommand": "campaign",
        "N_values": list(report.N_values),
        "j_policy": cfg.j_policy,
        "prefix_length": length,
        "m_max": m_max,
        "k": cfg.k,
        "seed_symbol": cfg.seed_symbol,
    }
    _emit(cfg, report, params=params)
    return EXIT_OK


def _cmd_complexity(cfg: RunConfig) -> int:
    N = _alphabet_size(cfg)
    w = _subject_word(cfg, N)
    k_max = cfg.k_max if cfg.k_max is not None else min(len(w), 512)
    if not 1 <= k_max <= len(w):
        raise ConfigError("--k-max", f"must lie in 1..{len(w)}")
    profile = complexity_profile(w, k_max)
    fit = None
    try:
        fit = fit_linear(profile, cfg.window)
    except ValueError as exc:
        if cfg.window is not None:
            raise ConfigError("--window", str(exc)) from None
    entropy = entropy_estimate(profile) if profile.stable_upto >= 2 else None
    _emit(cfg, profile, params=_params(cfg, k_max=k_max), fit=fit, entropy=entropy)
    return EXIT_OK


def _cmd_descend(cfg: RunConfig) -> int:
    N = _alphabet_size(cfg)
    psi = _morphism(cfg, N)
    w = generate_prefix(psi, _length(cfg))
    q = _query(cfg, N, len(w))
    if (cfg.start is None) != (cfg.m is None):
        raise ConfigError("--start", "--start and --m go together")
    if cfg.start is not None:
        occs = [Occurrence(cfg.start, cfg.m, cfg.k)]
    else:
        occs = list(verify_freeness(w, q).occurrences)
    try:
        reports = [descend_occurrence(psi, w, o, q.delta) for o in occs]
    except ValueError as exc:
        raise ConfigError("--start", str(exc)) from None
    _emit(cfg, reports, params=_params(cfg, j=cfg.j % N))
    return EXIT_OK


def _cmd_audit3(cfg: RunConfig) -> int:
    N = _alphabet_size(cfg)
    psi = _morphism(cfg, N)
    L = _length(cfg)
    if L < 3:
        raise ConfigError("--length", "must be >= 3")
    report = audit_length3_structure(psi, L)
    if not report.recheck(generate_prefix(psi, L)):
        raise SelfCheckError("audit classification failed to re-check")
    _emit(cfg, report, params=_params(cfg))
    return EXIT_OK


COMMANDS = {
    "generate": _cmd_generate,
    "twist": _cmd_twist,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
    "campaign": _cmd_campaign,
    "complexity": _cmd_complexity,
    "descend": _cmd_descend,
    "audit3": _cmd_audit3,
}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SelfCheckError as exc:
        print(f"self-check failed: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    return run(config_from_args(argv))


if __name__ == "__main__":
    sys.exit(main())
