"""Command-line entry point: ``markovlaws {simulate,analyze,scan,demo}``.

Data goes to stdout (or ``--out``); diagnostics go to stderr.
Exit statuses: 0 success, 2 input/validation error, 3 numerical degeneracy,
4 scan configuration error (window does not fit the data).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone

import numpy as np

from . import fixtures
from .errors import DegeneracyError, DegenerateNullspace, EmptyScan, InputError, WindowTooSmall
from .ingest import ingest
from .linlaw import EmbeddingConfig, excess_rank_score, extract_law, series_spectrum
from .markov import (
    LEFT_BIT,
    equilibrium,
    project,
    read_series,
    read_transfer,
    simulate,
    spectrum,
    write_series,
)
from .scanner import DEFAULT_WIDTH, format_csv, format_jsonl, scan_prices

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_SCAN = 4

DEFAULT_LAGS = 20
DEFAULT_ORDER = 5
DEFAULT_SEED = 42
DEFAULT_LENGTH = 1_000_000


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_complex(values) -> str:
    return ", ".join(f"{v.real:.10g}{v.imag:+.10g}j" if v.imag else f"{v.real:.10g}"
                     for v in values)


def _parse_time(text: str | None) -> int | None:
    if text is None:
        return None
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _load_matrix(source: str):
    if source in ("x", "y"):
        return fixtures.builtin_matrix(source)
    return read_transfer(source)


def cmd_simulate(args) -> int:
    T = _load_matrix(args.matrix)
    _diag(f"spectrum: {_fmt_complex(spectrum(T))}")
    try:
        _diag(f"equilibrium: {', '.join(f'{v:.10g}' for v in equilibrium(T))}")
    except DegeneracyError as exc:
        _diag(f"equilibrium: not unique ({exc})")
    series = simulate(T, args.x0, args.length, args.seed)
    buf = io.StringIO()
    write_series(series, buf)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def analysis_record(series, cfg: EmbeddingConfig) -> dict:
    spec = series_spectrum(series, cfg)
    rec = {
        "eigenvalues": spec.eigenvalues.tolist(),
        "normalized": spec.normalized.tolist(),
        "score": excess_rank_score(spec) if cfg.order >= 3 else None,
        "degenerate": False,
        "coefficients": None,
        "roots": None,
        "residual": None,
    }
    try:
        law = extract_law(spec)
    except DegenerateNullspace:
        rec["degenerate"] = True
        return rec
    rec["coefficients"] = law.coeffs.tolist()
    rec["roots"] = [[float(r.real), float(r.imag)] for r in law.roots]
    rec["residual"] = law.residual
    return rec


def _analysis_csv(rec: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "eigenvalue", "normalized", "coefficient", "root_real", "root_imag",
                "degenerate"])
    n = len(rec["normalized"])
    for i in range(n):
        coeff = rec["coefficients"][i] if rec["coefficients"] else ""
        root = rec["roots"][i] if rec["roots"] and i < len(rec["roots"]) else ("", "")
        w.writerow([i + 1, repr(rec["eigenvalues"][i]), repr(rec["normalized"][i]),
                    repr(coeff) if coeff != "" else "", *(repr(v) if v != "" else "" for v in root),
                    int(rec["degenerate"])])
    return buf.getvalue()


def cmd_analyze(args) -> int:
    source = sys.stdin if args.input in (None, "-") else args.input
    series = read_series(source)
    cfg = EmbeddingConfig(args.lags, args.order)
    rec = analysis_record(series, cfg)
    if rec["degenerate"]:
        _diag("degenerate: the Gram null space has dimension > 1; no unique law")
    text = json.dumps(rec) + "\n" if args.format == "json" else _analysis_csv(rec)
    _emit(text, args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    time_range = None
    if args.date_from or args.date_to:
        time_range = (_parse_time(args.date_from), _parse_time(args.date_to))
    prices, report = ingest(args.input, time_range)
    _diag("ingest: " + json.dumps(report.as_dict()))
    cfg = EmbeddingConfig(args.lags, args.order)
    try:
        scores = scan_prices(prices, args.width, args.stride, cfg)
    except (WindowTooSmall, EmptyScan) as exc:
        _diag(f"error: {exc}")
        return EXIT_SCAN
    _diag(f"scan: {len(scores)} windows")
    _emit(format_jsonl(scores) if args.format == "json" else format_csv(scores), args.out)
    return EXIT_OK


def demo_spectra(seed: int = DEFAULT_SEED, length: int = DEFAULT_LENGTH,
                 cfg: EmbeddingConfig = EmbeddingConfig()) -> dict[str, np.ndarray]:
    """Normalized Gram spectra of the binary chain, the 4-state chain and
    the left bit of the 4-state chain."""
    seed_x, seed_y = np.random.SeedSequence(seed).spawn(2)
    x = simulate(fixtures.binary_demo_matrix(), fixtures.X0, length, seed_x)
    y = simulate(fixtures.hidden_demo_matrix(), fixtures.Y0, length, seed_y)
    z = project(y, LEFT_BIT)
    return {name: series_spectrum(s, cfg).normalized for name, s in (("x", x), ("y", y), ("z", z))}


def cmd_demo(args) -> int:
    spectra = demo_spectra(args.seed, args.length, EmbeddingConfig(args.lags, args.order))
    n = len(spectra["x"])
    if args.format == "json":
        text = "".join(
            json.dumps({"index": i + 1, **{f"lambda_{k}": float(v[i]) for k, v in spectra.items()}})
            + "\n"
            for i in range(n)
        )
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "lambda_x", "lambda_y", "lambda_z"])
        for i in range(n):
            w.writerow([i + 1, *(repr(float(spectra[k][i])) for k in ("x", "y", "z"))])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def _embedding_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lags", type=int, default=DEFAULT_LAGS,
                   help="Hankel embedding rows K, lags 0..K-1 (default %(default)s, "
                        "as in the hidden-Markov demonstration and BTC/USD scan)")
    p.add_argument("--order", type=int, default=DEFAULT_ORDER,
                   help="law order n = embedding columns, giving n Gram eigenvalues "
                        "(default %(default)s, as in the demonstration and scan)")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default %(default)s; json means JSON lines)")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovlaws",
        description="Linear laws of Markov chains from their categorical autocorrelation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a Markov chain")
    p.add_argument("--matrix", default="x",
                   help="transfer-matrix file, or 'x' / 'y' for the bundled 2-state and "
                        "4-state demonstration chains (default %(default)s)")
    p.add_argument("--x0", type=int, default=0, help="initial state (default %(default)s)")
    p.add_argument("--length", "-N", type=int, default=DEFAULT_LENGTH,
                   help="series length (default %(default)s, the demonstration length)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PCG64 seed (default %(default)s)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="Gram spectrum and linear law of a series")
    p.add_argument("input", nargs="?", help="newline-delimited integer series ('-' or omitted: stdin)")
    _embedding_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="windowed excess-rank scores of an OHLCV CSV")
    p.add_argument("input", help="minute OHLCV CSV export")
    p.add_argument("--width", type=int, default=DEFAULT_WIDTH,
                   help="window width in up/down samples (default %(default)s, the BTC/USD "
                        "study's window)")
    p.add_argument("--stride", type=int, default=None,
                   help="window step (default: equal to --width, i.e. non-overlapping windows)")
    p.add_argument("--from", dest="date_from", help="ISO-8601 start time, inclusive (UTC)")
    p.add_argument("--to", dest="date_to", help="ISO-8601 end time, inclusive (UTC)")
    _embedding_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("demo", help="spectra of the bundled binary, 4-state and left-bit series")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="root seed (default %(default)s)")
    p.add_argument("--length", "-N", type=int, default=DEFAULT_LENGTH,
                   help="length of each simulated series (default %(default)s)")
    _embedding_flags(p)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        _diag(f"error: {type(exc).__name__}: {exc}")
        return EXIT_INPUT
    except DegeneracyError as exc:
        _diag(f"error: {type(exc).__name__}: {exc}")
        return EXIT_DEGENERATE
    except (OSError, ValueError) as exc:
        _diag(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
