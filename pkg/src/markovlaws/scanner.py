"""Windowed excess-rank scores over up/down price-movement series."""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput, EmptyScan, TooShort, WindowTooSmall
from .linlaw import EmbeddingConfig, excess_rank_score, series_spectrum
from .markov import CategoricalSeries, _frozen

DEFAULT_WIDTH = 30_000
# normalized third eigenvalue at or below this marks a rank-deficient (degenerate) window
DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class PriceSeries:
    timestamps: np.ndarray  # epoch seconds, strictly increasing
    closes: np.ndarray

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=np.int64)
        cl = np.asarray(self.closes, dtype=float)
        if ts.ndim != 1 or ts.shape != cl.shape:
            raise TooShort("timestamps and closes must be 1-D arrays of equal length")
        if ts.size < 2:
            raise TooShort("a price series needs at least two samples")
        if np.any(np.diff(ts) <= 0):
            raise TooShort("timestamps must be strictly increasing")
        if not np.all(np.isfinite(cl)) or np.any(cl <= 0):
            raise TooShort("closing prices must be positive and finite")
        object.__setattr__(self, "timestamps", _frozen(ts))
        object.__setattr__(self, "closes", _frozen(cl))

    def __len__(self) -> int:
        return self.closes.size


@dataclass(frozen=True)
class WindowScore:
    window_index: int
    start_t: int
    end_t: int
    spectrum: tuple[float, ...]
    score: float
    degenerate: bool = False
    start_time: int | None = None
    end_time: int | None = None


def binarize(prices: PriceSeries | Sequence[float]) -> CategoricalSeries:
    """1 where the close did not fall since the previous sample, else 0."""
    closes = prices.closes if isinstance(prices, PriceSeries) else np.asarray(prices, float)
    if closes.size < 2:
        raise TooShort("need at least two prices to difference")
    return CategoricalSeries((np.diff(closes) >= 0).astype(np.int64), 2)


def score_window(states: np.ndarray, cfg: EmbeddingConfig) -> tuple[np.ndarray, float, bool]:
    spec = series_spectrum(CategoricalSeries(states, 2), cfg)
    score = excess_rank_score(spec)
    degenerate = score <= DEGENERACY_RTOL
    return spec.normalized, (0.0 if degenerate else score), degenerate


def scan(
    binary: CategoricalSeries,
    width: int = DEFAULT_WIDTH,
    stride: int | None = None,
    cfg: EmbeddingConfig = EmbeddingConfig(),
    timestamps: Sequence[int] | None = None,
) -> list[WindowScore]:
    """Score every full window of ``width`` samples, starting every ``stride``.

    ``stride`` defaults to ``width`` (non-overlapping windows); a trailing
    partial window is dropped. ``timestamps``, when given, are aligned with
    ``binary`` and fill in the wall-clock window bounds.
    """
    stride = width if stride is None else stride
    if width < cfg.lags + cfg.order:
        raise WindowTooSmall(f"width {width} < lags + order = {cfg.lags + cfg.order}")
    if cfg.order < 3:
        raise WindowTooSmall("scanning needs order >= 3 for the excess-rank score")
    if stride < 1:
        raise WindowTooSmall("stride must be positive")
    states = binary.states
    n_windows = (states.size - width) // stride + 1 if states.size >= width else 0
    if n_windows < 1:
        raise EmptyScan(f"series of length {states.size} holds no window of width {width}")
    if timestamps is not None:
        timestamps = np.asarray(timestamps, dtype=np.int64)
        if timestamps.size != states.size:
            raise TooShort("timestamps must align with the binary series")

    out = []
    for i in range(n_windows):
        start = i * stride
        end = start + width - 1
        normalized, score, degenerate = score_window(states[start : end + 1], cfg)
        out.append(
            WindowScore(
                window_index=i,
                start_t=start,
                end_t=end,
                spectrum=tuple(float(v) for v in normalized),
                score=score,
                degenerate=degenerate,
                start_time=None if timestamps is None else int(timestamps[start]),
                end_time=None if timestamps is None else int(timestamps[end]),
            )
        )
    return out


def scan_prices(
    prices: PriceSeries,
    width: int = DEFAULT_WIDTH,
    stride: int | None = None,
    cfg: EmbeddingConfig = EmbeddingConfig(),
) -> list[WindowScore]:
    """Binarize and scan; the up/down sample between prices ``t-1`` and ``t``
    carries the timestamp of price ``t``."""
    return scan(binarize(prices), width, stride, cfg, timestamps=prices.timestamps[1:])


def iso_utc(epoch: int | None) -> str:
    if epoch is None:
        return ""
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def score_table(scores: Iterable[WindowScore]) -> tuple[list[str], list[list]]:
    """Header and rows: index, times, score, the n normalized eigenvalues,
    then the degeneracy flag."""
    scores = list(scores)
    if not scores:
        raise EmptyInput("no window scores to tabulate")
    n = len(scores[0].spectrum)
    header = ["window_index", "start_time", "end_time", "score"]
    header += [f"lambda_{i + 1}" for i in range(n)] + ["degenerate"]
    rows = [
        [s.window_index, iso_utc(s.start_time), iso_utc(s.end_time), s.score, *s.spectrum,
         int(s.degenerate)]
        for s in sorted(scores, key=lambda s: s.window_index)
    ]
    return header, rows


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def format_csv(scores: Iterable[WindowScore]) -> str:
    header, rows = score_table(scores)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([[_fmt(v) for v in row] for row in rows])
    return buf.getvalue()


def format_jsonl(scores: Iterable[WindowScore]) -> str:
    header, rows = score_table(scores)
    lines = []
    for row in rows:
        rec = dict(zip(header, row))
        n = len(header) - 5
        rec["spectrum"] = [rec.pop(f"lambda_{i + 1}") for i in range(n)]
        rec["degenerate"] = bool(rec["degenerate"])
        lines.append(json.dumps(rec))
    return "\n".join(lines) + "\n"


def write_scores(scores: Iterable[WindowScore], dest, fmt: str = "csv") -> None:
    text = format_csv(scores) if fmt == "csv" else format_jsonl(scores)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        dest.write(text)
