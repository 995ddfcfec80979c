"""Minute-level OHLCV CSV exports to :class:`PriceSeries`.

Accepted layout: up to two leading non-data lines (a provenance banner and
a header), then rows of::

    unix, date, symbol, open, high, low, close, <volume base>, <volume quote>

Header names are matched case-insensitively through :data:`COLUMN_ALIASES`;
the two volume columns are the first and second columns whose name starts
with ``volume``. Without a header the columns are taken positionally in the
order above. Unix times above 1e11 are read as milliseconds.
"""
from __future__ import annotations

import csv
import io
import logging
import os
import warnings
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np
import pandas as pd

from .errors import EmptyAfterFilter, NoDataRows, UnreadableSource
from .scanner import PriceSeries

log = logging.getLogger(__name__)

FIELDS = ("unix_time", "date_text", "symbol", "open", "high", "low", "close",
          "volume_base", "volume_quote")
NUMERIC = ("unix_time", "open", "high", "low", "close", "volume_base", "volume_quote")

COLUMN_ALIASES = {
    "unix_time": ("unix", "unix_time", "unix timestamp", "timestamp", "time"),
    "date_text": ("date", "datetime", "date_text"),
    "symbol": ("symbol", "pair", "ticker"),
    "open": ("open",),
    "high": ("high",),
    "low": ("low",),
    "close": ("close",),
    "volume_base": ("volume_base",),
    "volume_quote": ("volume_quote",),
}

MILLISECONDS_ABOVE = 1e11


@dataclass(frozen=True)
class OhlcvRow:
    unix_time: int
    date_text: str
    symbol: str
    open: float
    high: float
    low: float
    close: float
    volume_base: float
    volume_quote: float


@dataclass(frozen=True)
class IngestReport:
    rows_read: int = 0
    rows_kept: int = 0
    malformed: int = 0
    duplicates_dropped: int = 0
    gaps_detected: int = 0
    missing_rate: float = 0.0
    ohlc_violations: int = 0

    def as_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}


class OhlcvTable:
    """Column-oriented rows; indexing or iterating yields :class:`OhlcvRow`.

    Minute exports run to millions of rows, so rows are materialized only
    on access.
    """

    def __init__(self, columns: dict[str, np.ndarray]):
        n = {len(v) for v in columns.values()}
        if len(n) != 1:
            raise ValueError("columns differ in length")
        self.columns = {f: np.asarray(columns[f]) for f in FIELDS}

    def __len__(self) -> int:
        return len(self.columns["close"])

    def __getitem__(self, i) -> OhlcvRow:
        c = self.columns
        return OhlcvRow(int(c["unix_time"][i]), str(c["date_text"][i]), str(c["symbol"][i]),
                        *(float(c[f][i]) for f in FIELDS[3:]))

    def __iter__(self) -> Iterator[OhlcvRow]:
        return (self[i] for i in range(len(self)))

    @classmethod
    def from_rows(cls, rows) -> "OhlcvTable":
        rows = list(rows)
        cols = {f: [getattr(r, f) for r in rows] for f in FIELDS}
        cols["unix_time"] = np.asarray(cols["unix_time"], dtype=np.int64)
        for f in FIELDS[3:]:
            cols[f] = np.asarray(cols[f], dtype=float)
        for f in ("date_text", "symbol"):
            cols[f] = np.asarray(cols[f], dtype=object)
        return cls(cols)

    def select(self, mask_or_index) -> "OhlcvTable":
        return OhlcvTable({f: v[mask_or_index] for f, v in self.columns.items()})


def _canonical(name: str) -> str | None:
    key = name.strip().lower()
    for field, aliases in COLUMN_ALIASES.items():
        if key in aliases:
            return field
    return None


def _header_map(fields: list[str]) -> list[str] | None:
    """Canonical name per column, or None when the line is not a header."""
    names = [_canonical(f) for f in fields]
    volume_cols = [i for i, f in enumerate(fields) if f.strip().lower().startswith("volume")]
    for slot, i in zip(("volume_base", "volume_quote"), volume_cols):
        if names[i] is None:
            names[i] = slot
    if "close" not in names or "unix_time" not in names:
        return None
    return [n if n is not None else f"_extra{i}" for i, n in enumerate(names)]


def _looks_numeric(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _read_bytes(source) -> bytes:
    try:
        if isinstance(source, (str, os.PathLike)):
            with open(source, "rb") as fh:
                return fh.read()
        if isinstance(source, (bytes, bytearray)):
            return bytes(source)
        data = source.read()
        return data.encode("utf-8") if isinstance(data, str) else data
    except OSError as exc:
        raise UnreadableSource(f"cannot read {source!r}: {exc}") from None


def parse_csv(source) -> tuple[OhlcvTable, IngestReport]:
    """Parse a path, bytes or binary stream; malformed rows are counted and
    skipped."""
    raw = _read_bytes(source)
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise UnreadableSource(f"source is not UTF-8: {exc}") from None

    lines = io.StringIO(text)
    leading = [lines.readline() for _ in range(3)]
    skip = 0
    names = list(FIELDS)
    for line in leading[:2]:
        fields = next(csv.reader([line]), [])
        if not fields or not line.strip():
            skip += 1
            continue
        header = _header_map(fields)
        if header is not None:
            names = header
            skip += 1
            break
        if _looks_numeric(fields[0]):
            break
        skip += 1  # banner

    parts = text.split("\n", skip)
    body = parts[skip] if len(parts) > skip else ""
    rows_read = sum(1 for ln in body.splitlines() if ln.strip())
    if rows_read == 0:
        raise NoDataRows("no data rows after banner/header")

    # spare columns catch rows with too many fields; pandas would truncate them
    spare = [f"_overflow{i}" for i in range(4)]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", pd.errors.ParserWarning)
            frame = pd.read_csv(
                io.StringIO(body), header=None, names=names + spare, index_col=False,
                dtype={"date_text": str, "symbol": str, **{c: str for c in spare}},
                keep_default_na=False, on_bad_lines="skip", skip_blank_lines=True,
                engine="c", float_precision="round_trip",
            )
    except pd.errors.EmptyDataError:
        raise NoDataRows("no data rows after banner/header") from None
    except (pd.errors.ParserError, ValueError) as exc:
        raise UnreadableSource(f"cannot parse CSV: {exc}") from None

    missing = [f for f in ("unix_time", "close") if f not in frame.columns]
    if missing:
        raise UnreadableSource(f"required columns missing: {missing}")

    ok = np.ones(len(frame), dtype=bool)
    for c in spare:
        ok &= frame[c].fillna("").eq("").to_numpy()
    cols: dict[str, np.ndarray] = {}
    for f in NUMERIC:
        if f not in frame.columns:
            continue
        col = frame[f]
        if col.dtype == object:
            # the C parser fell back to text for this column; anything that is
            # not a plain '.'-decimal number becomes NaN and the row is dropped
            col = pd.to_numeric(col.astype(str).str.strip(), errors="coerce")
        vals = col.to_numpy(float)
        ok &= np.isfinite(vals)
        cols[f] = vals
    close = cols["close"]
    ok &= close > 0
    for f in ("open", "high", "low"):
        cols.setdefault(f, close)
    for f in ("volume_base", "volume_quote"):
        cols.setdefault(f, np.zeros(len(frame)))
    for f in ("date_text", "symbol"):
        cols[f] = frame[f].to_numpy(object) if f in frame.columns else np.full(len(frame), "", object)

    unix = cols["unix_time"]
    unix = np.where(unix > MILLISECONDS_ABOVE, unix / 1000.0, unix)
    ok &= unix == np.floor(unix)
    cols["unix_time"] = np.where(ok, unix, 0).astype(np.int64)

    table = OhlcvTable({f: v[ok] for f, v in cols.items()})
    c = table.columns
    lo = np.minimum(c["open"], c["close"])
    hi = np.maximum(c["open"], c["close"])
    violations = int(np.count_nonzero((c["low"] > lo) | (hi > c["high"])))
    if violations:
        log.warning("%d rows violate low <= open/close <= high; kept", violations)
    kept = len(table)
    malformed = rows_read - kept
    if malformed:
        log.warning("skipped %d malformed rows", malformed)
    if kept == 0:
        raise NoDataRows("every data row was malformed")
    return table, IngestReport(rows_read=rows_read, rows_kept=kept, malformed=malformed,
                               ohlc_violations=violations)


def to_price_series(
    rows,
    time_range: tuple[int | None, int | None] | None = None,
    report: IngestReport | None = None,
) -> tuple[PriceSeries, IngestReport]:
    """Sort ascending, collapse duplicate timestamps to their last occurrence,
    filter to the inclusive ``time_range``, and index the kept samples
    consecutively.

    Gaps are measured against the sampling interval, taken as the median
    spacing of the kept timestamps.
    """
    table = rows if isinstance(rows, OhlcvTable) else OhlcvTable.from_rows(rows)
    if len(table) == 0:
        raise EmptyAfterFilter("no rows to convert")
    report = report or IngestReport(rows_read=len(table), rows_kept=len(table))
    t = table.columns["unix_time"]
    close = table.columns["close"]

    order = np.argsort(t, kind="stable")
    ts, cl = t[order], close[order]
    last = np.ones(ts.size, dtype=bool)
    last[:-1] = ts[1:] != ts[:-1]
    duplicates = int(ts.size - np.count_nonzero(last))
    ts, cl = ts[last], cl[last]

    if time_range is not None:
        lo, hi = time_range
        keep = np.ones(ts.size, dtype=bool)
        if lo is not None:
            keep &= ts >= lo
        if hi is not None:
            keep &= ts <= hi
        ts, cl = ts[keep], cl[keep]
    if ts.size < 2:
        raise EmptyAfterFilter(f"{ts.size} samples left after filtering; need at least 2")

    steps = np.diff(ts)
    interval = int(np.median(steps))
    gaps = int(np.count_nonzero(steps > interval))
    expected = (int(ts[-1]) - int(ts[0])) // interval + 1
    missing_rate = max(expected - ts.size, 0) / expected

    series = PriceSeries(ts, cl)
    return series, replace(
        report,
        rows_kept=int(ts.size),
        duplicates_dropped=report.duplicates_dropped + duplicates,
        gaps_detected=gaps,
        missing_rate=float(missing_rate),
    )


def ingest(source, time_range=None) -> tuple[PriceSeries, IngestReport]:
    table, report = parse_csv(source)
    return to_price_series(table, time_range, report)


def write_price_csv(series: PriceSeries, dest, symbol: str = "BTC/USD") -> None:
    """Write ``series`` in the nine-column export layout (header, no banner),
    newest row first. OHLC are all set to the close; volumes are zero."""
    from .scanner import iso_utc

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["unix", "date", "symbol", "open", "high", "low", "close", "Volume BTC",
                "Volume USD"])
    for t, c in zip(series.timestamps[::-1].tolist(), series.closes[::-1].tolist()):
        p = repr(c)
        w.writerow([t, iso_utc(t).replace("T", " ").rstrip("Z"), symbol, p, p, p, p, "0", "0"])
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        dest.write(buf.getvalue())
