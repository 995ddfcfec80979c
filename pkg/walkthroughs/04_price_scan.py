"""
From a minute-price CSV to window scores
========================================

Reads an OHLCV export (banner line, header, newest row first), turns
closes into up/down moves and scores non-overlapping windows. A synthetic
export is written first so the script runs anywhere; pass a real file path
as the first argument to use it instead.
"""

# %%
import sys
import tempfile
from pathlib import Path

import numpy as np

from markovlaws import EmbeddingConfig, PriceSeries, ingest, scan_prices
from markovlaws.scanner import format_csv
from markovlaws.ingest import write_price_csv

if len(sys.argv) > 1:
    path = Path(sys.argv[1])
else:
    rng = np.random.default_rng(3)
    n = 200_000
    ts = 1483228860 + 60 * np.cumsum(1 + (rng.random(n) < 0.015))
    closes = np.round(1000 * np.exp(np.cumsum(rng.normal(0, 1e-3, n))), 2)
    path = Path(tempfile.mkdtemp()) / "minutes.csv"
    write_price_csv(PriceSeries(ts, closes), path)

# %%
# The ingest report counts what was dropped on the way.
prices, report = ingest(path)
for key, value in report.as_dict().items():
    print(f"{key:>20}: {value}")

# %%
# Scores per 30,000-move window, as CSV.
scores = scan_prices(prices, width=30_000, cfg=EmbeddingConfig(20, 5))
print(format_csv(scores))
