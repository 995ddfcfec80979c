"""Linear laws of finite-state Markov chains and an excess-rank anomaly scanner."""
from .errors import *  # noqa: F401,F403
from .linlaw import (
    EmbeddingConfig,
    GramSpectrum,
    LinearLaw,
    build_embedding,
    estimate_autocorr,
    excess_rank_score,
    extract_law,
    gram,
    gram_spectrum,
    law_spectrum,
    series_spectrum,
)
from .markov import (
    LEFT_BIT,
    AutocorrSequence,
    CategoricalSeries,
    TransferMatrix,
    analytic_autocorr,
    binary_transfer,
    char_poly_coeffs,
    equilibrium,
    normalize_columns,
    project,
    simulate,
    simulate_binary_langevin,
    spectrum,
    validate_transfer,
)
from .scanner import PriceSeries, WindowScore, binarize, scan, scan_prices, score_table
from .ingest import IngestReport, OhlcvRow, ingest, parse_csv, to_price_series

__version__ = "0.1.0"
