"""Linear laws of a categorical autocorrelation sequence.

Pipeline: series -> ``C_k`` (:func:`estimate_autocorr`) -> Hankel embedding
``F[k, a] = C[k + a]`` -> Gram matrix ``F^T F`` -> descending spectrum ->
null-space vector ``w`` with ``sum_a w[a] C[k + a] = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import jacobi_eigh, poly_roots
from .errors import (
    DegenerateNullspace,
    IndefiniteBeyondTolerance,
    InsufficientLags,
    NotSymmetric,
    OrderTooSmall,
    SeriesTooShort,
)
from .markov import AutocorrSequence, CategoricalSeries, sort_eigenvalues

NEGATIVE_TOL = 1e-10
NULLSPACE_RTOL = 1e-12


@dataclass(frozen=True)
class EmbeddingConfig:
    """``lags`` Hankel rows (offsets ``0..lags-1``) by ``order`` columns.

    A Gram matrix with a meaningful null space needs ``lags >= order``;
    :func:`gram` enforces that, the embedding itself does not.
    """

    lags: int = 20
    order: int = 5

    def __post_init__(self):
        if self.order < 2 or self.lags < 1:
            raise InsufficientLags(
                f"need order >= 2 and lags >= 1, got lags={self.lags}, order={self.order}"
            )

    @property
    def k_max(self) -> int:
        """Largest lag the embedding reads."""
        return self.lags + self.order - 2


@dataclass(frozen=True)
class GramSpectrum:
    eigenvalues: np.ndarray
    normalized: np.ndarray
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]

    @property
    def order(self) -> int:
        return self.eigenvalues.size


@dataclass(frozen=True)
class LinearLaw:
    coeffs: np.ndarray
    residual: float
    roots: np.ndarray

    def apply(self, c: AutocorrSequence) -> np.ndarray:
        """``sum_a w[a] C[k + a]`` for every ``k`` the sequence supports."""
        n = self.coeffs.size
        v = c.values
        return np.array([self.coeffs @ v[k : k + n] for k in range(v.size - n + 1)])


def estimate_autocorr(series: CategoricalSeries, k_max: int) -> AutocorrSequence:
    """Fraction of equal pairs ``k`` steps apart, for ``k = 0..k_max``."""
    s = series.states
    if k_max < 0 or k_max >= s.size:
        raise SeriesTooShort(f"series of length {s.size} cannot support lag {k_max}")
    out = np.empty(k_max + 1)
    out[0] = 1.0
    for k in range(1, k_max + 1):
        out[k] = np.count_nonzero(s[:-k] == s[k:]) / (s.size - k)
    return AutocorrSequence(out, "empirical")


def build_embedding(c: AutocorrSequence, cfg: EmbeddingConfig) -> np.ndarray:
    if c.k_max < cfg.k_max:
        raise InsufficientLags(
            f"embedding {cfg.lags}x{cfg.order} needs lags up to {cfg.k_max}, have {c.k_max}"
        )
    idx = np.arange(cfg.lags)[:, None] + np.arange(cfg.order)[None, :]
    return c.values[idx]


def gram(F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if F.shape[0] < F.shape[1]:
        raise InsufficientLags(f"embedding has fewer rows than columns: {F.shape}")
    g = F.T @ F
    return 0.5 * (g + g.T)


def gram_spectrum(G: np.ndarray) -> GramSpectrum:
    """Jacobi eigen-decomposition of a Gram matrix, with round-off negatives
    clamped to zero."""
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got {G.shape}")
    w, v = jacobi_eigh(G)
    top = max(float(w[0]), 0.0)
    if w[-1] < -NEGATIVE_TOL * top or (top == 0.0 and w[-1] < 0.0):
        raise IndefiniteBeyondTolerance(
            f"eigenvalue {w[-1]:.3e} is negative beyond tolerance (largest {top:.3e})"
        )
    w = np.maximum(w, 0.0)
    normalized = w / w[0] if w[0] > 0 else np.zeros_like(w)
    return GramSpectrum(w, normalized, v)


def extract_law(spec: GramSpectrum) -> LinearLaw:
    """Unit-norm null vector of the Gram matrix, leading coefficient positive."""
    n = spec.order
    if n < 2:
        raise OrderTooSmall("a linear law needs at least two coefficients")
    lam = spec.eigenvalues
    if lam[-2] - lam[-1] <= NULLSPACE_RTOL * lam[0]:
        raise DegenerateNullspace(
            f"two smallest Gram eigenvalues coincide ({lam[-2]:.3e}, {lam[-1]:.3e}); "
            "reduce the law order"
        )
    w = spec.eigenvectors[:, -1].copy()
    w /= np.linalg.norm(w)
    lead = w[-1] if w[-1] != 0.0 else w[np.flatnonzero(w)[-1]]
    if lead < 0:
        w = -w
    return LinearLaw(w, float(lam[-1]), sort_eigenvalues(poly_roots(w)))


def excess_rank_score(spec: GramSpectrum) -> float:
    """Third-largest normalized Gram eigenvalue."""
    if spec.order < 3:
        raise OrderTooSmall("the excess-rank score needs order >= 3")
    return float(min(max(spec.normalized[2], 0.0), 1.0))


def law_spectrum(c: AutocorrSequence, cfg: EmbeddingConfig) -> GramSpectrum:
    return gram_spectrum(gram(build_embedding(c, cfg)))


def series_spectrum(series: CategoricalSeries, cfg: EmbeddingConfig) -> GramSpectrum:
    return law_spectrum(estimate_autocorr(series, cfg.k_max), cfg)


__all__ = [
    "EmbeddingConfig",
    "GramSpectrum",
    "LinearLaw",
    "build_embedding",
    "estimate_autocorr",
    "excess_rank_score",
    "extract_law",
    "gram",
    "gram_spectrum",
    "law_spectrum",
    "series_spectrum",
]
