"""Finite-state Markov chains: validation, equilibrium, spectra, simulation.

Transfer matrices are column-stochastic: ``T[x, y]`` is the probability of
moving from state ``y`` to state ``x`` in one step.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import (
    BadInitialState,
    BadParameter,
    IncompleteMap,
    NonUnique,
    NotSquare,
    NotStochastic,
)

ENTRY_TOL = 1e-12
COLUMN_SUM_TOL = 1e-9
EQUILIBRIUM_TOL = 1e-14
EQUILIBRIUM_MAX_ITER = 1_000_000


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TransferMatrix:
    """Validated column-stochastic matrix. Build with :func:`validate_transfer`."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True)
class CategoricalSeries:
    states: np.ndarray
    alphabet_size: int

    def __post_init__(self):
        states = np.asarray(self.states)
        if states.ndim != 1 or states.size < 1:
            raise BadParameter("a categorical series needs at least one element")
        if not np.issubdtype(states.dtype, np.integer):
            raise BadParameter(f"states must be integers, got {states.dtype}")
        if self.alphabet_size < 1:
            raise BadParameter("alphabet_size must be positive")
        if states.min() < 0 or states.max() >= self.alphabet_size:
            raise BadParameter(
                f"states must lie in [0, {self.alphabet_size}), "
                f"found range [{states.min()}, {states.max()}]"
            )
        object.__setattr__(self, "states", _frozen(states.astype(np.int64, copy=False)))

    def __len__(self) -> int:
        return self.states.size


@dataclass(frozen=True)
class AutocorrSequence:
    """Values ``C_k`` for ``k = 0..k_max``; provenance is ``analytic`` or ``empirical``."""

    values: np.ndarray
    provenance: str = "analytic"

    def __post_init__(self):
        if self.provenance not in ("analytic", "empirical"):
            raise BadParameter(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "values", _frozen(np.asarray(self.values, dtype=float)))

    @property
    def k_max(self) -> int:
        return self.values.size - 1

    def scaled(self, factor: float) -> "AutocorrSequence":
        return AutocorrSequence(self.values * factor, self.provenance)


def validate_transfer(raw) -> TransferMatrix:
    """Check shape, entry range and column sums of ``raw``."""
    m = np.array(raw, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"transfer matrix must be square, got shape {m.shape}")
    if m.shape[0] < 2:
        raise NotSquare("transfer matrix needs at least two states")
    if not np.all(np.isfinite(m)):
        raise NotStochastic("transfer matrix has non-finite entries")
    if m.min() < -ENTRY_TOL or m.max() > 1 + ENTRY_TOL:
        raise NotStochastic("entries must be probabilities in [0, 1]")
    sums = m.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums - 1.0) > COLUMN_SUM_TOL)
    if bad.size:
        j = bad[0]
        raise NotStochastic(f"column {j} sums to {sums[j]!r}, expected 1")
    np.clip(m, 0.0, 1.0, out=m)
    return TransferMatrix(_frozen(m))


def normalize_columns(raw, tol: float = 1e-3) -> TransferMatrix:
    """Rescale columns of a matrix printed with rounded entries to sum to one.

    Only column-sum deviations up to ``tol`` are repaired; anything larger
    is treated as a genuinely invalid matrix.
    """
    m = np.array(raw, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"transfer matrix must be square, got shape {m.shape}")
    sums = m.sum(axis=0)
    if np.any(np.abs(sums - 1.0) > tol):
        raise NotStochastic(f"column sums {sums} deviate from 1 by more than {tol}")
    return validate_transfer(m / sums)


def binary_transfer(p: float, q: float) -> TransferMatrix:
    """Two-state chain with ``P(0->1) = p`` and ``P(1->0) = q``."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise BadParameter(f"p and q must be probabilities, got p={p}, q={q}")
    return validate_transfer([[1 - p, q], [p, 1 - q]])


def _closed_class_count(m: np.ndarray) -> int:
    adjacency = (m.T > 0).astype(np.int8)  # edge y -> x
    n_comp, labels = connected_components(adjacency, directed=True, connection="strong")
    leaves = np.ones(n_comp, dtype=bool)
    src, dst = np.nonzero(adjacency)
    leaves[labels[src][labels[src] != labels[dst]]] = False
    return int(leaves.sum())


def equilibrium(T: TransferMatrix) -> np.ndarray:
    """Stationary distribution by power iteration from the uniform vector.

    Raises :class:`NonUnique` when the chain has more than one closed
    communicating class, or when the iteration does not settle within
    ``EQUILIBRIUM_MAX_ITER`` steps (typically a periodic chain).
    """
    m = T.entries
    if _closed_class_count(m) != 1:
        raise NonUnique("chain has several closed classes; equilibrium is not unique")
    p = np.full(T.dim, 1.0 / T.dim)
    for _ in range(EQUILIBRIUM_MAX_ITER):
        nxt = m @ p
        nxt /= nxt.sum()
        if np.max(np.abs(nxt - p)) <= EQUILIBRIUM_TOL:
            return _frozen(nxt)
        p = nxt
    raise NonUnique(
        f"power iteration did not converge in {EQUILIBRIUM_MAX_ITER} steps "
        "(periodic or very slowly mixing chain)"
    )


def sort_eigenvalues(values) -> np.ndarray:
    """Order by modulus, then real part, then imaginary part, all descending."""
    v = np.asarray(values, dtype=complex)
    # rounding keeps numerically tied moduli from being split by round-off
    keys = (-np.round(v.imag, 12), -np.round(v.real, 12), -np.round(np.abs(v), 12))
    return v[np.lexsort(keys)]


def spectrum(T: TransferMatrix) -> np.ndarray:
    return sort_eigenvalues(np.linalg.eigvals(T.entries))


def char_poly_coeffs(T: TransferMatrix) -> np.ndarray:
    """Monic characteristic polynomial ``det(lambda I - T)``, ascending powers.

    Uses the Faddeev-LeVerrier recursion so the coefficients do not depend
    on an eigensolver.
    """
    a = T.entries
    n = T.dim
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    m = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[n - k + 1] * eye
        coeffs[n - k] = -np.trace(a @ m) / k
    return coeffs


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def transition_variates(seed, n: int) -> np.ndarray:
    """The uniform stream on [0, 1) that drives :func:`simulate`."""
    return _rng(seed).random(n)


def simulate(T: TransferMatrix, x0: int, N: int, seed) -> CategoricalSeries:
    """Sample ``N`` states starting from ``x0``.

    Step ``n -> n+1`` draws ``u`` from a PCG64 stream and picks the first
    state ``x`` whose cumulative column probability ``sum(T[:x+1, s])``
    exceeds ``u``.
    """
    if not 0 <= x0 < T.dim:
        raise BadInitialState(f"initial state {x0} outside [0, {T.dim})")
    if N < 1:
        raise BadParameter("series length must be at least 1")
    u = transition_variates(seed, N - 1)
    cum = np.cumsum(T.entries, axis=0)
    cum[-1] = 1.0
    # next state for every (current state, step) pair; the walk is then a lookup
    table = [np.searchsorted(cum[:, s], u, side="right").tolist() for s in range(T.dim)]
    out = [int(x0)]
    append = out.append
    x = int(x0)
    for i in range(N - 1):
        x = table[x][i]
        append(x)
    return CategoricalSeries(np.array(out, dtype=np.int64), T.dim)


def simulate_binary_langevin(p: float, q: float, x0: int, N: int, seed) -> CategoricalSeries:
    """Binary chain via ``x' = int(1 + p - xi + (1 - p - q) x)``.

    ``xi = 1 - u`` with ``u`` the same stream :func:`simulate` consumes, so
    both routes give the same sequence for the equivalent 2x2 matrix.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise BadParameter(f"p and q must be probabilities, got p={p}, q={q}")
    if x0 not in (0, 1):
        raise BadParameter(f"binary chain needs x0 in {{0, 1}}, got {x0}")
    if N < 1:
        raise BadParameter("series length must be at least 1")
    xi = (1.0 - transition_variates(seed, N - 1)).tolist()
    decay = 1.0 - p - q
    out = [int(x0)]
    x = int(x0)
    for v in xi:
        x = int(1.0 + p - v + decay * x)
        out.append(x)
    return CategoricalSeries(np.array(out, dtype=np.int64), 2)


def _as_lookup(state_map, size: int) -> np.ndarray:
    if callable(state_map) and not isinstance(state_map, Mapping):
        lookup = [state_map(s) for s in range(size)]
    elif isinstance(state_map, Mapping):
        missing = [s for s in range(size) if s not in state_map]
        if missing:
            raise IncompleteMap(f"state map has no image for states {missing}")
        lookup = [state_map[s] for s in range(size)]
    else:
        lookup = list(state_map)
        if len(lookup) < size:
            raise IncompleteMap(f"state map covers {len(lookup)} of {size} states")
    lookup = np.asarray(lookup[:size], dtype=np.int64)
    if lookup.min() < 0:
        raise IncompleteMap("state map images must be non-negative")
    return lookup


def project(
    series: CategoricalSeries,
    state_map: Sequence[int] | Mapping[int, int] | Callable[[int], int],
) -> CategoricalSeries:
    """Relabel every element through ``state_map``.

    The image is compacted to ``0..m-1`` preserving order, so the output
    alphabet size is the number of distinct images.
    """
    lookup = _as_lookup(state_map, series.alphabet_size)
    image, compact = np.unique(lookup, return_inverse=True)
    return CategoricalSeries(compact[series.states], int(image.size))


# state order 00, 10, 01, 11; the left (first) bit of each label
LEFT_BIT = (0, 1, 0, 1)


def analytic_autocorr(T: TransferMatrix, k_max: int, state_map=None) -> AutocorrSequence:
    """Stationary ``C_k = P(x_n = x_{n+k})`` for ``k = 0..k_max``.

    With ``state_map`` the equality is tested on the mapped labels, which is
    the autocorrelation of the projected series. Computed by propagating
    ``diag(P)`` through ``T`` one step at a time.
    """
    if k_max < 0:
        raise BadParameter("k_max must be non-negative")
    p_bar = equilibrium(T)
    if state_map is None:
        same = np.eye(T.dim)
    else:
        lookup = _as_lookup(state_map, T.dim)
        same = (lookup[:, None] == lookup[None, :]).astype(float)
    joint = np.diag(p_bar)  # joint[z, y] = P(x_n = y, x_{n+k} = z)
    out = np.empty(k_max + 1)
    for k in range(k_max + 1):
        out[k] = np.sum(same * joint)
        joint = T.entries @ joint
    return AutocorrSequence(out, "analytic")


def read_transfer(source) -> TransferMatrix:
    """Read the plain-text matrix format: ``dim`` on the first line, then
    ``dim`` rows of ``dim`` numbers. Columns are source states."""
    text = _read_text(source)
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise NotSquare("empty transfer matrix file")
    try:
        dim = int(lines[0][0])
        rows = [[float(v) for v in ln] for ln in lines[1:]]
    except (ValueError, IndexError) as exc:
        raise NotSquare(f"cannot parse transfer matrix: {exc}") from None
    if len(lines[0]) != 1 or len(rows) != dim or any(len(r) != dim for r in rows):
        raise NotSquare(f"expected {dim} rows of {dim} entries after the size line")
    return validate_transfer(rows)


def format_transfer(T: TransferMatrix) -> str:
    lines = [str(T.dim)]
    lines += [" ".join(repr(float(v)) for v in row) for row in T.entries]
    return "\n".join(lines) + "\n"


def write_series(series: CategoricalSeries, dest) -> None:
    """Newline-delimited state indices."""
    text = "\n".join(map(str, series.states.tolist())) + "\n"
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        dest.write(text)


def read_series(source, alphabet_size: int | None = None) -> CategoricalSeries:
    text = _read_text(source)
    try:
        states = np.array([int(tok) for tok in text.split()], dtype=np.int64)
    except ValueError as exc:
        raise BadParameter(f"series file must hold integers: {exc}") from None
    if states.size == 0:
        raise BadParameter("series file is empty")
    size = alphabet_size if alphabet_size is not None else int(states.max()) + 1
    return CategoricalSeries(states, max(size, 1))


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    if isinstance(source, bytes):
        return source.decode("utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


__all__ = [
    "AutocorrSequence",
    "CategoricalSeries",
    "LEFT_BIT",
    "TransferMatrix",
    "analytic_autocorr",
    "binary_transfer",
    "char_poly_coeffs",
    "equilibrium",
    "format_transfer",
    "normalize_columns",
    "project",
    "read_series",
    "read_transfer",
    "simulate",
    "simulate_binary_langevin",
    "sort_eigenvalues",
    "spectrum",
    "transition_variates",
    "write_series",
]
