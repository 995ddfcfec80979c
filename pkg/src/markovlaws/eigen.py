"""Small dense eigen-problems: cyclic Jacobi for symmetric matrices and
companion-matrix polynomial roots."""
from __future__ import annotations

import math

import numpy as np

from .errors import MarkovLawError, NotSymmetric

JACOBI_TOL = 1e-13
MAX_SWEEPS = 100


def off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(matrix, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Returns ``(eigenvalues, eigenvectors)`` sorted by eigenvalue descending;
    eigenvectors are the columns. Sweeps continue until the off-diagonal
    Frobenius norm is at most ``tol * ||A||_F``.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = float(np.linalg.norm(a))
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-12 * max(scale, 1e-300)):
        raise NotSymmetric("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    target = tol * scale

    for _ in range(MAX_SWEEPS):
        if off_diagonal_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) <= 1e-150 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    root = math.hypot(theta, 1.0)
                    t = math.copysign(1.0, theta) / (abs(theta) + root)
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        if off_diagonal_norm(a) > target:
            raise MarkovLawError("Jacobi iteration failed to converge")

    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def companion(coeffs) -> np.ndarray:
    """Companion matrix of ``sum_a coeffs[a] * x**a``; the leading
    coefficient must be nonzero."""
    c = np.asarray(coeffs, dtype=float)
    degree = c.size - 1
    m = np.zeros((degree, degree))
    if degree > 1:
        m[1:, :-1] = np.eye(degree - 1)
    m[:, -1] = -c[:-1] / c[-1]
    return m


def poly_roots(coeffs, rtol: float = 1e-12) -> np.ndarray:
    """Roots of an ascending-power polynomial via its companion matrix.

    Vanishing leading coefficients (relative to the coefficient norm) are
    roots at infinity and reported as ``inf`` so the count stays
    ``len(coeffs) - 1``.
    """
    c = np.asarray(coeffs, dtype=float)
    degree = c.size - 1
    cutoff = rtol * float(np.linalg.norm(c))
    top = degree
    while top > 0 and abs(c[top]) <= cutoff:
        top -= 1
    finite = np.linalg.eigvals(companion(c[: top + 1])) if top > 0 else np.empty(0, complex)
    at_infinity = np.full(degree - top, complex(np.inf, 0.0))
    return np.concatenate([finite.astype(complex), at_infinity])
