import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from markovlaws.eigen import companion, jacobi_eigh, off_diagonal_norm, poly_roots
from markovlaws.errors import NotSymmetric

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: arrays(float, (n, n), elements=finite)))
def test_jacobi_against_lapack(a):
    a = a + a.T
    w, v = jacobi_eigh(a)
    scale = max(np.linalg.norm(a), 1.0)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a)[::-1], atol=1e-12 * scale)
    np.testing.assert_allclose(v.T @ v, np.eye(len(w)), atol=1e-12)
    assert np.all(np.diff(w) <= 0)
    # off-diagonal residual contract
    assert off_diagonal_norm(v.T @ a @ v) <= 1e-13 * scale * 10


def test_diagonal_input():
    w, v = jacobi_eigh(np.diag([1.0, 4.0, 0.0]))
    np.testing.assert_array_equal(w, [4.0, 1.0, 0.0])
    np.testing.assert_array_equal(np.abs(v), np.eye(3)[:, [1, 0, 2]])


def test_rank_one():
    w, v = jacobi_eigh(np.ones((2, 2)))
    np.testing.assert_allclose(w, [2.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(np.abs(v[:, 0]), [2**-0.5] * 2)


def test_tiny_off_diagonal():
    a = np.array([[1.0, 1e-200], [1e-200, 2.0]])
    w, _ = jacobi_eigh(a)
    np.testing.assert_array_equal(w, [2.0, 1.0])


def test_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        jacobi_eigh([[1.0, 2.0], [0.0, 1.0]])


def test_companion_layout():
    # x^2 - 3x + 2 = (x - 1)(x - 2)
    np.testing.assert_array_equal(companion([2.0, -3.0, 1.0]), [[0.0, -2.0], [1.0, 3.0]])
    np.testing.assert_allclose(sorted(poly_roots([2.0, -3.0, 1.0]).real), [1.0, 2.0])


def test_non_monic_roots():
    np.testing.assert_allclose(poly_roots([-1.0, 1.0]).real * 1, [1.0])
    np.testing.assert_allclose(sorted(poly_roots([-2.0, 0.0, 2.0]).real), [-1.0, 1.0])


def test_vanishing_leading_coefficient():
    r = poly_roots([-1.0, 1.0, 0.0])
    assert r[0] == pytest.approx(1.0)
    assert np.isinf(r[1])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=6))
def test_roots_reconstruct_polynomial(roots):
    coeffs = np.poly(roots)[::-1]
    found = poly_roots(coeffs)
    assert len(found) == len(roots)
    for r in found:
        assert abs(np.polyval(coeffs[::-1], r)) <= 1e-8 * max(1.0, np.abs(coeffs).max())
