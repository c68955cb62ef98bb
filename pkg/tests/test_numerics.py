import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from periodic_jacobi import InvalidInputError
from periodic_jacobi.numerics import (
    HermitianMatrix,
    Polynomial,
    SymmetricMatrix,
    chebyshev_nodes,
    eigenvalues_hermitian,
    eigenvalues_symmetric,
    eigenvalues_tridiagonal,
    eigh_symmetric,
    interpolate,
    max_coeff_difference,
    poly_eval,
    poly_sup_norm,
)

coeff = st.floats(-10, 10)


def test_polynomial_trimming_and_degree():
    assert Polynomial((1.0, 2.0, 0.0, 0.0)).coeffs == (1.0, 2.0)
    assert Polynomial((1.0, 1e-15)).degree == 0
    Z = Polynomial((0.0, 0.0))
    assert Z.coeffs == (0.0,) and Z.degree == -1
    assert Polynomial.from_roots([1, -1]).coeffs == (-1.0, 0.0, 1.0)
    with pytest.raises(InvalidInputError):
        Polynomial((math.nan,))


def test_poly_eval_examples():
    assert poly_eval(Polynomial((-3.0, 0.0, 1.0)), 0.0) == -3
    assert poly_eval(Polynomial((0.0, -3.0, 0.0, 1.0)), 2.0) == 2
    assert poly_eval(Polynomial((0.0,)), 123.4) == 0
    np.testing.assert_array_equal(poly_eval(Polynomial((1.0, 2.0)), np.array([0.0, 1.0])), [1, 3])


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_linear_eval_is_exact(c0, c1, x):
    P = Polynomial((c0, c1))
    stored = P.coeffs + (0.0,) * (2 - len(P.coeffs))
    assert poly_eval(P, x) == stored[1] * x + stored[0]


@given(st.lists(coeff, min_size=1, max_size=7), st.lists(coeff, min_size=1, max_size=7))
def test_arithmetic_matches_numpy(p, q):
    P, Q = Polynomial(tuple(p)), Polynomial(tuple(q))
    ref = np.polynomial.Polynomial
    for got, want in ((P + Q, ref(p) + ref(q)), (P - Q, ref(p) - ref(q)), (P * Q, ref(p) * ref(q))):
        x = np.linspace(-2, 2, 9)
        scale = 1 + np.abs(want(x)).max()
        np.testing.assert_allclose(got(x), want(x), atol=1e-11 * scale)
    np.testing.assert_allclose(P.deriv()(0.7), ref(p).deriv()(0.7), atol=1e-9 * (1 + max(map(abs, p))))


def test_max_coeff_difference():
    assert max_coeff_difference(Polynomial((1.0, 2.0)), Polynomial((1.0, 2.0))) == 0
    assert max_coeff_difference(Polynomial((0.0,)), Polynomial((0.0,))) == 0
    assert max_coeff_difference(Polynomial((0.0, 4.0)), Polynomial((1.0, 4.0))) == 0.25


def test_sup_norm_examples():
    n, x = poly_sup_norm(Polynomial((-3.0, 0.0, 1.0)), -math.sqrt(5), math.sqrt(5))
    assert n == pytest.approx(3, abs=1e-12) and x == pytest.approx(0, abs=1e-12)
    n, x = poly_sup_norm(Polynomial((0.0, -3.0, 0.0, 1.0)), -math.sqrt(3), math.sqrt(3))
    assert n == pytest.approx(2, abs=1e-12) and abs(x) == pytest.approx(1, abs=1e-6)
    assert poly_sup_norm(Polynomial.identity(), 0, 1) == (1.0, 1.0)
    with pytest.raises(InvalidInputError):
        poly_sup_norm(Polynomial.identity(), 1, 0)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=8), st.floats(-3, 0), st.floats(0.01, 3))
def test_sup_norm_dominates_dense_sampling(roots, lo, width):
    P = Polynomial.from_roots(roots)
    hi = lo + width
    norm, arg = poly_sup_norm(P, lo, hi)
    x = np.linspace(lo, hi, 20001)
    sampled = np.abs(P(x)).max()
    assert lo <= arg <= hi
    assert norm == pytest.approx(abs(P(arg)))
    assert norm >= sampled - 1e-12 * (1 + sampled)
    # the sampled max misses the true one by at most a second-order term
    assert norm <= sampled * (1 + 1e-4) + 1e-12


@given(st.lists(coeff, min_size=1, max_size=9))
def test_interpolation_reproduces_polynomial(c):
    P = Polynomial(tuple(c))
    xs = chebyshev_nodes(-1.5, 1.5, len(c))
    assert max_coeff_difference(interpolate(xs, P(xs)), P) <= 1e-9


def test_chebyshev_nodes():
    x = chebyshev_nodes(-1, 1, 3)
    np.testing.assert_allclose(np.sort(x), [-math.sqrt(3) / 2, 0, math.sqrt(3) / 2], atol=1e-15)


@pytest.mark.parametrize("M, want", [
    ([[0, 1], [1, 0]], [-1, 1]),
    (np.diag([1.0, 2.0, 3.0]), [1, 2, 3]),
    ([[1, 1], [1, 1]], [0, 2]),
])
def test_symmetric_examples(M, want):
    np.testing.assert_allclose(eigenvalues_symmetric(M), want, atol=1e-14)


def test_symmetric_rejects():
    with pytest.raises(InvalidInputError):
        SymmetricMatrix(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        eigenvalues_symmetric(np.ones((2, 3)))


def symmetric_arrays(n):
    return arrays(np.float64, (n, n), elements=st.floats(-5, 5))


@given(st.integers(1, 12).flatmap(symmetric_arrays))
def test_jacobi_matches_eigvalsh(A):
    A = 0.5 * (A + A.T)
    w, V = eigh_symmetric(A, vectors=True)
    scale = 1 + np.linalg.norm(A)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(A), atol=1e-12 * scale)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(A @ V - V * w, 0, atol=1e-11 * scale)
    np.testing.assert_allclose(V.T @ V, np.eye(len(w)), atol=1e-12)


def test_jacobi_larger_and_clustered():
    rng = np.random.default_rng(11)
    Q, _ = np.linalg.qr(rng.standard_normal((40, 40)))
    lam = np.repeat([-1.0, 0.0, 2.0, 2.0 + 1e-9], 10)
    A = (Q * lam) @ Q.T
    A = 0.5 * (A + A.T)
    np.testing.assert_allclose(eigenvalues_symmetric(A), np.sort(lam), atol=1e-12)


@pytest.mark.parametrize("M, want", [
    ([[0, 1j], [-1j, 0]], [-1, 1]),
    ([[2, 0], [0, 2]], [2, 2]),
    ([[0, 1 + 1j], [1 - 1j, 0]], [-math.sqrt(2), math.sqrt(2)]),
])
def test_hermitian_examples(M, want):
    np.testing.assert_allclose(eigenvalues_hermitian(np.array(M, dtype=complex)), want, atol=1e-14)


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(symmetric_arrays(n), symmetric_arrays(n))))
def test_hermitian_matches_eigvalsh(pair):
    re, im = pair
    H = 0.5 * (re + re.T) + 0.5j * (im - im.T)
    want = np.linalg.eigvalsh(H)
    np.testing.assert_allclose(eigenvalues_hermitian(H), want, atol=1e-11 * (1 + np.linalg.norm(H)))


def test_hermitian_rejects_non_hermitian():
    with pytest.raises(InvalidInputError):
        HermitianMatrix(np.array([[0, 1j], [1j, 0]]))


@pytest.mark.parametrize("d, e, want", [
    ([0, 0], [1], [-1, 1]),
    ([5], [], [5]),
    ([0, 0, 0], [1, 1], [-math.sqrt(2), 0, math.sqrt(2)]),
])
def test_tridiagonal_examples(d, e, want):
    np.testing.assert_allclose(eigenvalues_tridiagonal(d, e), want, atol=1e-14)


def test_tridiagonal_rejects():
    with pytest.raises(InvalidInputError):
        eigenvalues_tridiagonal([0, 0], [1, 1])
    with pytest.raises(InvalidInputError):
        eigenvalues_tridiagonal([0, 0], [-1])


@given(st.integers(2, 15).flatmap(lambda n: st.tuples(
    st.lists(st.floats(-2, 2), min_size=n, max_size=n),
    st.lists(st.floats(0.1, 2), min_size=n - 1, max_size=n - 1))))
def test_tridiagonal_spectrum_is_simple(bands):
    d, e = bands
    w = eigenvalues_tridiagonal(d, e)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(T), atol=1e-12 * (1 + np.linalg.norm(T)))
    assert np.all(np.diff(w) > 0)
