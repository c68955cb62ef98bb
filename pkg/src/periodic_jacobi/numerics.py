"""Small dense numerical kernels.

Everything here works at the sizes this package needs (matrix orders up to a
few dozen, polynomial degrees up to ~32) and favours accuracy and
transparency over asymptotic speed:

* a cyclic Jacobi-rotation eigensolver for real symmetric matrices, using a
  round-robin pair ordering so that each round applies n/2 disjoint rotations
  as one orthogonal similarity;
* Hermitian spectra through the real symmetric embedding
  ``[[Re, -Im], [Im, Re]]``, whose spectrum is the Hermitian one doubled;
* monomial-basis polynomials with Horner evaluation and a sup-norm routine
  that locates critical points by bracketing and bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, ConvergenceError, InvalidInputError

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 64
POLY_TRIM = 1e-13


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Real polynomial ``c[0] + c[1] x + ... + c[n] x^n``.

    Trailing coefficients below ``1e-13 * max|c|`` are dropped at construction,
    so ``degree`` is well defined. The zero polynomial is stored as ``(0.0,)``
    and has degree ``-1``.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float).ravel()
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("polynomial coefficients must be finite")
        mag = np.abs(c)
        keep = np.nonzero(mag > POLY_TRIM * mag.max())[0] if len(c) else ()
        n = keep[-1] + 1 if len(keep) else 0
        out = tuple(c[:n].tolist()) if n else (0.0,)
        object.__setattr__(self, "coeffs", out)

    @classmethod
    def constant(cls, value: float) -> Polynomial:
        return cls((value,))

    @classmethod
    def identity(cls) -> Polynomial:
        return cls((0.0, 1.0))

    @classmethod
    def from_roots(cls, roots: Iterable[float]) -> Polynomial:
        """Monic polynomial with the given roots."""
        c = np.array([1.0])
        for r in roots:
            c = np.concatenate(([0.0], c)) - float(r) * np.concatenate((c, [0.0]))
        return cls(tuple(c))

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    @property
    def degree(self) -> int:
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def __call__(self, x):
        return poly_eval(self, x)

    def deriv(self, k: int = 1) -> Polynomial:
        c = np.array(self.coeffs)
        for _ in range(k):
            if len(c) <= 1:
                return Polynomial((0.0,))
            c = c[1:] * np.arange(1, len(c))
        return Polynomial(tuple(c))

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(n)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(other.coeffs)] += other.coeffs
        return Polynomial(tuple(c))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial((0.0,))
            return Polynomial(tuple(np.convolve(self.coeffs, other.coeffs)))
        return Polynomial(tuple(float(other) * x for x in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float):
        return Polynomial(tuple(x / float(scalar) for x in self.coeffs))


def _coerce(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial.constant(float(x))


def poly_eval(P: Polynomial, x):
    """Horner evaluation; ``x`` may be a scalar or a numpy array."""
    acc = 0.0 * x if isinstance(x, np.ndarray) else 0.0
    for c in reversed(P.coeffs):
        acc = acc * x + c
    return acc


def max_coeff_difference(P: Polynomial, Q: Polynomial) -> float:
    """``max_k |p_k - q_k| / max_k |p_k|``; 0 when both vanish."""
    n = max(len(P.coeffs), len(Q.coeffs))
    p = np.zeros(n)
    q = np.zeros(n)
    p[: len(P.coeffs)] = P.coeffs
    q[: len(Q.coeffs)] = Q.coeffs
    scale = max(np.abs(p).max(), np.abs(q).max())
    if scale == 0.0:
        return 0.0
    return float(np.abs(p - q).max() / scale)


def poly_sup_norm(P: Polynomial, lo: float, hi: float) -> tuple[float, float]:
    """Return ``(max |P|, argmax)`` over ``[lo, hi]``.

    Candidates are both endpoints and every root of ``P'`` bracketed by a sign
    change on a uniform grid of ``64 deg(P') + 1`` points, refined by bisection
    to width ``1e-13 (hi - lo)``. The grid points themselves are candidates
    too, which guards against pairs of critical points sharing a grid cell.
    """
    lo = float(lo)
    hi = float(hi)
    if lo > hi:
        raise InvalidInputError(f"empty interval: lo={lo} > hi={hi}")
    if lo == hi:
        return abs(poly_eval(P, lo)), lo

    dP = P.deriv()
    cand = [np.array([lo, hi])]
    if dP.degree >= 1:
        grid = np.linspace(lo, hi, 64 * dP.degree + 1)
        cand.append(grid)
        g = poly_eval(dP, grid)
        cand.append(grid[g == 0.0])
        left = grid[:-1]
        right = grid[1:]
        gl = g[:-1]
        mask = gl * g[1:] < 0.0
        if mask.any():
            cand.append(_bisect_roots(dP, left[mask], right[mask], gl[mask],
                                      1e-13 * (hi - lo)))
    xs = np.concatenate(cand)
    vals = np.abs(poly_eval(P, xs))
    k = int(np.argmax(vals))
    return float(vals[k]), float(xs[k])


def _bisect_roots(f: Polynomial, left, right, fleft, width):
    left = left.copy()
    right = right.copy()
    sl = np.sign(fleft)
    while np.max(right - left) > width:
        mid = 0.5 * (left + right)
        if np.all((mid == left) | (mid == right)):
            break
        fm = poly_eval(f, mid)
        go_right = np.sign(fm) == sl
        left = np.where(go_right, mid, left)
        right = np.where(go_right, right, mid)
    return 0.5 * (left + right)


def chebyshev_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    """``n`` Chebyshev points of the first kind mapped to ``[lo, hi]``."""
    k = np.arange(n)
    t = np.cos((2 * k + 1) * np.pi / (2 * n))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t


def interpolate(xs: Sequence[float], ys: Sequence[float]) -> Polynomial:
    """Interpolating polynomial through ``(xs, ys)`` in the monomial basis.

    Newton divided differences, then nested expansion of the Newton form.
    """
    xs = np.asarray(xs, dtype=float)
    dd = np.array(ys, dtype=float)
    n = len(xs)
    for j in range(1, n):
        dd[j:] = (dd[j:] - dd[j - 1:-1]) / (xs[j:] - xs[: n - j])
    c = np.array([dd[-1]])
    for k in range(n - 2, -1, -1):
        # c(x) <- c(x) * (x - xs[k]) + dd[k]
        c = np.concatenate(([0.0], c)) - xs[k] * np.concatenate((c, [0.0]))
        c[0] += dd[k]
    return Polynomial(tuple(c))


# --------------------------------------------------------------------------
# matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    entries: np.ndarray

    def __post_init__(self):
        A = np.array(self.entries, dtype=float)
        _check_square(A)
        norm = np.linalg.norm(A)
        if np.abs(A - A.T).max() > 1e-12 * norm:
            raise InvalidInputError("matrix is not symmetric")
        A = 0.5 * (A + A.T)
        A.setflags(write=False)
        object.__setattr__(self, "entries", A)

    @property
    def order(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        A = np.array(self.entries, dtype=complex)
        _check_square(A)
        norm = np.linalg.norm(A)
        if np.abs(A - A.conj().T).max() > 1e-12 * norm:
            raise InvalidInputError("matrix is not Hermitian")
        A = 0.5 * (A + A.conj().T)
        A.setflags(write=False)
        object.__setattr__(self, "entries", A)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def real_embedding(self) -> SymmetricMatrix:
        re, im = self.entries.real, self.entries.imag
        return SymmetricMatrix(np.block([[re, -im], [im, re]]))


def _check_square(A):
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InvalidInputError(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix entries must be finite")


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, ...], ...]:
    """Rotation schedule for order ``n`` as flat indices into an n x n array.

    Circle method: n-1 (n even) or n (n odd) rounds of disjoint pairs (p, q),
    p < q, covering every pair once per sweep. Each round is returned as flat
    indices of the (p,p), (q,q), (p,q), (q,p) positions.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = sorted((min(u, v), max(u, v)) for u, v in pairs if u < n and v < n)
        P = np.array([u for u, _ in pairs], dtype=np.intp)
        Q = np.array([v for _, v in pairs], dtype=np.intp)
        rounds.append((P * n + P, Q * n + Q, P * n + Q, Q * n + P))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def eigh_symmetric(M, vectors: bool = False, tol: float = JACOBI_TOL,
                   max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Cyclic Jacobi eigen-decomposition of a real symmetric matrix.

    Sweeps until the off-diagonal Frobenius norm is at most ``tol * ||M||_F``.
    Returns sorted eigenvalues, plus the matching orthonormal eigenvectors as
    columns when ``vectors`` is true.
    """
    if not isinstance(M, SymmetricMatrix):
        M = SymmetricMatrix(M)
    A = np.array(M.entries)
    n = A.shape[0]
    V = np.eye(n)
    norm = np.linalg.norm(A)
    rounds = _round_robin(n)
    eye = np.eye(n)
    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * norm:
            break
        if sweep == max_sweeps:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps (n={n})")
        for ipp, iqq, ipq, iqp in rounds:
            flat = A.ravel()
            apq = flat[ipq]
            d = flat[iqq] - flat[ipp]
            den = np.abs(d) + np.hypot(d, 2.0 * apq)
            # t = tan(theta), the smaller root of t^2 + (d / apq) t - 1 = 0
            t = np.divide(2.0 * apq * np.copysign(1.0, d), den,
                          out=np.zeros_like(den), where=den > 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            R = eye.copy()
            R.ravel()[np.concatenate((ipp, iqq, ipq, iqp))] = np.concatenate((c, c, s, -s))
            A = R.T @ A @ R
            if vectors:
                V = V @ R
    w = np.diag(A)
    order = np.argsort(w, kind="stable")
    if vectors:
        return w[order], V[:, order]
    return w[order]


def eigenvalues_symmetric(M) -> np.ndarray:
    """All eigenvalues of a real symmetric matrix, nondecreasing."""
    return eigh_symmetric(M)


def eigenvalues_hermitian(M) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, nondecreasing.

    The doubled real embedding is diagonalised and the sorted spectrum is read
    off in consecutive pairs, each pair averaged.
    """
    if not isinstance(M, HermitianMatrix):
        M = HermitianMatrix(M)
    w = eigenvalues_symmetric(M.real_embedding())
    lo, hi = w[0::2], w[1::2]
    norm = max(np.linalg.norm(M.entries), np.finfo(float).tiny)
    gap = np.abs(hi - lo).max()
    if gap > 1e-8 * norm:
        raise ConsistencyError(
            f"eigenvalue pairing failed: paired values differ by {gap:.3e}")
    return 0.5 * (lo + hi)


def eigenvalues_tridiagonal(diag: Sequence[float], offdiag: Sequence[float]) -> np.ndarray:
    """Eigenvalues of the symmetric tridiagonal matrix with the given bands."""
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    if len(diag) < 1 or len(offdiag) != len(diag) - 1:
        raise InvalidInputError(
            f"need len(offdiag) == len(diag) - 1, got {len(offdiag)} and {len(diag)}")
    if np.any(offdiag <= 0.0):
        raise InvalidInputError("off-diagonal entries must be positive")
    T = np.diag(diag) + np.diag(offdiag, 1) + np.diag(offdiag, -1)
    return eigenvalues_symmetric(T)
