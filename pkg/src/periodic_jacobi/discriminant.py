"""The Hill discriminant of a periodic Jacobi matrix.

The discriminant is computed three independent ways, which are cross-checked
against each other:

1. coefficient-space recurrence for the special solutions ``s_n``, ``c_n``
   (``D = s_{m+p} - c_{m+p-1}``);
2. the same recurrence run on numbers at a fixed ``lambda`` (used for
   pointwise evaluation and, through interpolation, for coefficients);
3. the characteristic polynomial of the Hermitian one-period block with
   imaginary corners, ``det(lambda - Phi_m) = a^p D(lambda)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_model import PeriodicJacobi
from .errors import ConsistencyError
from .numerics import (
    HermitianMatrix,
    Polynomial,
    chebyshev_nodes,
    eigenvalues_hermitian,
    interpolate,
    max_coeff_difference,
    poly_sup_norm,
)

M_INDEPENDENCE_TOL = 1e-10
FLOQUET_CONTRACT_TOL = 1e-9
ROOT_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class SolutionPair:
    """Special solutions ``s_n(., m)`` and ``c_n(., m)`` for n = m-1 .. m+p.

    ``s_polys[k]`` and ``c_polys[k]`` hold the solution at ``n = m - 1 + k``.
    """

    base_index: int
    s_polys: tuple[Polynomial, ...]
    c_polys: tuple[Polynomial, ...]

    def s(self, n: int) -> Polynomial:
        return self.s_polys[n - self.base_index + 1]

    def c(self, n: int) -> Polynomial:
        return self.c_polys[n - self.base_index + 1]


@dataclass(frozen=True)
class FloquetMatrix:
    base_index: int
    matrix: HermitianMatrix


@dataclass(frozen=True)
class DiscriminantReport:
    """Discriminant data for one matrix.

    ``monic`` is ``a^p D`` and ``a_pow_p`` is ``a_1 ... a_p``; ``disc`` gives
    ``D`` itself. ``cross_check_residual`` is the largest pairwise relative
    coefficient disagreement between the three constructions of ``a^p D``.
    """

    monic: Polynomial
    a_pow_p: float
    roots: tuple[float, ...]
    hull: tuple[float, float]
    sup_norm_2M: float
    critical_point: float
    cross_check_residual: float

    @property
    def disc(self) -> Polynomial:
        return self.monic / self.a_pow_p

    @property
    def M(self) -> float:
        return 0.5 * self.sup_norm_2M


def special_solutions(J: PeriodicJacobi, m: int = 0) -> SolutionPair:
    """Polynomials ``s_n``, ``c_n`` from ``a_n y_{n+1} = (x - b_n) y_n - a_{n-1} y_{n-1}``."""
    p = J.period
    # rows are coefficient vectors (ascending powers) of y_{m-1}, ..., y_{m+p}
    s = np.zeros((p + 2, p + 1))
    c = np.zeros((p + 2, p + 1))
    s[1, 0] = 1.0
    c[0, 0] = -1.0
    for k in range(1, p + 1):
        n = m + k - 1
        an, aprev, bn = J.a_at(n), J.a_at(n - 1), J.b_at(n)
        for y in (s, c):
            nxt = -bn * y[k] - aprev * y[k - 1]
            nxt[1:] += y[k, :-1]
            y[k + 1] = nxt / an
    return SolutionPair(m, tuple(Polynomial(tuple(r)) for r in s),
                        tuple(Polynomial(tuple(r)) for r in c))


def _discriminant_at(J: PeriodicJacobi, m: int) -> Polynomial:
    sol = special_solutions(J, m)
    p = J.period
    return sol.s(m + p) - sol.c(m + p - 1)


def hill_discriminant(J: PeriodicJacobi) -> Polynomial:
    """``D(x) = s_{m+p}(x, m) - c_{m+p-1}(x, m)``, a polynomial of degree p.

    Built for m = 0 and m = 1; the two must agree coefficient-wise.
    """
    D0 = _discriminant_at(J, 0)
    if J.period > 1:
        diff = max_coeff_difference(D0, _discriminant_at(J, 1))
        if diff > M_INDEPENDENCE_TOL:
            raise ConsistencyError(
                f"discriminant depends on the base index (rel. diff {diff:.3e})")
    return D0


def eval_discriminant(J: PeriodicJacobi, lam):
    """``D(lam)`` from the scalar recurrence; ``lam`` may be an array."""
    lam = np.asarray(lam, dtype=float)
    s_prev, s_cur = np.zeros_like(lam), np.ones_like(lam)
    c_prev, c_cur = -np.ones_like(lam), np.zeros_like(lam)
    c_before_last = c_cur
    for n in range(J.period):
        an, aprev, bn = J.a_at(n), J.a_at(n - 1), J.b_at(n)
        c_before_last = c_cur
        s_prev, s_cur = s_cur, ((lam - bn) * s_cur - aprev * s_prev) / an
        c_prev, c_cur = c_cur, ((lam - bn) * c_cur - aprev * c_prev) / an
    out = s_cur - c_before_last
    return float(out) if out.ndim == 0 else out


def bloch_block(J: PeriodicJacobi, m: int, phase: complex) -> np.ndarray:
    """One-period block starting at row ``m`` with corner ``phase * a_{m+p-1}``.

    The corner term is added on top of the tridiagonal part, so for p = 1 and
    p = 2 (where corner and band positions coincide) the entries combine:
    p = 1 gives ``b + 2 Re(phase) a`` and p = 2 gives
    ``a_m + phase * a_{m+1}`` above the diagonal. Phase ``+-1`` yields the
    periodic/antiperiodic truncations and phase ``i`` the Floquet block.
    """
    p = J.period
    B = np.zeros((p, p), dtype=complex)
    for j in range(p):
        B[j, j] += J.b_at(m + j)
    for j in range(p - 1):
        B[j, j + 1] += J.a_at(m + j)
        B[j + 1, j] += J.a_at(m + j)
    corner = J.a_at(m + p - 1)
    B[0, p - 1] += phase * corner
    B[p - 1, 0] += np.conj(phase) * corner
    return B


def floquet_matrix(J: PeriodicJacobi, m: int = 0) -> FloquetMatrix:
    """Hermitian block ``Phi_m`` whose characteristic polynomial is ``a^p D``.

    Diagonal ``b_m .. b_{m+p-1}``, off-diagonals ``a_m .. a_{m+p-2}``, corners
    ``+i a_{m+p-1}`` (top right) and ``-i a_{m+p-1}`` (bottom left). The
    determinant identity is verified at p+1 points before returning.
    """
    B = bloch_block(J, m, 1j)
    p = J.period
    lo = min(J.b) - 2.0 * max(J.a)
    hi = max(J.b) + 2.0 * max(J.a)
    xs = chebyshev_nodes(lo, hi, p + 1)
    dets = np.linalg.det(xs[:, None, None] * np.eye(p) - B[None, :, :])
    expected = math.prod(J.a) * eval_discriminant(J, xs)
    scale = max(np.abs(expected).max(), 1.0)
    err = np.abs(dets - expected).max() / scale
    if err > FLOQUET_CONTRACT_TOL:
        raise ConsistencyError(
            f"det(x - Phi_{m}) differs from a^p D(x) by {err:.3e} (relative)")
    return FloquetMatrix(m, HermitianMatrix(B))


def discriminant_roots(J: PeriodicJacobi) -> np.ndarray:
    """Zeros ``d_1 < ... < d_p`` of D, as eigenvalues of ``Phi_0``."""
    d = eigenvalues_hermitian(floquet_matrix(J, 0).matrix)
    res = np.abs(eval_discriminant(J, d)).max()
    if res > ROOT_RESIDUAL_TOL:
        raise ConsistencyError(f"|D(d_j)| = {res:.3e} at a computed root")
    return d


def trace_identity(J: PeriodicJacobi, roots=None) -> float:
    """Residual ``|sum d_j^2 - sum (b_j^2 + 2 a_j^2)|``.

    Only meaningful for p >= 2: at p = 1 the Floquet block is the scalar
    ``b_1`` and the identity reads ``b^2 = b^2 + 2a^2``, which never holds.
    """
    d = discriminant_roots(J) if roots is None else np.asarray(roots)
    lhs = math.fsum(x * x for x in d)
    rhs = math.fsum(b * b + 2.0 * a * a for a, b in zip(J.a, J.b))
    return abs(lhs - rhs)


def sup_norm_M(J: PeriodicJacobi, L, disc: Polynomial | None = None) -> tuple[float, float]:
    """``(M, nu)``: half the sup-norm of D over the interval ``L`` and its argmax."""
    D = hill_discriminant(J) if disc is None else disc
    norm, nu = poly_sup_norm(D, L[0], L[1])
    return 0.5 * norm, nu


def gap_critical_points(disc: Polynomial, gaps) -> list[tuple[float, float]]:
    """Per-gap ``(max |D|, argmax)`` over each closed gap ``[mu_j^-, mu_j^+]``."""
    return [poly_sup_norm(disc, g.lower, g.upper) for g in gaps]


def three_way_residual(J: PeriodicJacobi, L, roots=None, disc=None) -> float:
    """Largest pairwise relative disagreement between the three ``a^p D`` forms."""
    ap = math.prod(J.a)
    via_recurrence = ap * (hill_discriminant(J) if disc is None else disc)
    xs = chebyshev_nodes(L[0], L[1], J.period + 1)
    via_samples = ap * interpolate(xs, eval_discriminant(J, xs))
    d = discriminant_roots(J) if roots is None else roots
    via_floquet = Polynomial.from_roots(d)
    return max(
        max_coeff_difference(via_recurrence, via_samples),
        max_coeff_difference(via_recurrence, via_floquet),
        max_coeff_difference(via_samples, via_floquet),
    )


def discriminant_report(J: PeriodicJacobi, bands=None) -> DiscriminantReport:
    if bands is None:
        from .spectrum import band_structure

        bands = band_structure(J)
    D = hill_discriminant(J)
    d = discriminant_roots(J)
    ap = math.prod(J.a)
    norm, nu = poly_sup_norm(D, *bands.hull)
    return DiscriminantReport(
        monic=ap * D,
        a_pow_p=ap,
        roots=tuple(float(x) for x in d),
        hull=bands.hull,
        sup_norm_2M=norm,
        critical_point=nu,
        cross_check_residual=three_way_residual(J, bands.hull, roots=d, disc=D),
    )
