"""Bands, gaps and Dirichlet data of a periodic Jacobi matrix.

Band edges are the +-2 points of the discriminant. They are computed as the
eigenvalues of the two real one-period blocks with corner ``+a`` and ``-a``
(periodic and antiperiodic boundary conditions) rather than as roots of
``D -+ 2``: a closed gap is a double root of ``D -+ 2``, which is badly
conditioned for polynomial root finding but harmless for a symmetric
eigensolver. Each edge is then certified by ``|D(edge)| = 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_model import PeriodicJacobi, normalize
from .discriminant import bloch_block, eval_discriminant, special_solutions
from .errors import ConsistencyError
from .numerics import eigenvalues_symmetric, eigenvalues_tridiagonal, poly_eval

EDGE_TOL = 1e-8
CLOSED_GAP_REL = 1e-9


@dataclass(frozen=True)
class Gap:
    """Gap ``(lower, upper)`` between band ``index - 1`` and band ``index``.

    ``index`` runs over 1..p-1. A closed gap keeps its computed endpoints and
    (tiny) length; ``location`` is the midpoint, i.e. where the bands touch.
    """

    index: int
    lower: float
    upper: float
    closed: bool

    @property
    def length(self) -> float:
        return max(self.upper - self.lower, 0.0)

    @property
    def location(self) -> float:
        return 0.5 * (self.lower + self.upper)


@dataclass(frozen=True)
class BandStructure:
    edges: tuple[float, ...]
    labels: tuple[int, ...]
    bands: tuple[tuple[float, float], ...]
    gaps: tuple[Gap, ...]
    closed_threshold: float

    @property
    def period(self) -> int:
        return len(self.bands)

    @property
    def hull(self) -> tuple[float, float]:
        return self.edges[0], self.edges[-1]

    @property
    def hull_length(self) -> float:
        return self.edges[-1] - self.edges[0]

    @property
    def max_gap(self) -> float:
        return max((g.length for g in self.gaps), default=0.0)

    @property
    def max_gap_index(self) -> int | None:
        if not self.gaps:
            return None
        return max(self.gaps, key=lambda g: g.length).index

    @property
    def operator_norm(self) -> float:
        return max(abs(self.edges[0]), abs(self.edges[-1]))

    def shifted(self, c: float) -> BandStructure:
        """Band structure of ``J + c`` (every entry of b shifted by ``c``)."""
        return BandStructure(
            edges=tuple(x + c for x in self.edges),
            labels=self.labels,
            bands=tuple((lo + c, hi + c) for lo, hi in self.bands),
            gaps=tuple(Gap(g.index, g.lower + c, g.upper + c, g.closed) for g in self.gaps),
            closed_threshold=self.closed_threshold,
        )


@dataclass(frozen=True)
class DirichletSpectrum:
    base_index: int
    xi: tuple[float, ...]


def band_edges(J: PeriodicJacobi) -> tuple[np.ndarray, np.ndarray]:
    """All 2p band edges, sorted, with the sign of D there (+2 or -2)."""
    per = eigenvalues_symmetric(bloch_block(J, 0, 1.0).real)
    anti = eigenvalues_symmetric(bloch_block(J, 0, -1.0).real)
    edges = np.sort(np.concatenate((per, anti)), kind="stable")
    values = eval_discriminant(J, edges)
    err = np.abs(np.abs(values) - 2.0).max()
    if err > EDGE_TOL:
        raise ConsistencyError(f"|D| deviates from 2 by {err:.3e} at a band edge")
    labels = np.where(values > 0.0, 2, -2)
    return edges, labels


def band_structure(J: PeriodicJacobi) -> BandStructure:
    edges, labels = band_edges(J)
    p = J.period
    bands = tuple((float(edges[2 * k]), float(edges[2 * k + 1])) for k in range(p))
    threshold = CLOSED_GAP_REL * float(edges[-1] - edges[0])
    gaps = []
    for j in range(1, p):
        lo, hi = float(edges[2 * j - 1]), float(edges[2 * j])
        gaps.append(Gap(j, lo, hi, closed=(hi - lo) <= threshold))
    return BandStructure(
        edges=tuple(float(x) for x in edges),
        labels=tuple(int(x) for x in labels),
        bands=bands,
        gaps=tuple(gaps),
        closed_threshold=threshold,
    )


def dirichlet_spectrum(J: PeriodicJacobi, m: int = 0) -> DirichletSpectrum:
    """Zeros of ``s_{m+p-1}(., m)``: the spectrum of the (p-1)-block at row m.

    Empty for p = 1. Each eigenvalue is checked against the polynomial from
    the special-solution recurrence.
    """
    p = J.period
    if p == 1:
        return DirichletSpectrum(m, ())
    diag = [J.b_at(m + j) for j in range(p - 1)]
    off = [J.a_at(m + j) for j in range(p - 2)]
    xi = eigenvalues_tridiagonal(diag, off)
    s = special_solutions(J, m).s(m + p - 1)
    bound = 1e-8 * (1.0 + np.abs(xi)) ** (p - 1)
    if np.any(np.abs(poly_eval(s, xi)) > bound):
        raise ConsistencyError(f"Dirichlet eigenvalue is not a zero of s_(m+p-1), m={m}")
    return DirichletSpectrum(m, tuple(float(x) for x in xi))


def trace_formula_b(J: PeriodicJacobi, m: int = 0) -> float:
    """Residual ``|(b_m - b_{m-1}) - sum_j (xi_j^(m) - xi_j^(m+1))|``.

    The matrix is normalized first.
    """
    Jn = normalize(J)
    lhs = Jn.b_at(m) - Jn.b_at(m - 1)
    rhs = math.fsum(dirichlet_spectrum(Jn, m).xi) - math.fsum(dirichlet_spectrum(Jn, m + 1).xi)
    return abs(lhs - rhs)


def gap_membership_violation(bands: BandStructure, dirichlet: DirichletSpectrum) -> float:
    """Largest distance from any ``xi_j`` to its closed gap (0 when all inside)."""
    worst = 0.0
    for g, x in zip(bands.gaps, dirichlet.xi):
        worst = max(worst, g.lower - x, x - g.upper)
    return worst
