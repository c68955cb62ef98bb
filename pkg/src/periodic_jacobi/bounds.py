"""Numerical verification of the gap/oscillation inequalities.

Every inequality is stored as a :class:`Check` of the form ``lhs <= rhs``,
tested with an additive slack ``rel_tol * (1 + |lhs| + |rhs|)``. Quantities
that need a zero-mean diagonal are computed on the normalized matrix; the
shift that was removed is recorded in the report.

Main chain, for a p-periodic matrix with maximal gap ``g``:

* ``omega_b <= p(p-1)/2 * g`` and ``omega_a <= p^2 sqrt(p) * g``;
* ``g / 4 <= omega_a + omega_b``;
* the supporting steps: the Korotyaev-Kutsenko bound on the Floquet
  eigenvalues, the AGM step, a Markov-inequality bound on ``D''``, the
  lower bound on ``g`` in terms of ``M`` and ``|L|``, the variance bound on
  the branch ``1 < M < 2``, and the comparison with a constant matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core_model import PeriodicJacobi, normalize, variation
from .discriminant import discriminant_report, trace_identity
from .errors import InvalidInputError
from .numerics import Polynomial, poly_sup_norm
from .spectrum import (
    BandStructure,
    band_structure,
    dirichlet_spectrum,
    gap_membership_violation,
)

DEFAULT_REL_TOL = 1e-9
STRICT_REL_TOL = 1e-12
# |x| below this fraction of the check's scale counts as an exact zero
NEGLIGIBLE = 1e-12
M_ONE_BAND = 1e-8

PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"
DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class Check:
    """One verified inequality ``lhs <= rhs``."""

    name: str
    lhs: float
    rhs: float
    status: str
    tol: float = 0.0
    note: str = ""

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def ratio(self) -> float:
        """``lhs / rhs``; 0 for 0/0 and ``inf`` for x/0 (both flagged degenerate)."""
        if self.status == SKIPPED:
            return math.nan
        scale = 1.0 + abs(self.lhs) + abs(self.rhs)
        if abs(self.rhs) <= NEGLIGIBLE * scale:
            return 0.0 if abs(self.lhs) <= NEGLIGIBLE * scale else math.inf
        return self.lhs / self.rhs

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def inequality(name: str, lhs: float, rhs: float, rel_tol: float = DEFAULT_REL_TOL,
               note: str = "") -> Check:
    lhs = float(lhs)
    rhs = float(rhs)
    scale = 1.0 + abs(lhs) + abs(rhs)
    tol = rel_tol * scale
    if not lhs <= rhs + tol:
        status = FAIL
    elif abs(rhs) <= NEGLIGIBLE * scale:
        status = DEGENERATE
    else:
        status = PASS
    return Check(name, lhs, rhs, status, tol, note)


def residual_check(name: str, value: float, bound: float, note: str = "") -> Check:
    """``value <= bound`` with no extra slack (``bound`` already is the tolerance)."""
    status = PASS if float(value) <= float(bound) else FAIL
    return Check(name, float(value), float(bound), status, 0.0, note)


def skipped(name: str, note: str) -> Check:
    return Check(name, math.nan, math.nan, SKIPPED, 0.0, note)


@dataclass(frozen=True)
class BoundsReport:
    records: tuple[Check, ...]
    shift: float = 0.0
    max_gap: float = math.nan
    M: float = math.nan

    @property
    def passed(self) -> bool:
        return not any(r.failed for r in self.records)

    def failures(self) -> list[Check]:
        return [r for r in self.records if r.failed]

    def __getitem__(self, name: str) -> Check:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


@dataclass(frozen=True)
class BalancedPolynomial:
    """Monic real-rooted polynomial whose roots sum to zero."""

    roots: tuple[float, ...]

    def __post_init__(self):
        x = np.sort(np.asarray(self.roots, dtype=float))
        if len(x) < 1:
            raise InvalidInputError("need at least one root")
        total = abs(math.fsum(x))
        if total > 1e-10 * len(x) * max(np.abs(x).max(), np.finfo(float).tiny):
            raise InvalidInputError(f"roots are not balanced: sum = {total:.3e}")
        object.__setattr__(self, "roots", tuple(x.tolist()))

    @property
    def n(self) -> int:
        return len(self.roots)

    @property
    def sum(self) -> float:
        return math.fsum(self.roots)

    @property
    def sum_of_squares(self) -> float:
        return math.fsum(x * x for x in self.roots)

    @property
    def second_symmetric(self) -> float:
        """Coefficient of ``x^(n-2)``; equals ``-sum x_j^2 / 2`` when balanced."""
        return -0.5 * self.sum_of_squares

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial.from_roots(self.roots)

    @property
    def sup_norm(self) -> float:
        """``max |P|`` over ``[min root, max root]``."""
        return poly_sup_norm(self.polynomial, self.roots[0], self.roots[-1])[0]


def kk_bound(x: BalancedPolynomial | Sequence[float]) -> tuple[float, float]:
    """``(sum x_j^2, 2n (c/2)^(2/n))`` with c the sup-norm over the root hull."""
    if not isinstance(x, BalancedPolynomial):
        x = BalancedPolynomial(tuple(x))
    if x.n < 2:
        raise InvalidInputError("the Korotyaev-Kutsenko bound needs n >= 2")
    c = x.sup_norm
    return x.sum_of_squares, 2 * x.n * (0.5 * c) ** (2.0 / x.n)


@dataclass(frozen=True)
class PerturbationReport:
    """Comparison of J with the constant matrix (``alpha`` off-diagonal, ``beta`` diagonal)."""

    alpha: float
    beta: float
    sup_b_deviation: float
    sup_a_deviation: float
    norm_bound: float
    sharpened_bound: float
    checks: tuple[Check, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not any(c.failed for c in self.checks)


# --------------------------------------------------------------------------


def _prepare(J: PeriodicJacobi, bands=None, report=None):
    Jn = normalize(J)
    shift = J.b_mean
    if bands is None:
        bands = band_structure(Jn)
    if report is None:
        report = discriminant_report(Jn, bands)
    return Jn, shift, bands, report


def theorem_bounds(J: PeriodicJacobi, bands: BandStructure | None = None,
                   rel_tol: float = DEFAULT_REL_TOL) -> BoundsReport:
    """The two upper bounds on the oscillations and the lower bound."""
    Jn = normalize(J)
    if bands is None:
        bands = band_structure(Jn)
    p = J.period
    v = variation(Jn)
    g = bands.max_gap
    records = (
        inequality("theorem_b_upper", v.omega_b, p * (p - 1) / 2 * g, rel_tol),
        inequality("theorem_a_upper", v.omega_a, p * p * math.sqrt(p) * g, rel_tol),
        inequality("theorem_lower", g / 4, v.omega_a + v.omega_b, rel_tol),
    )
    return BoundsReport(records, shift=J.b_mean, max_gap=g)


def markov_diagnostic(J: PeriodicJacobi, bands=None, report=None,
                      rel_tol: float = DEFAULT_REL_TOL) -> Check:
    """``||D''||_L <= 4 p^4 M / |L|^2``."""
    Jn, _, bands, report = _prepare(J, bands, report)
    p = J.period
    lo, hi = bands.hull
    lhs = poly_sup_norm(report.disc.deriv(2), lo, hi)[0]
    rhs = 4 * p ** 4 * report.M / bands.hull_length ** 2
    return inequality("markov", lhs, rhs, rel_tol)


def gap_lower_diagnostic(J: PeriodicJacobi, bands=None, report=None,
                         rel_tol: float = DEFAULT_REL_TOL) -> list[Check]:
    """Lower bounds on the maximal gap in terms of ``M`` and ``|L|``.

    Always: ``g >= |L|/p^2 * sqrt((M-1)/M)``, vacuous (right side 0) once
    ``M <= 1 + 1e-8``, where the square root would only magnify rounding in M.
    When ``M >= 2`` also ``g >= |L| / (sqrt(2) p^2)`` and
    ``max a_j < sqrt(p/2) |L| <= p^2 sqrt(p) g``.
    """
    Jn, _, bands, report = _prepare(J, bands, report)
    p = J.period
    M = report.M
    L = bands.hull_length
    g = bands.max_gap
    from_m = 0.0 if M <= 1.0 + M_ONE_BAND else L / p ** 2 * math.sqrt((M - 1.0) / M)
    out = [inequality("gap_lower_from_M", from_m, g, rel_tol)]
    if M >= 2.0:
        out += [
            inequality("gap_lower_large_M", L / (math.sqrt(2) * p ** 2), g, rel_tol),
            inequality("max_a_vs_hull", max(Jn.a), math.sqrt(p / 2) * L, rel_tol),
            inequality("hull_vs_max_gap", math.sqrt(p / 2) * L, p * p * math.sqrt(p) * g, rel_tol),
        ]
    else:
        note = "branch M<2"
        out += [skipped("gap_lower_large_M", note), skipped("max_a_vs_hull", note),
                skipped("hull_vs_max_gap", note)]
    return out


def variance_bound(J: PeriodicJacobi, bands=None, report=None,
                   rel_tol: float = DEFAULT_REL_TOL) -> list[Check]:
    """Variance of the off-diagonal, checked on the branch ``1 < M < 2`` only."""
    Jn, _, bands, report = _prepare(J, bands, report)
    M = report.M
    names = ("variance_vs_gap", "entry_deviation_vs_gap", "variance_vs_M")
    if M <= 1.0 + M_ONE_BAND:
        return [skipped(n, "branch M=1") for n in names]
    if M >= 2.0:
        return [skipped(n, "branch M>=2") for n in names]
    p = J.period
    a = Jn.a_array
    s_a = a.mean()
    var = float(np.mean((a - s_a) ** 2))
    g = bands.max_gap
    geo = Jn.geometric_mean_a
    return [
        inequality("variance_vs_gap", var, p ** 3 / 4 * g * g, rel_tol),
        inequality("entry_deviation_vs_gap", float(np.abs(a - s_a).max()), p * p / 2 * g, rel_tol),
        inequality("variance_vs_M", var, 2 * geo * geo / p * (M - 1.0), rel_tol),
    ]


def agm_step(J: PeriodicJacobi, M: float, rel_tol: float = DEFAULT_REL_TOL) -> list[Check]:
    """``var(a) <= mean(a^2) - a^2 <= a^2 (M^(2/p) - 1)``, a the geometric mean."""
    p = J.period
    a = J.a_array
    mean_sq = float(np.mean(a * a))
    var = float(np.mean((a - a.mean()) ** 2))
    geo2 = J.geometric_mean_a ** 2
    return [
        inequality("agm_variance", var, mean_sq - geo2, rel_tol),
        inequality("agm_vs_M", mean_sq - geo2, geo2 * (M ** (2.0 / p) - 1.0), rel_tol),
    ]


def perturbation_gap_bound(J: PeriodicJacobi, bands=None,
                           rel_tol: float = DEFAULT_REL_TOL) -> PerturbationReport:
    """Every gap is at most ``2 (omega_b + 2 omega_a)``.

    The comparison constant matrix uses the midpoints of the ranges of a and
    b, which also gives the sharper norm estimate ``omega_b/2 + omega_a``;
    both bounds are checked.
    """
    if bands is None:
        bands = band_structure(J)
    v = variation(J)
    alpha = 0.5 * (min(J.a) + max(J.a))
    beta = 0.5 * (min(J.b) + max(J.b))
    dev_b = max(abs(x - beta) for x in J.b)
    dev_a = max(abs(x - alpha) for x in J.a)
    norm_bound = v.omega_b + 2 * v.omega_a
    sharp = dev_b + 2 * dev_a
    checks = []
    for g in bands.gaps:
        checks.append(inequality(f"perturbation_gap_{g.index}", g.length, 2 * norm_bound, rel_tol))
        checks.append(inequality(f"perturbation_sharp_gap_{g.index}", g.length, 2 * sharp, rel_tol))
    return PerturbationReport(alpha, beta, dev_b, dev_a, norm_bound, sharp, tuple(checks))


def full_verification(J: PeriodicJacobi, rel_tol: float = DEFAULT_REL_TOL) -> BoundsReport:
    """Run every check on one matrix and collect the records."""
    Jn = normalize(J)
    p = J.period
    bands = band_structure(Jn)
    report = discriminant_report(Jn, bands)
    norm = bands.operator_norm
    records: list[Check] = []

    records += theorem_bounds(Jn, bands, rel_tol).records

    d = np.array(report.roots)
    if p >= 2:
        kk_lhs, kk_rhs = kk_bound(d)
        records.append(inequality("kk", kk_lhs, kk_rhs, rel_tol))
        chain = 2 * p * Jn.geometric_mean_a ** 2 * report.M ** (2.0 / p)
        records.append(inequality("kk_chain", kk_lhs, chain, rel_tol))
    else:
        records += [skipped("kk", "p=1"), skipped("kk_chain", "p=1")]
    records += agm_step(Jn, report.M, rel_tol)
    records.append(markov_diagnostic(Jn, bands, report, rel_tol))
    records += gap_lower_diagnostic(Jn, bands, report, rel_tol)
    records += variance_bound(Jn, bands, report, rel_tol)

    pert = perturbation_gap_bound(Jn, bands, rel_tol)
    g = bands.max_gap
    records.append(inequality("perturbation", g, 2 * pert.norm_bound, rel_tol))
    records.append(inequality("perturbation_sharpened", g, 2 * pert.sharpened_bound, rel_tol))

    records.append(inequality("M_at_least_one", 1.0, report.M, rel_tol))
    records.append(inequality("hull_vs_geo_mean", 4 * Jn.geometric_mean_a, bands.hull_length, rel_tol))
    records.append(inequality("roots_in_hull", float(np.abs(d).max()), bands.hull_length, rel_tol))
    records.append(inequality("hull_contains_zero", 0.0, min(-bands.hull[0], bands.hull[1]), rel_tol))
    records.append(residual_check("discriminant_cross_check", report.cross_check_residual, 1e-8))

    if p >= 2:
        records.append(residual_check(
            "trace_identity", trace_identity(Jn, d), 1e-9 * p * (1 + norm ** 2)))
        spectra = [dirichlet_spectrum(Jn, m) for m in range(p + 1)]
        worst_tr = max(
            abs((Jn.b_at(m) - Jn.b_at(m - 1))
                - (math.fsum(spectra[m].xi) - math.fsum(spectra[m + 1].xi)))
            for m in range(p))
        records.append(residual_check("trace_formula_b", worst_tr, 1e-8 * p * (1 + norm)))
        worst_in = max(gap_membership_violation(bands, s) for s in spectra[:p])
        records.append(residual_check("dirichlet_in_gaps", worst_in, 1e-8))
    else:
        records += [skipped(n, "p=1") for n in
                    ("trace_identity", "trace_formula_b", "dirichlet_in_gaps")]
    return BoundsReport(tuple(records), shift=J.b_mean, max_gap=g, M=report.M)

