"""Closed-form spectrum of 4-periodic Jacobi matrices with zero diagonal.

With ``b = 0`` the discriminant is ``(x^4 - alpha x^2 + beta) / a^4`` where

    alpha = a1^2 + a2^2 + a3^2 + a4^2,   beta = (a1 a3)^2 + (a2 a4)^2,

so ``D = +-2`` are biquadratic and the eight band edges are explicit. These
formulas give an oracle for the general pipeline that shares no code with it.

Small quantities are evaluated in rationalized form, e.g.
``lambda_1^- = sqrt(2) |a1 a3 - a2 a4| / sqrt(alpha + sqrt(D+))``, which avoids
the cancellation in ``alpha - sqrt(D+)`` when the interior gap nearly closes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundsReport, Check, DEFAULT_REL_TOL, inequality
from .core_model import new_periodic_jacobi
from .errors import ConsistencyError, InvalidInputError
from .numerics import Polynomial
from .spectrum import CLOSED_GAP_REL, BandStructure, Gap, band_structure

IDENTITY_TOL = 1e-10
# computed D values in [-CLAMP * alpha^2, 0) are rounding noise around 0
CLAMP = 1e-12
CROSS_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class QuarticInvariants:
    a1: float
    a2: float
    a3: float
    a4: float
    alpha: float
    beta: float
    a4th: float
    Dplus: float
    Dminus: float
    lambda1_minus: float
    lambda1_plus: float
    lambda2_minus: float
    lambda2_plus: float

    @property
    def a(self) -> tuple[float, float, float, float]:
        return self.a1, self.a2, self.a3, self.a4

    @property
    def gamma_int(self) -> float:
        """Length of the interior gap ``(-lambda_1^-, lambda_1^-)``."""
        return 2.0 * self.lambda1_minus

    @property
    def gamma_ext(self) -> float:
        """Length of the exterior gap ``(lambda_2^-, lambda_2^+)``."""
        return self.lambda2_plus - self.lambda2_minus

    @property
    def max_gap(self) -> float:
        return max(self.gamma_int, self.gamma_ext)

    @property
    def omega_a(self) -> float:
        return max(self.a) - min(self.a)

    @property
    def M(self) -> float:
        """Half the sup of ``|D|`` over ``[-lambda_1^+, lambda_1^+]``.

        D is even in x with ``|D| = 2`` at the ends, so the candidates are
        x = 0 and the critical point ``x^2 = alpha / 2``.
        """
        at_zero = self.beta / self.a4th
        at_crit = abs(self.beta - 0.25 * self.alpha ** 2) / self.a4th
        return 0.5 * max(2.0, at_zero, at_crit)

    def discriminant(self) -> Polynomial:
        return Polynomial((self.beta, 0.0, -self.alpha, 0.0, 1.0)) / self.a4th


def _clamp(name: str, value: float, alpha: float) -> float:
    if value >= 0.0:
        return value
    if value >= -CLAMP * alpha * alpha:
        return 0.0
    raise ConsistencyError(f"{name} = {value:.3e} is negative beyond rounding")


def quartic_invariants(a1, a2, a3, a4) -> QuarticInvariants:
    """Invariants, both discriminants ``D+-`` and the four nonnegative edges."""
    a = []
    for i, x in enumerate((a1, a2, a3, a4), start=1):
        if isinstance(x, bool):
            raise InvalidInputError(f"a{i} must be a number")
        x = float(x)
        if not math.isfinite(x) or x <= 0.0:
            raise InvalidInputError(f"a{i} must be positive and finite, got {x!r}")
        a.append(x)
    a1, a2, a3, a4 = a
    alpha = math.fsum((a1 * a1, a2 * a2, a3 * a3, a4 * a4))
    p13, p24 = a1 * a3, a2 * a4
    beta = p13 * p13 + p24 * p24
    a4th = p13 * p24

    # the products are nonnegative by construction; the alpha/beta forms are
    # kept as a consistency check
    Dplus = ((a1 - a3) ** 2 + (a2 + a4) ** 2) * ((a1 + a3) ** 2 + (a2 - a4) ** 2)
    Dminus = ((a1 - a3) ** 2 + (a2 - a4) ** 2) * ((a1 + a3) ** 2 + (a2 + a4) ** 2)
    scale = alpha * alpha
    Dplus_ab = _clamp("D+", alpha * alpha - 4.0 * (beta - 2.0 * a4th), alpha)
    Dminus_ab = _clamp("D-", alpha * alpha - 4.0 * (beta + 2.0 * a4th), alpha)
    for name, x, y in (("D+", Dplus, Dplus_ab), ("D-", Dminus, Dminus_ab),
                       ("D+ - D-", Dplus - Dminus, 16.0 * a4th)):
        if abs(x - y) > IDENTITY_TOL * scale:
            raise ConsistencyError(f"{name}: factorized and expanded forms differ by {abs(x - y):.3e}")

    rp, rm = math.sqrt(Dplus), math.sqrt(Dminus)
    l1m = math.sqrt(2.0) * abs(p13 - p24) / math.sqrt(alpha + rp)
    l2m = math.sqrt(2.0) * (p13 + p24) / math.sqrt(alpha + rm)
    # lambda_2^+ - lambda_2^- = sqrt(2 D-) / (sqrt(alpha + sqrt D-) + sqrt(alpha - sqrt D-)),
    # added on rather than differenced so that the gap is exact when D- = 0
    ext = math.sqrt(2.0 * Dminus) / (math.sqrt(alpha + rm) + math.sqrt(2.0) * l2m)
    return QuarticInvariants(
        a1, a2, a3, a4, alpha, beta, a4th, Dplus, Dminus,
        lambda1_minus=l1m,
        lambda1_plus=math.sqrt(0.5 * (alpha + rp)),
        lambda2_minus=l2m,
        lambda2_plus=l2m + ext,
    )


def quartic_edges(inv: QuarticInvariants) -> np.ndarray:
    l1m, l1p, l2m, l2p = inv.lambda1_minus, inv.lambda1_plus, inv.lambda2_minus, inv.lambda2_plus
    return np.array([-l1p, -l2p, -l2m, -l1m, l1m, l2m, l2p, l1p])


def quartic_band_structure(inv: QuarticInvariants) -> BandStructure:
    """Bands ``+-[lambda_1^-, lambda_2^-]`` and ``+-[lambda_2^+, lambda_1^+]``."""
    e = [float(x) for x in quartic_edges(inv)]
    threshold = CLOSED_GAP_REL * (e[-1] - e[0])
    lengths = (inv.gamma_ext, inv.gamma_int, inv.gamma_ext)
    gaps = tuple(Gap(j, e[2 * j - 1], e[2 * j], closed=lengths[j - 1] <= threshold)
                 for j in range(1, 4))
    return BandStructure(
        edges=tuple(e),
        labels=(2, -2, -2, 2, 2, -2, -2, 2),
        bands=tuple((e[2 * k], e[2 * k + 1]) for k in range(4)),
        gaps=gaps,
        closed_threshold=threshold,
    )


def quartic_inequalities(inv: QuarticInvariants, rel_tol: float = DEFAULT_REL_TOL) -> BoundsReport:
    """The oscillation inequalities for 4-periodic matrices with ``b = 0``.

    The chain for ``|a1 - a2|`` assumes ``a1 + a2 >= a3 + a4``; if that fails
    the sequence is shifted cyclically by two (which leaves the spectrum
    unchanged) and a ``relabeled`` note is attached to the affected records.
    """
    a1, a2, a3, a4 = inv.a
    note = ""
    if a1 + a2 < a3 + a4:
        a1, a2, a3, a4 = a3, a4, a1, a2
        note = "relabeled by cyclic shift 2"
    alpha, sa = inv.alpha, math.sqrt(inv.alpha)
    gi, ge, g, wa = inv.gamma_int, inv.gamma_ext, inv.max_gap, inv.omega_a
    total = a1 + a2 + a3 + a4

    def chk(name, lhs, rhs, n=""):
        return inequality(name, lhs, rhs, rel_tol, note=n)

    records: list[Check] = [
        chk("sqrt_Dplus_vs_alpha", math.sqrt(inv.Dplus), alpha),
        chk("sqrt_Dminus_vs_alpha", math.sqrt(inv.Dminus), alpha),
        chk("ext_lower", math.sqrt(inv.Dminus / alpha), 2.0 * ge),
        chk("exterior_gap_vs_diffs", max(abs(a1 - a3), abs(a2 - a4)), 2.0 * ge),
        chk("int_lower", abs(a1 * a3 - a2 * a4) / sa, 0.5 * gi),
        chk("sum_ratio_1", 0.5, total / (2.0 * sa), note),
        chk("sum_ratio_2", total / (2.0 * sa), (a1 + a2) / sa, note),
        chk("sum_ratio_3", (a1 + a2) / sa, total / sa, note),
        chk("sum_ratio_4", total / sa, 2.0, note),
        chk("a12_diff", abs(a1 - a2), gi + 8.0 * ge, note),
        chk("a12_bound_vs_gap", gi + 8.0 * ge, 9.0 * g),
        chk("omega_a_vs_gaps", wa, gi + 12.0 * ge, note),
        chk("omega_a_bound_vs_gap", gi + 12.0 * ge, 13.0 * g),
        chk("reverse_int", gi, 4.0 * math.sqrt(2.0) * wa),
        chk("reverse_ext", ge, 2.0 * wa),
    ]
    return BoundsReport(tuple(records), max_gap=g)


def oracle_deviation(a1, a2, a3, a4) -> float:
    """Largest |difference| between closed-form and general band edges."""
    inv = quartic_invariants(a1, a2, a3, a4)
    J = new_periodic_jacobi(inv.a, (0.0, 0.0, 0.0, 0.0))
    general = np.asarray(band_structure(J).edges)
    return float(np.abs(general - quartic_edges(inv)).max())


def oracle_cross_check(a1, a2, a3, a4) -> float:
    """:func:`oracle_deviation`, raising if it exceeds ``1e-9 (1 + lambda_1^+)``."""
    inv = quartic_invariants(a1, a2, a3, a4)
    dev = oracle_deviation(a1, a2, a3, a4)
    tol = CROSS_CHECK_TOL * (1.0 + inv.lambda1_plus)
    if dev > tol:
        raise ConsistencyError(f"closed-form and general band edges differ by {dev:.3e} (tol {tol:.3e})")
    return dev
