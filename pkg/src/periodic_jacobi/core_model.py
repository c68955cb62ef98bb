"""Periodic Jacobi matrices stored as one period of entries.

Indexing convention
-------------------
``J.a[k]`` and ``J.b[k]`` (k = 0..p-1) are the entries at row ``k`` of the
doubly infinite matrix, so row ``n`` reads ``a[n-1], b[n], a[n]`` with all
indices taken mod p. The one-period label set 1..p of the textbook
presentation is the same cycle: position 0 plays the role of index p.
Every function that takes a base index ``m`` reduces it mod p and reads the
block starting at position ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class PeriodicJacobi:
    """One period of a two-sided periodic Jacobi matrix.

    ``a`` holds the (strictly positive) off-diagonal entries and ``b`` the
    diagonal. Construct through :func:`new_periodic_jacobi` to get validation
    with index-level diagnostics.
    """

    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        _validate(self.a, self.b)

    @property
    def period(self) -> int:
        return len(self.a)

    def a_at(self, n: int) -> float:
        return self.a[n % len(self.a)]

    def b_at(self, n: int) -> float:
        return self.b[n % len(self.b)]

    @property
    def a_array(self) -> np.ndarray:
        return np.array(self.a, dtype=float)

    @property
    def b_array(self) -> np.ndarray:
        return np.array(self.b, dtype=float)

    @property
    def geometric_mean_a(self) -> float:
        """``(a_1 ... a_p)^(1/p)``, computed through logs to avoid overflow."""
        return math.exp(math.fsum(math.log(x) for x in self.a) / self.period)

    @property
    def is_normalized(self) -> bool:
        scale = max(abs(x) for x in self.b)
        return abs(math.fsum(self.b)) <= 1e-14 * self.period * scale

    @property
    def b_mean(self) -> float:
        return math.fsum(self.b) / self.period


@dataclass(frozen=True)
class VariationReport:
    omega_a: float
    omega_b: float
    geo_mean_a: float
    mean_a: float


def _validate(a, b):
    if len(a) == 0 or len(b) == 0:
        raise InvalidInputError("a and b must be nonempty")
    if len(a) != len(b):
        raise InvalidInputError(
            f"length mismatch: len(a)={len(a)} but len(b)={len(b)}")
    for name, seq in (("a", a), ("b", b)):
        for k, x in enumerate(seq):
            if not isinstance(x, float):
                raise InvalidInputError(f"{name}[{k}] is not a float: {x!r}")
            if not math.isfinite(x):
                raise InvalidInputError(f"{name}[{k}] is not finite: {x!r}")
    for k, x in enumerate(a):
        if x <= 0.0:
            raise InvalidInputError(f"a[{k}] must be positive, got {x!r}")


def _as_floats(name: str, seq) -> tuple[float, ...]:
    out = []
    for k, x in enumerate(seq):
        if isinstance(x, bool):
            raise InvalidInputError(f"{name}[{k}] is not a number: {x!r}")
        try:
            out.append(float(x))
        except (TypeError, ValueError):
            raise InvalidInputError(f"{name}[{k}] is not a number: {x!r}") from None
    return tuple(out)


def new_periodic_jacobi(a: Sequence[float], b: Sequence[float]) -> PeriodicJacobi:
    """Validate one period of entries and return the matrix value.

    >>> new_periodic_jacobi([1, 1], [1, -1]).period
    2
    """
    return PeriodicJacobi(_as_floats("a", a), _as_floats("b", b))


def constant_matrix(a0: float, b0: float, p: int = 1) -> PeriodicJacobi:
    if int(p) != p or p < 1:
        raise InvalidInputError(f"period must be a positive integer, got {p!r}")
    return new_periodic_jacobi([a0] * int(p), [b0] * int(p))


def normalize(J: PeriodicJacobi) -> PeriodicJacobi:
    """Shift the diagonal so that it sums to zero over one period.

    A matrix that already passes :attr:`PeriodicJacobi.is_normalized` is
    returned unchanged, which makes the operation idempotent. Otherwise the
    compensated mean is subtracted until the test passes (one pass almost
    always suffices).
    """
    out = J
    for _ in range(16):
        if out.is_normalized:
            return out
        mean = math.fsum(out.b) / out.period
        out = PeriodicJacobi(J.a, tuple(x - mean for x in out.b))
    return out


def variation(J: PeriodicJacobi) -> VariationReport:
    return VariationReport(
        omega_a=max(J.a) - min(J.a),
        omega_b=max(J.b) - min(J.b),
        geo_mean_a=J.geometric_mean_a,
        mean_a=math.fsum(J.a) / J.period,
    )


def shift_origin(J: PeriodicJacobi, m: int) -> PeriodicJacobi:
    """Rotate the period so that position ``m`` becomes position 0."""
    k = m % J.period
    return PeriodicJacobi(J.a[k:] + J.a[:k], J.b[k:] + J.b[:k])


def scaled(J: PeriodicJacobi, t: float) -> PeriodicJacobi:
    """Multiply every entry by ``t > 0`` (the spectrum scales by ``t``)."""
    if not t > 0:
        raise InvalidInputError(f"scale must be positive, got {t!r}")
    return PeriodicJacobi(tuple(t * x for x in J.a), tuple(t * x for x in J.b))
