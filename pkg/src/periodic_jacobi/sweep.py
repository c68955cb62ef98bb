"""Seeded random sweeps over periodic Jacobi matrices.

Random numbers come from SplitMix64 so that a sweep is reproducible on any
platform. Sample ``i`` of a sweep with seed ``s`` draws from its own stream,
seeded with the ``(i+1)``-th SplitMix64 output of ``s``; samples can therefore
be evaluated in any order (or in parallel) without changing the result.

Within a sample the draws are, in order: the period (``p_min +
floor(u (p_max - p_min + 1))``), then ``a_1..a_p``, then ``b_1..b_p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import DEFAULT_REL_TOL, full_verification
from .core_model import PeriodicJacobi, new_periodic_jacobi, variation
from .errors import InvalidInputError

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

CSV_HEADER = ("seed_index", "p", "omega_a", "omega_b", "max_gap", "ratio_b_upper",
              "ratio_a_upper", "ratio_lower", "M", "all_pass")


class SplitMix64:
    """Steele, Lea and Flood's 64-bit generator."""

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform on ``[lo, hi)`` with 53 random bits."""
        return lo + (hi - lo) * ((self.next_u64() >> 11) * 2.0 ** -53)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + min(int(self.uniform() * (hi - lo + 1)), hi - lo)


@dataclass(frozen=True)
class SweepConfig:
    seed: int
    count: int
    p_min: int = 2
    p_max: int = 12
    a_lo: float = 0.5
    a_hi: float = 2.0
    b_lo: float = -1.0
    b_hi: float = 1.0
    epsilon: float | None = None

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise InvalidInputError("seed must be an unsigned 64-bit integer")
        for name in ("count", "p_min", "p_max"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InvalidInputError(f"{name} must be an integer")
        if self.count < 1:
            raise InvalidInputError("count must be positive")
        if not 1 <= self.p_min <= self.p_max:
            raise InvalidInputError("need 1 <= p_min <= p_max")
        for name in ("a_lo", "a_hi", "b_lo", "b_hi"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidInputError(f"{name} must be a finite number")
        if not 0 < self.a_lo <= self.a_hi:
            raise InvalidInputError("need 0 < a_lo <= a_hi")
        if not self.b_lo <= self.b_hi:
            raise InvalidInputError("need b_lo <= b_hi")
        if self.epsilon is not None:
            e = self.epsilon
            if isinstance(e, bool) or not isinstance(e, (int, float)) or not 0 <= e < 2:
                raise InvalidInputError("epsilon must be a number in [0, 2)")

    @classmethod
    def from_dict(cls, d: dict) -> SweepConfig:
        if not isinstance(d, dict):
            raise InvalidInputError("sweep config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise InvalidInputError(f"unknown sweep config field(s): {', '.join(sorted(extra))}")
        for name in ("seed", "count"):
            if name not in d:
                raise InvalidInputError(f"sweep config needs field '{name}'")
        return cls(**d)


def sample_stream(seed: int, index: int) -> SplitMix64:
    root = SplitMix64((seed + index * GOLDEN) & MASK64)
    return SplitMix64(root.next_u64())


def sample_matrix(cfg: SweepConfig, index: int) -> PeriodicJacobi:
    """Sample ``index`` of the sweep.

    With ``epsilon`` set the entries are ``1 + e u`` and ``e u`` with ``u``
    uniform in ``[-1/2, 1/2)``, a perturbation of the constant matrix
    ``a = 1, b = 0`` whose variations are at most ``epsilon``.
    """
    rng = sample_stream(cfg.seed, index)
    p = rng.integer(cfg.p_min, cfg.p_max)
    if cfg.epsilon is not None:
        h = 0.5 * cfg.epsilon
        a = [1.0 + rng.uniform(-h, h) for _ in range(p)]
        b = [rng.uniform(-h, h) for _ in range(p)]
    else:
        a = [rng.uniform(cfg.a_lo, cfg.a_hi) for _ in range(p)]
        b = [rng.uniform(cfg.b_lo, cfg.b_hi) for _ in range(p)]
    return new_periodic_jacobi(a, b)


@dataclass(frozen=True)
class SweepRow:
    seed_index: int
    p: int
    omega_a: float
    omega_b: float
    max_gap: float
    ratio_b_upper: float
    ratio_a_upper: float
    ratio_lower: float
    M: float
    all_pass: bool
    failures: tuple[str, ...] = ()

    def csv_fields(self) -> list[str]:
        nums = (self.omega_a, self.omega_b, self.max_gap, self.ratio_b_upper,
                self.ratio_a_upper, self.ratio_lower, self.M)
        return [str(self.seed_index), str(self.p), *(format(x, ".17g") for x in nums),
                "true" if self.all_pass else "false"]


def evaluate_sample(cfg: SweepConfig, index: int, rel_tol: float = DEFAULT_REL_TOL) -> SweepRow:
    J = sample_matrix(cfg, index)
    rep = full_verification(J, rel_tol)
    v = variation(J)
    return SweepRow(
        seed_index=index,
        p=J.period,
        omega_a=v.omega_a,
        omega_b=v.omega_b,
        max_gap=rep.max_gap,
        ratio_b_upper=rep["theorem_b_upper"].ratio,
        ratio_a_upper=rep["theorem_a_upper"].ratio,
        ratio_lower=rep["theorem_lower"].ratio,
        M=rep.M,
        all_pass=rep.passed,
        failures=tuple(c.name for c in rep.failures()),
    )


def _evaluate(args):
    return evaluate_sample(*args)


def run_sweep(cfg: SweepConfig, jobs: int = 1, rel_tol: float = DEFAULT_REL_TOL) -> list[SweepRow]:
    """All rows in sample-index order; ``jobs > 1`` uses a process pool."""
    work = [(cfg, i, rel_tol) for i in range(cfg.count)]
    if jobs <= 1:
        return [_evaluate(w) for w in work]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate, work, chunksize=max(1, cfg.count // (4 * jobs))))
