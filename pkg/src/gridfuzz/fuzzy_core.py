"""Trapezoidal fuzzy numbers, their arithmetic, and mean-of-maximum defuzzification."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from . import kernels

DEFAULT_RESOLUTION = 1001
MOM_EPS = 1e-6

DivMode = Literal["paper", "interval_safe"]


class FuzzyError(ValueError):
    """Base class for fuzzy-number errors."""


class InvalidTrapezoid(FuzzyError):
    pass


class NonMonotoneResult(FuzzyError):
    """An arithmetic formula produced a quadruple with a_i > a_{i+1}."""

    def __init__(self, op: str, quad: tuple[float, ...]):
        self.op = op
        self.quad = quad
        super().__init__(f"{op} produced non-monotone quadruple {quad}")


class NegativeOperand(FuzzyError):
    pass


class DivisorNotPositive(FuzzyError):
    pass


class EmptySet(FuzzyError):
    """Every grade of a sampled set is zero (no rule fired)."""


def _is_monotone(q) -> bool:
    return q[0] <= q[1] <= q[2] <= q[3]


@dataclass(frozen=True)
class FuzzyTrapezoid:
    """Quadruple (a1, a2, a3, a4): left foot, left peak, right peak, right foot."""

    a1: float
    a2: float
    a3: float
    a4: float

    def __post_init__(self):
        vals = (self.a1, self.a2, self.a3, self.a4)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidTrapezoid(f"non-finite endpoint in {vals}")
        if not _is_monotone(vals):
            raise InvalidTrapezoid(f"endpoints must satisfy a1<=a2<=a3<=a4, got {vals}")
        for name, v in zip(("a1", "a2", "a3", "a4"), vals):
            object.__setattr__(self, name, float(v))

    @classmethod
    def crisp(cls, value: float) -> FuzzyTrapezoid:
        return cls(value, value, value, value)

    @classmethod
    def of(cls, quad) -> FuzzyTrapezoid:
        a1, a2, a3, a4 = quad
        return cls(a1, a2, a3, a4)

    def __iter__(self) -> Iterator[float]:
        return iter((self.a1, self.a2, self.a3, self.a4))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4)

    @property
    def is_crisp(self) -> bool:
        return self.a1 == self.a4

    @property
    def is_triangular(self) -> bool:
        return self.a2 == self.a3

    def __repr__(self) -> str:
        return f"FuzzyTrapezoid({self.a1!r}, {self.a2!r}, {self.a3!r}, {self.a4!r})"


@dataclass(frozen=True)
class MultiplicationTrace:
    """Intermediate values of the T1/T2 product rule.

    ``k`` and ``l`` are zero-based positions into ``t1``/``t2``.
    """

    t1: tuple[float, float, float, float]
    t2: tuple[float, float, float, float]
    k: int
    l: int
    e: tuple[float, float, float, float]


@dataclass(frozen=True, eq=False)
class SampledFuzzySet:
    """Membership grades sampled uniformly on the closed interval [lo, hi]."""

    lo: float
    hi: float
    grades: np.ndarray

    def __post_init__(self):
        g = np.ascontiguousarray(self.grades, dtype=np.float64)
        if g.ndim != 1 or g.shape[0] < 2:
            raise ValueError("a sampled set needs at least 2 samples")
        if not self.lo < self.hi:
            raise ValueError(f"empty domain [{self.lo}, {self.hi}]")
        if g.min() < 0.0 or g.max() > 1.0:
            raise ValueError("grades must lie in [0, 1]")
        g.flags.writeable = False
        object.__setattr__(self, "grades", g)

    @classmethod
    def from_trapezoid(cls, t: FuzzyTrapezoid, lo: float | None = None,
                       hi: float | None = None,
                       resolution: int = DEFAULT_RESOLUTION) -> SampledFuzzySet:
        lo = t.a1 if lo is None else lo
        hi = t.a4 if hi is None else hi
        return cls(lo, hi, kernels.sample_trapezoid(t.a1, t.a2, t.a3, t.a4, lo, hi, resolution))

    @property
    def resolution(self) -> int:
        return self.grades.shape[0]

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.resolution - 1)

    @property
    def xs(self) -> np.ndarray:
        return kernels.grid(self.lo, self.hi, self.resolution)

    def clip(self, level: float) -> SampledFuzzySet:
        return SampledFuzzySet(self.lo, self.hi, np.minimum(self.grades, level))

    def union(self, other: SampledFuzzySet) -> SampledFuzzySet:
        if (self.lo, self.hi, self.resolution) != (other.lo, other.hi, other.resolution):
            raise ValueError("sampled sets live on different grids")
        return SampledFuzzySet(self.lo, self.hi, np.maximum(self.grades, other.grades))

    def identical(self, other: SampledFuzzySet) -> bool:
        """Bitwise equality of domain and grades."""
        return (self.lo, self.hi) == (other.lo, other.hi) and np.array_equal(self.grades, other.grades)


def membership_at(t: FuzzyTrapezoid, x: float) -> float:
    if x < t.a1 or x > t.a4:
        return 0.0
    if x < t.a2:
        return (x - t.a1) / (t.a2 - t.a1)
    if x <= t.a3:
        return 1.0
    return (t.a4 - x) / (t.a4 - t.a3)


def _checked(op: str, quad: tuple[float, float, float, float]) -> FuzzyTrapezoid:
    if not _is_monotone(quad):
        raise NonMonotoneResult(op, quad)
    return FuzzyTrapezoid(*quad)


def fuzz_add(a: FuzzyTrapezoid, b: FuzzyTrapezoid) -> FuzzyTrapezoid:
    return FuzzyTrapezoid(a.a1 + b.a1, a.a2 + b.a2, a.a3 + b.a3, a.a4 + b.a4)


def fuzz_sub(a: FuzzyTrapezoid, b: FuzzyTrapezoid) -> FuzzyTrapezoid:
    """Componentwise difference; raises NonMonotoneResult instead of reordering."""
    return _checked("sub", (a.a1 - b.a1, a.a2 - b.a2, a.a3 - b.a3, a.a4 - b.a4))


def fuzz_mul_traced(a: FuzzyTrapezoid, b: FuzzyTrapezoid) -> tuple[FuzzyTrapezoid, MultiplicationTrace]:
    """Product by the T1/T2 index-transfer rule, returned with its trace.

    Operands must be nonnegative. Ties pick the smallest index for the
    minimum and the largest index for the maximum.
    """
    if a.a1 < 0.0 or b.a1 < 0.0:
        raise NegativeOperand(f"multiplication needs nonnegative operands, got {a} and {b}")
    t1 = (a.a1 * b.a1, a.a1 * b.a2, a.a2 * b.a1, a.a2 * b.a2)
    t2 = (a.a3 * b.a3, a.a3 * b.a4, a.a4 * b.a3, a.a4 * b.a4)
    lo, hi = min(t1), max(t1)
    k = t1.index(lo)
    l = 3 - t1[::-1].index(hi)
    e = (t1[k], t1[l], t2[k], t2[l])
    return _checked("mul", e), MultiplicationTrace(t1, t2, k, l, e)


def fuzz_mul(a: FuzzyTrapezoid, b: FuzzyTrapezoid) -> FuzzyTrapezoid:
    return fuzz_mul_traced(a, b)[0]


def fuzz_div(a: FuzzyTrapezoid, b: FuzzyTrapezoid, mode: DivMode = "paper") -> FuzzyTrapezoid:
    """Quotient of fuzzy numbers.

    ``paper`` applies (a1/b2, a2/b1, a3/b4, a4/b3) and raises
    NonMonotoneResult when that ordering breaks; ``interval_safe`` divides
    the alpha-cuts, (a1/b4, a2/b3, a3/b2, a4/b1).
    """
    if b.a1 <= 0.0:
        raise DivisorNotPositive(f"divisor endpoints must be > 0, got {b}")
    if a.a1 < 0.0:
        raise NegativeOperand(f"dividend endpoints must be >= 0, got {a}")
    if mode == "paper":
        return _checked("div", (a.a1 / b.a2, a.a2 / b.a1, a.a3 / b.a4, a.a4 / b.a3))
    if mode == "interval_safe":
        return FuzzyTrapezoid(a.a1 / b.a4, a.a2 / b.a3, a.a3 / b.a2, a.a4 / b.a1)
    raise ValueError(f"unknown division mode {mode!r}")


def fuzz_scale(a: FuzzyTrapezoid, c: float) -> FuzzyTrapezoid:
    """Multiply by a nonnegative crisp scalar (same as fuzz_mul with a crisp operand)."""
    return fuzz_mul(a, FuzzyTrapezoid.crisp(c))


def fuzz_sum(items, start: FuzzyTrapezoid | None = None) -> FuzzyTrapezoid:
    total = FuzzyTrapezoid.crisp(0.0) if start is None else start
    for t in items:
        total = fuzz_add(total, t)
    return total


def defuzz_mom(s: SampledFuzzySet, eps: float = MOM_EPS) -> float:
    value = kernels.mom(s.grades, s.lo, s.hi, eps)
    if math.isnan(value):
        raise EmptySet("cannot defuzzify a set whose grades are all zero")
    return value


def defuzz_trapezoid(t: FuzzyTrapezoid, resolution: int = DEFAULT_RESOLUTION,
                     eps: float = MOM_EPS) -> float:
    """Mean of maximum of a trapezoid sampled over its own support."""
    if t.is_crisp:
        return t.a1
    return defuzz_mom(SampledFuzzySet.from_trapezoid(t, resolution=resolution), eps)


def to_bounding_trapezoid(s: SampledFuzzySet, eps: float = MOM_EPS) -> FuzzyTrapezoid:
    """Trapezoid spanning the support and the maximizing plateau of ``s``.

    Feet are taken at the last zero-grade sample outside the support, so
    a trapezoid whose feet fall on grid points round-trips exactly.
    """
    quad = kernels.bounding(s.grades, s.lo, s.hi, eps)
    if math.isnan(quad[0]):
        raise EmptySet("no support: every grade is zero")
    return FuzzyTrapezoid(*quad)
