"""Positive reals stored by their natural logarithm.

Values such as 1e-524 are far below the smallest double, so everything
that may leave native range is carried as ``ln(value)``.  The decimal
rendering uses a mantissa in [0.1, 1), e.g. ``0.5014504964e-524``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LN10 = math.log(10.0)


@dataclass(frozen=True)
class ScaledReal:
    """A strictly positive number ``exp(ln_value)``, or the ZERO element.

    ZERO is tagged with ``is_zero`` rather than stored as ``-inf``.
    """

    ln_value: float = 0.0
    is_zero: bool = False

    def __post_init__(self):
        if not self.is_zero and not math.isfinite(self.ln_value):
            raise ValueError(f"ln_value must be finite, got {self.ln_value!r}")

    @classmethod
    def from_ln(cls, ln_value: float) -> ScaledReal:
        if ln_value == -math.inf:
            return ZERO
        return cls(float(ln_value))

    @classmethod
    def from_float(cls, value: float) -> ScaledReal:
        if value == 0.0:
            return ZERO
        if not value > 0.0 or not math.isfinite(value):
            raise ValueError(f"ScaledReal needs a finite value >= 0, got {value!r}")
        return cls(math.log(value))

    def __mul__(self, other: ScaledReal) -> ScaledReal:
        return mul(self, other)

    def __truediv__(self, other: ScaledReal) -> ScaledReal:
        if other.is_zero:
            raise ZeroDivisionError("division by ScaledReal ZERO")
        if self.is_zero:
            return ZERO
        return ScaledReal(self.ln_value - other.ln_value)

    def __add__(self, other: ScaledReal) -> ScaledReal:
        return add(self, other)

    def __sub__(self, other: ScaledReal) -> ScaledReal:
        return sub(self, other)

    def __pow__(self, p: float) -> ScaledReal:
        if self.is_zero:
            if p > 0:
                return ZERO
            raise ZeroDivisionError("ZERO raised to a non-positive power")
        return ScaledReal(self.ln_value * p)

    def to_float(self) -> float:
        """Native value; underflows to 0.0 / overflows to inf outside range."""
        if self.is_zero:
            return 0.0
        try:
            return math.exp(self.ln_value)
        except OverflowError:
            return math.inf

    def mantissa_exponent(self) -> tuple[float, int]:
        """Return ``(m, k)`` with ``0.1 <= m < 1`` and value ``m * 10**k``."""
        if self.is_zero:
            return 0.0, 0
        lg = self.ln_value / LN10
        k = math.floor(lg) + 1
        m = 10.0 ** (lg - k)
        # rounding in lg can push m a hair outside [0.1, 1)
        if m >= 1.0:
            m, k = m / 10.0, k + 1
        if m < 0.1:
            if m > 0.1 * (1.0 - 1e-12):
                m = 0.1
            else:
                m, k = m * 10.0, k - 1
        return m, k

    def format(self, digits: int = 10) -> str:
        m, k = self.mantissa_exponent()
        if self.is_zero:
            return "0"
        m = round(m, digits)
        if m >= 1.0:
            m, k = 0.1, k + 1
        return f"{m:.{digits}f}e{k:+d}"

    def __str__(self):
        return self.format()


ZERO = ScaledReal(0.0, is_zero=True)
ONE = ScaledReal(0.0)


def from_ln(ln_value: float) -> ScaledReal:
    return ScaledReal.from_ln(ln_value)


def mul(a: ScaledReal, b: ScaledReal) -> ScaledReal:
    if a.is_zero or b.is_zero:
        return ZERO
    return ScaledReal(a.ln_value + b.ln_value)


def add(a: ScaledReal, b: ScaledReal) -> ScaledReal:
    """Log-sum-exp; the larger operand is factored out."""
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    hi, lo = (a, b) if a.ln_value >= b.ln_value else (b, a)
    return ScaledReal(hi.ln_value + math.log1p(math.exp(lo.ln_value - hi.ln_value)))


def sub(a: ScaledReal, b: ScaledReal) -> ScaledReal:
    """``a - b`` for ``a >= b``; equal operands give ZERO."""
    if b.is_zero:
        return a
    if a.is_zero or b.ln_value > a.ln_value:
        raise ValueError("ScaledReal subtraction would go negative")
    d = b.ln_value - a.ln_value
    if d == 0.0:
        return ZERO
    return ScaledReal(a.ln_value + math.log(-math.expm1(d)))


def rel_diff(a: ScaledReal, b: ScaledReal) -> float:
    """``|a/b - 1|`` computed from the log difference."""
    if b.is_zero:
        raise ValueError("rel_diff: reference value is ZERO")
    if a.is_zero:
        return 1.0
    return abs(math.expm1(a.ln_value - b.ln_value))


def from_decimal(mantissa: float, exponent10: int) -> ScaledReal:
    """Build ``mantissa * 10**exponent10`` without materialising it."""
    return ScaledReal(math.log(mantissa) + exponent10 * LN10)
