"""Arbitrary-precision complex values that remember their working precision.

All numerical kernels in this package compute with mpmath under an explicit
``workprec`` and hand results around as :class:`MPComplex`, a thin frozen
wrapper over a pair of ``mpf`` values plus the precision (in bits) they were
computed at.  mpmath's context precision is global, so the wrapper is what
keeps mixed-precision call chains honest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf, workprec

MIN_PRECISION = 64


def auto_precision(n: int) -> int:
    """Default working precision for degree-n work: max(256, 8n + 64).

    Cancellation when evaluating the scaled polynomial near its zero set
    grows like 2**Theta(n); 8 bits per degree leaves a wide margin.
    """
    return max(256, 8 * n + 64)


def as_mpc(x) -> mpc:
    """Coerce x (MPComplex, mpc, mpf, complex, Fraction, int, float) to mpc."""
    if isinstance(x, MPComplex):
        return x.to_mpc()
    if isinstance(x, (mpc, mpf)):
        return mpc(x)
    if isinstance(x, Fraction):
        return mpc(mpmath.fraction(x.numerator, x.denominator))
    return mpc(x)


@dataclass(frozen=True)
class MPComplex:
    """A complex value carrying the precision (bits) it was computed at.

    ``re`` and ``im`` are mpmath ``mpf`` values; their mantissas are exact as
    stored, so the wrapper never loses bits on its own.  Arithmetic between
    wrappers is performed at the larger of the two operand precisions.
    """

    re: mpf
    im: mpf
    precision_bits: int

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION}")

    @classmethod
    def from_mpc(cls, z, precision_bits: int) -> "MPComplex":
        z = mpc(z)
        return cls(z.real, z.imag, precision_bits)

    @classmethod
    def from_any(cls, x, precision_bits: int) -> "MPComplex":
        if isinstance(x, MPComplex):
            return x
        with workprec(precision_bits):
            return cls.from_mpc(as_mpc(x), precision_bits)

    def to_mpc(self) -> mpc:
        return mpc(self.re, self.im)

    # -- conversions ------------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "MPComplex":
        return MPComplex(self.re, -self.im, self.precision_bits)

    def __abs__(self) -> mpf:
        with workprec(self.precision_bits):
            return abs(self.to_mpc())

    # -- arithmetic (at max operand precision) -----------------------------

    def _binop(self, other, op):
        if isinstance(other, MPComplex):
            prec = max(self.precision_bits, other.precision_bits)
            rhs = other.to_mpc()
        else:
            prec = self.precision_bits
            rhs = as_mpc(other)
        with workprec(prec):
            return MPComplex.from_mpc(op(self.to_mpc(), rhs), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return MPComplex(-self.re, -self.im, self.precision_bits)

    def __repr__(self):
        with workprec(max(self.precision_bits, MIN_PRECISION)):
            return (f"MPComplex({mp.nstr(self.re, 17)}, {mp.nstr(self.im, 17)}, "
                    f"bits={self.precision_bits})")


def round_to(value, precision_bits: int):
    """Round an mpf/mpc to precision_bits (one correctly-rounded step)."""
    with workprec(precision_bits):
        return +value
