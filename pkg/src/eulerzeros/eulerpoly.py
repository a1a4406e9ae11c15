"""Exact Euler polynomials and multiprecision evaluation of E_n(nx)/n!.

Coefficients are exact ``Fraction`` values produced by the Appell recurrence

    E_0 = 1,    E_n(x) = n * integral_0^x E_{n-1}(t) dt + E_n(0),

with the constant fixed by E_n(1) = -E_n(0) (n >= 1), which follows from the
generating function.  This costs O(n^2) rational operations for the whole
family E_0..E_n; the equivalent binomial-sum recurrence
E_n = x^n - (1/2) sum_k C(n,k) E_k is asserted as a test invariant instead of
being used as the generator (it costs O(n^3)).

All floating evaluation goes through one multiprecision Horner pass over the
scaled coefficients d_k = c_k n^k / n!, which are formed exactly and rounded
once to the working precision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpc, mpf, workprec
import mpmath

from .errors import PrecisionInsufficient
from .precision import MPComplex, as_mpc, auto_precision

_lock = threading.Lock()
_coeff_cache: list[tuple[Fraction, ...]] = [(Fraction(1),)]
_scaled_exact_cache: dict[int, tuple[Fraction, ...]] = {}
_scaled_mpf_cache: dict[tuple[int, int], tuple] = {}


@dataclass(frozen=True)
class ExactPolynomial:
    """E_n as an exact coefficient sequence; coeffs[k] multiplies x**k."""

    n: int
    coeffs: tuple[Fraction, ...]

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs],
        }


def _extend_cache(n: int) -> None:
    # single-writer growth; concurrent readers only ever see finished rows
    with _lock:
        while len(_coeff_cache) <= n:
            m = len(_coeff_cache)
            prev = _coeff_cache[m - 1]
            body = [Fraction(0)] + [c * m / (j + 1) for j, c in enumerate(prev)]
            body[0] = -sum(body) / 2
            _coeff_cache.append(tuple(body))


def euler_polynomial(n: int) -> ExactPolynomial:
    """Exact coefficients of the degree-n Euler polynomial."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if len(_coeff_cache) <= n:
        _extend_cache(n)
    return ExactPolynomial(n, _coeff_cache[n])


def eval_exact(p: ExactPolynomial, q: Fraction) -> Fraction:
    """Exact Horner evaluation at a rational point."""
    q = Fraction(q)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * q + c
    return acc


def euler_number(n: int) -> int:
    """2**n * E_n(1/2), provably an integer (0 for odd n)."""
    val = eval_exact(euler_polynomial(n), Fraction(1, 2)) * 2 ** n
    if val.denominator != 1:
        raise AssertionError(f"euler_number({n}) not integral: {val}")
    return int(val)


def scaled_coeffs_exact(n: int) -> tuple[Fraction, ...]:
    """Exact coefficients d_k = c_k n^k / n! of P_n(x) = E_n(nx)/n!."""
    cached = _scaled_exact_cache.get(n)
    if cached is not None:
        return cached
    coeffs = euler_polynomial(n).coeffs
    fact = math.factorial(n)
    d = tuple(c * Fraction(n) ** k / fact for k, c in enumerate(coeffs))
    with _lock:
        _scaled_exact_cache[n] = d
    return d


def scaled_coeffs_mpf(n: int, p: int) -> tuple:
    """d_k rounded once to p bits, ordered highest-degree first for Horner."""
    key = (n, p)
    cached = _scaled_mpf_cache.get(key)
    if cached is not None:
        return cached
    exact = scaled_coeffs_exact(n)
    with workprec(p):
        rounded = tuple(
            mpmath.fraction(c.numerator, c.denominator) for c in reversed(exact)
        )
    with _lock:
        _scaled_mpf_cache[key] = rounded
    return rounded


def _horner(coeffs, x):
    acc = mpc(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def eval_scaled(n: int, x, p: int | None = None, *, check: bool = True) -> MPComplex:
    """E_n(nx)/n! by multiprecision Horner at p bits (default auto_precision).

    The relative rounding error is <= 2**(-p/2) whenever the result is not
    itself below the cancellation floor S * 2**(-p/2), where S is the Horner
    magnitude sum.  With ``check=True`` a result that is nonzero yet smaller
    than the running error bound while the bound also exceeds that floor
    raises :class:`PrecisionInsufficient`; values at or near true zeros of
    P_n (which are legitimately "zero up to rounding") are returned as-is.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if p is None:
        p = auto_precision(n)
    if p < 64:
        raise ValueError("p must be >= 64")
    coeffs = scaled_coeffs_mpf(n, p)
    with workprec(p):
        z = as_mpc(x)
        value = _horner(coeffs, z)
        if check:
            with workprec(64):
                r = abs(z)
                s = mpf(0)
                for c in coeffs:
                    s = s * r + abs(c)
                bound = 2 * (n + 1) * mpf(2) ** (-p) * s
                floor = s * mpf(2) ** (-p // 2)
            if bound > floor and 0 < abs(value) < bound:
                raise PrecisionInsufficient(
                    f"eval_scaled(n={n}, p={p}): error bound {mp.nstr(bound, 5)} "
                    f"exceeds |result| {mp.nstr(abs(value), 5)}"
                )
        return MPComplex.from_mpc(value, p)
