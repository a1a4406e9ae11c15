"""Exponential partial sums S_n(z) and their closed-form approximations.

Three approximations of S_{n-1}(nz)/e^{nz} are provided: one valid outside
the unit circle, one in the half plane Re z < 1, and a uniform real-axis
formula built on the unnormalized complementary error integral
Erfc(t) = integral_t^inf exp(-s^2) ds (sqrt(pi)/2 times the conventional
erfc; the conversion factor lives only in this module).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf, workprec

from .errors import DegenerateFit, DomainViolation
from .precision import MPComplex, as_mpc, auto_precision


@dataclass(frozen=True)
class SzegoConfig:
    """Contour exponent alpha in (1/3, 1/2); reporting metadata only.

    alpha labels the expected O(n^(1-3*alpha)) error order in reports; no
    implemented formula depends on it.
    """

    alpha: float = 0.4

    def __post_init__(self):
        if not (1 / 3 < self.alpha < 1 / 2):
            raise ValueError("alpha must lie in (1/3, 1/2)")

    def expected_order(self) -> float:
        return 1.0 - 3.0 * self.alpha


def _guard(n: int) -> int:
    return math.ceil(math.log2(n + 2))


def partial_sum(n: int, z, p: int = 256) -> MPComplex:
    """S_n(z) = sum_{j<=n} z^j/j! by forward recurrence, p + ceil(log2(n+1)) guard bits."""
    if n < 0:
        raise ValueError("n must be >= 0")
    with workprec(p + _guard(n)):
        zz = as_mpc(z)
        term = mpc(1)
        acc = mpc(1)
        for j in range(1, n + 1):
            term = term * zz / j
            acc += term
    with workprec(p):
        return MPComplex.from_mpc(+acc, p)


def ratio_exact(n: int, z, p: int = 256) -> MPComplex:
    """S_{n-1}(nz) * e^{-nz}, the quantity every approximation below targets."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with workprec(p + _guard(n) + 8):
        zz = as_mpc(z)
        s = partial_sum(n - 1, n * zz, p + _guard(n) + 8).to_mpc()
        value = s * mpmath.exp(-n * zz)
    with workprec(p):
        return MPComplex.from_mpc(+value, p)


def _power_term(n: int, z):
    # (z e^{1-z})^n via exp(n(log z + 1 - z)), principal branch
    return mpmath.exp(n * (mpmath.log(z) + 1 - z))


def prop1_approx(n: int, z, p: int = 256) -> MPComplex:
    """(ze^{1-z})^n / (sqrt(2 pi n) (z - 1)); valid for |z| > 1."""
    with workprec(p):
        zz = as_mpc(z)
        if abs(zz) <= 1:
            raise DomainViolation(f"prop1_approx requires |z| > 1, got |z| = {abs(zz)}")
        value = _power_term(n, zz) / (mpmath.sqrt(2 * mpmath.pi * n) * (zz - 1))
        return MPComplex.from_mpc(value, p)


def prop2_approx(n: int, z, p: int = 256) -> MPComplex:
    """1 - (ze^{1-z})^n / (sqrt(2 pi n) (1 - z)); valid for Re z < 1."""
    with workprec(p):
        zz = as_mpc(z)
        if zz.real >= 1:
            raise DomainViolation(f"prop2_approx requires Re z < 1, got Re z = {zz.real}")
        value = 1 - _power_term(n, zz) / (mpmath.sqrt(2 * mpmath.pi * n) * (1 - zz))
        return MPComplex.from_mpc(value, p)


def erfc_int(x, p: int = 64):
    """Erfc(x) = integral_x^inf e^{-s^2} ds = (sqrt(pi)/2) * erfc(x).  Returns mpf."""
    with workprec(max(p, 64) + 16):
        value = mpmath.sqrt(mpmath.pi) / 2 * mpmath.erfc(mpf(x))
    with workprec(max(p, 64)):
        return +value


# Taylor coefficients of xi(t)/(t-1) = sqrt(1/2) * (1 + sum a_k u^k), u = t-1;
# derived by expanding sqrt(u^(-2) (t - 1 - ln t)) about u = 0.
_XI_RATIO_SERIES = (
    mpf(1),
    -mpf(1) / 3,
    mpf(7) / 36,
    -mpf(73) / 540,
    mpf(1331) / 12960,
)


def prop3_approx(n: int, t, p: int = 128):
    """Uniform approximation of S_n(nt)/e^{nt} for real t >= 0.  Returns mpf.

    delta(t) + sqrt(2/pi) * (xi(t) t / (t - 1)) * Erfc(sqrt(n) xi(t)) with
    xi(t) = |t - 1 - ln t|^(1/2).  Near t = 1 the 0/0 in xi/(t-1) is removed
    by a signed series expansion; at t = 0 the limit value is 1.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    with workprec(p):
        tt = mpf(t)
        if tt < 0:
            raise DomainViolation("prop3_approx requires t >= 0")
        if tt == 0:
            return mpf(1)
        delta = mpf(1) if tt < 1 else mpf(0)
        u = tt - 1
        if abs(u) < mpf(1) / 1000:
            mag = mpmath.sqrt(mpf(1) / 2) * sum(
                a * u ** k for k, a in enumerate(_XI_RATIO_SERIES)
            )
            # xi/(t-1) = sign(u) * sqrt((t-1-ln t)/u^2); at u = 0 take the
            # right limit +sqrt(1/2) so the formula lands on the value 1/2
            ratio = mag if u >= 0 else -mag
            xi = abs(u) * mag
        else:
            xi = mpmath.sqrt(abs(tt - 1 - mpmath.log(tt)))
            ratio = xi / u
        value = delta + mpmath.sqrt(mpf(2) / mpmath.pi) * ratio * tt * erfc_int(
            mpmath.sqrt(n) * xi, p
        )
        return +value


def _exact_for(which: str, n: int, point, p: int):
    if which == "prop3":
        t = mpf(point)
        with workprec(p):
            s = partial_sum(n, n * t, p).to_mpc()
            return +(s * mpmath.exp(-n * t))
    return ratio_exact(n, point, p).to_mpc()


def _approx_for(which: str, n: int, point, p: int):
    if which == "prop1":
        return prop1_approx(n, point, p).to_mpc()
    if which == "prop2":
        return prop2_approx(n, point, p).to_mpc()
    if which == "prop3":
        return mpc(prop3_approx(n, point, p))
    raise ValueError(f"unknown approximation {which!r}")


def approximation_error(which: str, n: int, point, p: int | None = None,
                        relative: bool = False):
    """|approx - exact| (or relative) against the partial-sum reference."""
    if p is None:
        p = auto_precision(n)
    with workprec(p):
        exact = _exact_for(which, n, point, p)
        approx = _approx_for(which, n, point, p)
        err = abs(approx - exact)
        if relative:
            err = err / abs(exact)
        return +err


def error_slope(which: str, point, n_list, p=None, relative: bool = True) -> float:
    """Least-squares slope of log(error) vs log(n) over n_list.

    Prop 3's reference is S_n(nt)/e^{nt}; the other two use ratio_exact.
    """
    n_list = list(n_list)
    if len(n_list) < 3 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing with length >= 3")
    logs = []
    for n in n_list:
        err = approximation_error(which, n, point, p if p else None, relative=relative)
        if err == 0 or not mpmath.isfinite(err):
            raise DegenerateFit(f"error at n={n} underflowed working precision")
        logs.append((math.log(n), float(mpmath.log(err))))
    xs = [a for a, _ in logs]
    ys = [b for _, b in logs]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    num = sum((a - xbar) * (b - ybar) for a, b in zip(xs, ys))
    den = sum((a - xbar) ** 2 for a in xs)
    return num / den


def report_rows(which: str, point, n_list, p=None):
    """CSV-facing rows (n, which, point, exact, approx, abs_err, rel_err)."""
    rows = []
    for n in n_list:
        pn = p if p else auto_precision(n)
        with workprec(pn):
            exact = _exact_for(which, n, point, pn)
            approx = _approx_for(which, n, point, pn)
            abs_err = abs(approx - exact)
            rel_err = abs_err / abs(exact) if exact != 0 else mpf("inf")
            rows.append((n, which, point, exact, approx, abs_err, rel_err))
    return rows
