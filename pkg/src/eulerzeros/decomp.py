"""The two-polynomial decomposition E_n(nx)/n! = M + K and its asymptotics.

K collects the contributions of the 2(mu+1) poles of 1/(xi (e^xi + 1))
nearest the origin, expressed through exponential partial sums; M is the
contour integral of (e^{x xi}/xi)^n against the regularized kernel F_mu,
which is analytic on the annulus 0 < |xi| < (2 mu + 3) pi.  The module also
carries the curve function g(x) = 1/(pi i x e^{1 - pi i x}) whose modulus-1
level set is the arc component of the limit set, and the normalization
h_n(x) = E_n(nx) sqrt(n) / (n! (ex)^n).

Branch conventions: non-integer powers use exp(s Log w) with the principal
Log; integer powers of +-(2k+1) pi i use an exact magnitude times an
i-phase lookup so the phases of (pi i)^{n+1} never drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf, workprec

from .errors import DomainViolation, QuadratureNotConverged
from .precision import MPComplex, as_mpc, auto_precision
from .eulerpoly import eval_scaled
from .szego import partial_sum

# regularized F_mu: Taylor window around a cancelled pole
_POLE_RADIUS_NUM, _POLE_RADIUS_DEN = 1, 100   # pi/100
_TAYLOR_ORDER = 8


@dataclass(frozen=True)
class DecompConfig:
    """mu >= 0 and the contour node count (0 = auto: max(8n, 512))."""

    mu: int = 0
    quadrature_nodes: int = 0

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError("mu must be >= 0")
        if self.quadrature_nodes < 0:
            raise ValueError("quadrature_nodes must be >= 0 (0 = auto)")

    def nodes_for(self, n: int) -> int:
        auto = max(8 * n, 512)
        if self.quadrature_nodes == 0:
            return auto
        if self.quadrature_nodes < auto:
            raise ValueError(
                f"quadrature_nodes={self.quadrature_nodes} below required "
                f"max(8n, 512) = {auto} for degree n={n}"
            )
        return self.quadrature_nodes


_I_PHASE = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}


def _i_power(k: int) -> mpc:
    re, im = _I_PHASE[k % 4]
    return mpc(re, im)


def _f_mu_raw(mu: int, xi: mpc) -> mpc:
    value = 1 / (xi * (mpmath.exp(xi) + 1))
    for k in range(mu + 1):
        a = mpc(0, (2 * k + 1) * mpmath.pi)
        value += 1 / (a * (xi - a)) + 1 / ((-a) * (xi + a))
    return value


def _f_mu_regularized(mu: int, xi: mpc, k0: int, sign: int) -> mpc:
    """F_mu near the cancelled pole xi0 = sign*(2k0+1) pi i.

    Writes e^xi + 1 = -(w E(w)) with w = xi - xi0 and E(w) = sum w^m/(m+1)!,
    so that 1/(xi (e^xi+1)) + 1/(xi0 w) = G(w) / (xi0 xi E(w)) with
    G(w) = sum w^m (xi0/(m+2)! + 1/(m+1)!); truncation error of the order-8
    series is < 1e-20 at the window boundary |w| = pi/100.
    """
    xi0 = mpc(0, sign * (2 * k0 + 1) * mpmath.pi)
    w = xi - xi0
    e_series = mpc(0)
    g_series = mpc(0)
    wp = mpc(1)
    for m in range(_TAYLOR_ORDER + 1):
        e_series += wp / math.factorial(m + 1)
        g_series += wp * (xi0 / math.factorial(m + 2) + 1 / mpf(math.factorial(m + 1)))
        wp *= w
    value = g_series / (xi0 * xi * e_series)
    # remaining pole terms of the sum, evaluated directly
    for k in range(mu + 1):
        for s in (1, -1):
            if k == k0 and s == sign:
                continue
            a = mpc(0, s * (2 * k + 1) * mpmath.pi)
            value += 1 / (a * (xi - a))
    return value


def f_mu(mu: int, xi, p: int | None = None) -> MPComplex:
    """F_mu(xi) on the annulus 0 < |xi| < (2 mu + 3) pi."""
    if mu < 0:
        raise ValueError("mu must be >= 0")
    if p is None:
        p = xi.precision_bits if isinstance(xi, MPComplex) else 256
    with workprec(p + 16):
        z = as_mpc(xi)
        r = abs(z)
        if r == 0 or r >= (2 * mu + 3) * mpmath.pi:
            raise DomainViolation(
                f"f_mu requires 0 < |xi| < (2mu+3)pi; |xi| = {mp.nstr(r, 8)}"
            )
        return MPComplex.from_mpc(_f_mu_eval(mu, z), p)


def k_mu(n: int, mu: int, x, p: int | None = None) -> MPComplex:
    """K_{n,mu}(x): partial-sum contributions of the poles +-(2k+1) pi i, k <= mu."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if p is None:
        p = auto_precision(n)
    inner = p + 64
    with workprec(inner):
        z = as_mpc(x)
        phase = _i_power(n + 1)            # i^{n+1}
        neg = _i_power(2 * (n + 1))        # (-1)^{n+1}
        total = mpc(0)
        for k in range(mu + 1):
            m = 2 * k + 1
            w = z * (m * mpmath.pi) * mpc(0, 1)
            s_plus = partial_sum(n - 1, n * w, inner).to_mpc()
            s_minus = partial_sum(n - 1, -n * w, inner).to_mpc()
            mag = (m * mpmath.pi) ** (n + 1)
            total += s_plus / (mag * phase) + s_minus / (mag * phase * neg)
        value = 2 * total
    with workprec(p):
        return MPComplex.from_mpc(+value, p)


def m_contour(n: int, mu: int, x, cfg: DecompConfig | None = None,
              p: int | None = None) -> MPComplex:
    """M_{n,mu}(x) = (1/pi i) closed-integral_{|xi|=1} (e^{x xi}/xi)^n F_mu(xi) dxi.

    Trapezoidal rule on the circle, spectrally accurate for the analytic
    integrand.  The rule is evaluated at 2N nodes; the embedded N-node sum
    provides the convergence check (difference must stay below 2**(-p/4)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if cfg is None:
        cfg = DecompConfig(mu=mu)
    if p is None:
        p = x.precision_bits if isinstance(x, MPComplex) else auto_precision(n)
    nodes = cfg.nodes_for(n)
    with workprec(p + 64):
        z = as_mpc(x)
        n2 = 2 * nodes
        total_fine = mpc(0)
        total_coarse = mpc(0)
        for j in range(n2):
            # xi_j = e^{2 pi i j / n2}; phases are exact rational multiples of
            # pi, reduced mod 2 in integer arithmetic before cospi/sinpi
            ang = mpf(2 * j) / n2
            xi = mpc(mpmath.cospi(ang), mpmath.sinpi(ang))
            pw = mpf((2 * j * (1 - n)) % (2 * n2)) / n2
            xi_pow = mpc(mpmath.cospi(pw), mpmath.sinpi(pw))
            val = mpmath.exp(n * z * xi) * xi_pow * _f_mu_eval(mu, xi)
            total_fine += val
            if j % 2 == 0:
                total_coarse += val
        fine = 2 * total_fine / n2
        coarse = 2 * total_coarse / nodes
        drift = abs(fine - coarse)
        if drift > mpf(2) ** (-(p // 4)):
            raise QuadratureNotConverged(
                f"m_contour(n={n}, mu={mu}): node doubling moved the result by "
                f"{mp.nstr(drift, 5)} > 2^-{p // 4}"
            )
    with workprec(p):
        return MPComplex.from_mpc(+fine, p)


def _f_mu_eval(mu: int, xi: mpc) -> mpc:
    window = mpmath.pi * _POLE_RADIUS_NUM / _POLE_RADIUS_DEN
    for k in range(mu + 1):
        center = (2 * k + 1) * mpmath.pi
        if abs(xi - mpc(0, center)) < window:
            return _f_mu_regularized(mu, xi, k, 1)
        if abs(xi + mpc(0, center)) < window:
            return _f_mu_regularized(mu, xi, k, -1)
    return _f_mu_raw(mu, xi)


def m_exact(n: int, mu: int, x, p: int | None = None) -> MPComplex:
    """Quadrature-free M reference: eval_scaled(n, x) - k_mu(n, mu, x)."""
    if p is None:
        p = auto_precision(n)
    with workprec(p):
        value = eval_scaled(n, x, p).to_mpc() - k_mu(n, mu, x, p).to_mpc()
        return MPComplex.from_mpc(value, p)


def m_saddle(n: int, mu: int, x, p: int = 256) -> MPComplex:
    """Leading saddle-point value sqrt(2/pi) (xe)^n F_mu(1/x) / (sqrt(n) x).

    Valid for 1/((2 mu + 1) pi + 1e-3) <= |x| (so that 1/x stays inside the
    analyticity annulus of F_mu, with margin) and x off the closed negative
    real axis, where the sign of the Gaussian factor sqrt(1/x^2) flips.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    with workprec(p + 16):
        z = as_mpc(x)
        r = abs(z)
        eps0 = mpf(1) / 1000
        if r == 0 or 1 / r > (2 * mu + 1) * mpmath.pi + eps0:
            raise DomainViolation(
                f"m_saddle requires |1/x| <= (2mu+1)pi + 1e-3; |x| = {mp.nstr(r, 8)}"
            )
        if z.imag == 0 and z.real <= 0:
            raise DomainViolation("m_saddle is undefined on the closed negative real axis")
        fval = f_mu(mu, 1 / z, p + 16).to_mpc()
        value = (mpmath.sqrt(mpf(2) / mpmath.pi)
                 * mpmath.exp(n * (1 + mpmath.log(z)))
                 * fval / (mpmath.sqrt(n) * z))
    with workprec(p):
        return MPComplex.from_mpc(+value, p)


def g_eval(x, p: int = 256) -> MPComplex:
    """g(x) = 1 / (pi i x e^{1 - pi i x}); |g| = 1 marks the arc of the limit set."""
    with workprec(p):
        z = as_mpc(x)
        if z == 0:
            raise DomainViolation("g_eval is undefined at x = 0")
        piix = mpmath.pi * mpc(0, 1) * z
        value = 1 / (piix * mpmath.exp(1 - piix))
        return MPComplex.from_mpc(value, p)


def normalized_h(n: int, x, p: int | None = None) -> MPComplex:
    """h_n(x) = E_n(nx) sqrt(n) / (n! (ex)^n), via exp(-n(1 + Log x))."""
    if p is None:
        p = auto_precision(n)
    with workprec(p):
        z = as_mpc(x)
        if z == 0:
            raise DomainViolation("normalized_h is undefined at x = 0")
        scaled = eval_scaled(n, z, p).to_mpc()
        value = scaled * mpmath.sqrt(n) * mpmath.exp(-n * (1 + mpmath.log(z)))
        return MPComplex.from_mpc(value, p)
