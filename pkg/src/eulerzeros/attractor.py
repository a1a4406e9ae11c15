"""Geometry of the limit set: two conjugate arcs plus a real interval.

The arc component is the rotated image x = z/(pi i) of the right half
(|arg z| <= pi/2) of the curve |z e^{1-z}| = 1, |z| <= 1; the real component
is the interval [-1/(pi e), 1/(pi e)].  The curve is parametrized by the
angle theta = arg z, with the radius r(theta) solved from
ln r + 1 = r cos(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpc, mpf, workprec

from .precision import MPComplex

# enough for every 1e-12/1e-14 geometric invariant with wide margin
CURVE_PRECISION = 96


@dataclass(frozen=True)
class SzegoCurvePoint:
    """Polar point (theta, r) on the curve ln r + 1 - r cos(theta) = 0."""

    theta: float
    r: float


@dataclass(frozen=True)
class AttractorModel:
    interval: tuple  # (mpf, mpf) endpoints -/+ 1/(pi e)
    lower_arc: tuple  # MPComplex samples ordered by theta in [-pi/2, pi/2]
    upper_arc: tuple  # conjugates, same order
    key_points: dict
    constants: dict

    @property
    def samples_per_arc(self) -> int:
        return len(self.lower_arc)


def szego_radius(theta: float, p: int = CURVE_PRECISION):
    """Unique r in (0, 1] with ln r + 1 = r cos(theta); r(0) = 1.  Returns mpf.

    f(r) = ln r + 1 - r cos(theta) is strictly increasing on (0, 1] for
    theta != 0, so bisection brackets a unique root; a Newton polish brings
    the residual far below 1e-14.
    """
    with workprec(p):
        th = mpf(theta)
        if abs(th) > mpmath.pi + mpf(2) ** (-40):
            raise ValueError("theta must lie in [-pi, pi]")
        c = mpmath.cos(th)
        if c >= 1:
            return mpf(1)

        def f(r):
            return mpmath.log(r) + 1 - r * c

        lo, hi = mpf(1) / 100, mpf(1)
        while f(lo) > 0:
            lo /= 2
        for _ in range(60):
            mid = (lo + hi) / 2
            if f(mid) <= 0:
                lo = mid
            else:
                hi = mid
        r = (lo + hi) / 2
        for _ in range(8):
            r = r - f(r) / (1 / r - c)
        return +r


def arc_point(theta: float, p: int = CURVE_PRECISION) -> MPComplex:
    """Lower-arc point x = -i r(theta) e^{i theta} / pi, |theta| <= pi/2."""
    with workprec(p):
        th = mpf(theta)
        if abs(th) > mpmath.pi / 2 + mpf(2) ** (-40):
            raise ValueError("theta must lie in [-pi/2, pi/2]")
        r = szego_radius(th, p)
        z = r * mpmath.exp(mpc(0, 1) * th)
        x = mpc(0, -1) * z / mpmath.pi
        return MPComplex.from_mpc(x, p)


def conformal_zeta(z, p: int = CURVE_PRECISION) -> MPComplex:
    """zeta = z e^{1-z}, the map sending the curve to the unit circle."""
    with workprec(p):
        zz = mpc(z.to_mpc() if isinstance(z, MPComplex) else z)
        return MPComplex.from_mpc(zz * mpmath.exp(1 - zz), p)


def zeta_of_x(x, p: int = CURVE_PRECISION) -> MPComplex:
    """conformal_zeta applied to the pulled-back point z = pi i x."""
    with workprec(p):
        zz = mpc(x.to_mpc() if isinstance(x, MPComplex) else x)
        return conformal_zeta(mpmath.pi * mpc(0, 1) * zz, p)


def key_constants(p: int = CURVE_PRECISION) -> dict:
    """Named constants of the limit set (mpf values)."""
    with workprec(p):
        interval_half = 1 / (mpmath.pi * mpmath.e)
        consts = {
            "interval_half": +interval_half,
            "outer_radius": +(1 / mpmath.pi),
            "szego_neg_crossing": +(-szego_radius(math.pi, p)),
            "pointA_re": +(1 - mpmath.log(3)),
            "quarter_arc_fraction": +(mpf(1) / 4 - 1 / (2 * mpmath.pi * mpmath.e)),
            "interval_fraction": +(2 / (mpmath.pi * mpmath.e)),
            "arc_endpoint_zeta_arg": +(mpmath.pi / 2 - 1 / mpmath.e),
        }
    return consts


def _chebyshev_thetas(m: int):
    # Chebyshev-Lobatto points on [-pi/2, pi/2]: dense near the endpoints,
    # where zeros hand over from arc to interval
    return [
        -(math.pi / 2) * math.cos(math.pi * j / (m - 1)) for j in range(m)
    ]


def sample_attractor(m: int = 64, p: int = CURVE_PRECISION) -> AttractorModel:
    """Attractor model with m Chebyshev-spaced samples per arc."""
    if m < 16:
        raise ValueError("need at least 16 samples per arc")
    lower = tuple(arc_point(th, p) for th in _chebyshev_thetas(m))
    upper = tuple(s.conjugate() for s in lower)
    with workprec(p):
        half = +(1 / (mpmath.pi * mpmath.e))
        key_points = {
            "lower_mid": arc_point(0.0, p),
            "upper_mid": arc_point(0.0, p).conjugate(),
            "endpoint_pos": MPComplex(half, mpf(0), p),
            "endpoint_neg": MPComplex(-half, mpf(0), p),
        }
        return AttractorModel(
            interval=(-half, half),
            lower_arc=lower,
            upper_arc=upper,
            key_points=key_points,
            constants=key_constants(p),
        )


def _dist_to_segment(x: complex, a: float, b: float) -> float:
    re, im = x.real, x.imag
    t = min(max(re, a), b)
    return math.hypot(re - t, im)


def _szego_radius_float(theta: float) -> float:
    # double-precision companion of szego_radius for distance queries
    c = math.cos(theta)
    if c >= 1.0:
        return 1.0
    lo, hi = 1e-8, 1.0
    while math.log(lo) + 1 - lo * c > 0:
        lo /= 2
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if math.log(mid) + 1 - mid * c <= 0:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    for _ in range(4):
        r -= (math.log(r) + 1 - r * c) / (1 / r - c)
    return r


def _arc_xy(theta: float) -> complex:
    # float-precision arc point; distance queries don't need more
    r = _szego_radius_float(theta)
    z = r * complex(math.cos(theta), math.sin(theta))
    return complex(z.imag, -z.real) / math.pi   # -i z / pi


def _dist_to_arc(x: complex, conj: bool) -> float:
    xq = x.conjugate() if conj else x

    def d(theta):
        return abs(xq - _arc_xy(theta))

    # coarse scan, then golden-section refinement of the smooth 1-D distance
    grid = 65
    best_j, best = 0, float("inf")
    for j in range(grid):
        th = -math.pi / 2 + math.pi * j / (grid - 1)
        dj = d(th)
        if dj < best:
            best_j, best = j, dj
    lo = max(-math.pi / 2, -math.pi / 2 + math.pi * (best_j - 1) / (grid - 1))
    hi = min(math.pi / 2, -math.pi / 2 + math.pi * (best_j + 1) / (grid - 1))
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = d(c), d(e)
    while b - a > 1e-12:
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = d(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = d(e)
    return min(fc, fe, d(a), d(b))


def distance_to_attractor(x, model: AttractorModel) -> tuple[str, float]:
    """Nearest component of the limit set and the distance to it.

    Ties between components resolve toward the interval (they occur only at
    the measure-zero arc endpoints, which belong to both components).
    """
    if model.samples_per_arc < 64:
        raise ValueError("model must be sampled with m >= 64")
    xc = complex(x) if not isinstance(x, MPComplex) else complex(x)
    a, b = float(model.interval[0]), float(model.interval[1])
    candidates = [
        ("interval", _dist_to_segment(xc, a, b)),
        ("lower_arc", _dist_to_arc(xc, conj=False)),
        ("upper_arc", _dist_to_arc(xc, conj=True)),
    ]
    return min(candidates, key=lambda kv: kv[1])
