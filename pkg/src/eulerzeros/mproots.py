"""Simultaneous multiprecision root finding for P_n(x) = E_n(nx)/n!.

The solver is Aberth-Ehrlich with sequential (Gauss-Seidel, fixed index
order) updates, run on the exact scaled coefficients rounded to the working
precision.  All roots live in |x| < 0.33, so the initial guesses sit on two
concentric circles of radii 0.28 (three quarters of the points, near the arc
component) and 0.06 (the rest, inside the real interval) with seeded angular
jitter to break conjugation symmetry.

Cold-started Aberth needs a few hundred sweeps of bulk transport before the
cubic endgame, so the transport runs in hardware floats (a vectorized Jacobi
warm-up followed by Gauss-Seidel sweeps), and only then does a precision
ladder of multiprecision Gauss-Seidel sweeps polish the configuration to the
target.  Every stage is a deterministic function of (n, p, seed).
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

import numpy as np
import mpmath
from mpmath import mp, mpc, mpf, workprec

from .errors import CertificationFailed, InvalidDegree, NoConvergence
from .eulerpoly import scaled_coeffs_mpf
from .precision import MPComplex, auto_precision

OUTER_RADIUS = 0.28
INNER_RADIUS = 0.06
INNER_FRACTION = 0.25
JITTER = 0.3                  # fraction of the angular spacing
FLOAT_JACOBI_SWEEPS = 80
FLOAT_GS_SWEEPS = 400
FLOAT_TOL = 1e-10
MP_BASE_PREC = 192
MP_SWEEP_BUDGET = 200
MAX_ESCALATIONS = 3


@dataclass(frozen=True)
class RootSet:
    """All n roots of E_n(nx), with a posteriori error data.

    residuals are |P_n(r)| normalized by the Horner magnitude sum at r (a
    backward-error measure); newton_radii are |P_n(r)/P_n'(r)|.
    """

    n: int
    precision_bits: int
    seed: int
    roots: tuple  # MPComplex, sorted by (re, im)
    residuals: tuple  # mpf
    newton_radii: tuple  # mpf
    certified: bool = False
    cluster_flags: tuple | None = None

    def max_newton_radius(self):
        return max(self.newton_radii)

    def as_complex(self) -> list[complex]:
        return [complex(r) for r in self.roots]


def initial_guesses(n: int, seed: int = 0) -> list[complex]:
    rng = random.Random(seed)
    n_inner = round(INNER_FRACTION * n)
    n_outer = n - n_inner
    pts = []
    for count, radius, offset in ((n_outer, OUTER_RADIUS, 0.0),
                                  (n_inner, INNER_RADIUS, 0.5)):
        for i in range(count):
            spacing = 2 * math.pi / count
            ang = (i + offset) * spacing + JITTER * (2 * rng.random() - 1) * spacing
            pts.append(complex(radius * math.cos(ang), radius * math.sin(ang)))
    return pts


def _float_jacobi(dd, dp, x, sweeps, tol):
    n = len(x)
    with np.errstate(all="ignore"):
        for _ in range(sweeps):
            pv = np.zeros(n, dtype=np.complex128)
            for c in dd:
                pv = pv * x + c
            qv = np.zeros(n, dtype=np.complex128)
            for c in dp:
                qv = qv * x + c
            newton = pv / qv
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, 1.0)
            rep = (1.0 / diff).sum(axis=1) - 1.0
            w = newton / (1.0 - newton * rep)
            w = np.nan_to_num(w, nan=0.0, posinf=0.0, neginf=0.0)
            x = x - w
            if np.max(np.abs(w)) < tol:
                break
    return x


def _float_gs(dd, dp, x, sweeps, tol):
    """Gauss-Seidel float sweeps; points whose evaluation dies in double
    range (deep-interior dead zone) are pushed outward deterministically."""
    n = len(dd) - 1
    x = list(x)
    for _ in range(sweeps):
        maxstep = 0.0
        for i in range(n):
            xi = x[i]
            pv = dd[0]
            for c in dd[1:]:
                pv = pv * xi + c
            if pv == 0.0:
                continue
            qv = dp[0]
            for c in dp[1:]:
                qv = qv * xi + c
            rep = 0.0
            for j in range(n):
                if j != i:
                    dz = xi - x[j]
                    if dz != 0.0:
                        rep += 1.0 / dz
            try:
                denom = qv / pv - rep
                w = 1.0 / denom if denom != 0.0 else 0.0
            except (ZeroDivisionError, OverflowError):
                w = complex("nan")
            if not (cmath.isfinite(w) and cmath.isfinite(denom)):
                x[i] = 1.6 * xi if xi != 0.0 else complex(INNER_RADIUS, 0.02)
                maxstep = max(maxstep, abs(x[i] - xi))
                continue
            x[i] = xi - w
            aw = abs(w)
            if aw > maxstep:
                maxstep = aw
        if maxstep < tol:
            break
    return x


def _float_stage(n: int, p: int, guesses):
    dd_mp = scaled_coeffs_mpf(n, p)
    dd = [float(c) for c in dd_mp]
    if not all(math.isfinite(c) for c in dd):
        return guesses  # out of double range; ladder starts from the circles
    dp = [c * k for c, k in zip(dd[:-1], range(n, 0, -1))]
    x = _float_jacobi(np.array(dd), np.array(dp), np.array(guesses), FLOAT_JACOBI_SWEEPS, FLOAT_TOL)
    return _float_gs(dd, dp, list(x), FLOAT_GS_SWEEPS, FLOAT_TOL)


def _mp_sweep(dd, dp, xs, prec):
    """One Gauss-Seidel Aberth sweep at prec bits; returns max |step|."""
    n = len(xs)
    maxstep = mpf(0)
    with workprec(prec):
        for i in range(n):
            xi = xs[i]
            pv = dd[0]
            for c in dd[1:]:
                pv = pv * xi + c
            if pv == 0:
                continue
            qv = dp[0]
            for c in dp[1:]:
                qv = qv * xi + c
            rep = mpc(0)
            for j in range(n):
                if j != i:
                    dz = xi - xs[j]
                    if dz != 0:
                        rep += 1 / dz
            denom = qv / pv - rep
            if denom == 0:
                continue
            w = 1 / denom
            xs[i] = xi - w
            aw = abs(w)
            if aw > maxstep:
                maxstep = aw
    return maxstep


def _ladder(n: int, p: int, xs):
    """Precision ladder of GS sweeps up to p bits; True once the final-stage
    max Newton step drops below 2**(-p/2) within the sweep budget."""
    sweeps_used = 0
    prec = min(MP_BASE_PREC, p)
    history = []
    while True:
        dd = scaled_coeffs_mpf(n, prec)
        with workprec(prec):
            dp = tuple(c * k for c, k in zip(dd[:-1], range(n, 0, -1)))
        stage_target = mpf(2) ** (-(prec // 2))
        stage_cap = 40 if prec == MP_BASE_PREC else 12
        stage_sweeps = 0
        while True:
            step = _mp_sweep(dd, dp, xs, prec)
            sweeps_used += 1
            stage_sweeps += 1
            history.append((prec, float(step)))
            if step < stage_target:
                break
            if prec < p and stage_sweeps >= stage_cap:
                break
            if sweeps_used >= MP_SWEEP_BUDGET:
                return (prec == p and step < stage_target), sweeps_used, history
        if prec == p:
            return step < stage_target, sweeps_used, history
        prec = min(3 * prec, p)


def _error_data(n: int, prec: int, xs):
    """Normalized residuals and Newton radii at prec bits."""
    dd = scaled_coeffs_mpf(n, prec)
    residuals = []
    radii = []
    with workprec(prec):
        dp = tuple(c * k for c, k in zip(dd[:-1], range(n, 0, -1)))
        abs_dd = tuple(abs(c) for c in dd)
        for xi in xs:
            pv = dd[0]
            for c in dd[1:]:
                pv = pv * xi + c
            qv = dp[0]
            for c in dp[1:]:
                qv = qv * xi + c
            r = abs(xi)
            scale = mpf(0)
            for c in abs_dd:
                scale = scale * r + c
            residuals.append(+(abs(pv) / scale))
            radii.append(+(abs(pv / qv)) if qv != 0 else mpf("inf"))
    return residuals, radii


def find_roots(n: int, p: int | None = None, seed: int = 0) -> RootSet:
    """All n roots of E_n(nx) at precision p (None = max(256, 8n + 64)).

    Raises InvalidDegree for n = 0 and NoConvergence (with the sweep history
    attached) if the iteration fails even after doubling the precision three
    times.
    """
    if n < 1:
        raise InvalidDegree("find_roots requires n >= 1")
    if p is None:
        p = auto_precision(n)
    if p < 64:
        raise ValueError("precision must be >= 64 bits")

    guesses = initial_guesses(n, seed)
    warm = _float_stage(n, p, guesses)
    with workprec(p):
        xs = [mpc(z) for z in warm]

    prec = p
    full_history = []
    for attempt in range(MAX_ESCALATIONS + 1):
        converged, used, history = _ladder(n, prec, xs)
        full_history.extend(history)
        if converged:
            break
        prec *= 2
    else:
        raise NoConvergence(
            f"find_roots(n={n}, seed={seed}) failed after "
            f"{MAX_ESCALATIONS} precision escalations",
            diagnostics={"history": full_history, "final_precision": prec // 2},
        )

    with workprec(prec):
        xs.sort(key=lambda z: (z.real, z.imag))
    residuals, radii = _error_data(n, prec, xs)
    roots = tuple(MPComplex(z.real, z.imag, prec) for z in xs)
    return RootSet(
        n=n,
        precision_bits=prec,
        seed=seed,
        roots=roots,
        residuals=tuple(residuals),
        newton_radii=tuple(radii),
    )


def certify(rs: RootSet) -> RootSet:
    """Recompute error data at doubled precision and flag root clusters.

    A root is cluster-flagged when its Newton radius exceeds half the
    distance to its nearest sibling.  Raises CertificationFailed if any
    normalized residual exceeds 2**(-precision_bits/8).
    """
    prec2 = 2 * rs.precision_bits
    xs = [r.to_mpc() for r in rs.roots]
    residuals, radii = _error_data(rs.n, prec2, xs)

    threshold = mpf(2) ** (-(rs.precision_bits // 8))
    worst = max(residuals) if residuals else mpf(0)
    if worst > threshold:
        raise CertificationFailed(
            f"normalized residual {mp.nstr(worst, 5)} exceeds "
            f"2^-{rs.precision_bits // 8}"
        )

    flags = []
    pts = [complex(r) for r in rs.roots]
    for i, (pt, rad) in enumerate(zip(pts, radii)):
        nearest = min(
            (abs(pt - q) for j, q in enumerate(pts) if j != i), default=float("inf")
        )
        flags.append(float(rad) > 0.5 * nearest)

    return RootSet(
        n=rs.n,
        precision_bits=rs.precision_bits,
        seed=rs.seed,
        roots=rs.roots,
        residuals=tuple(residuals),
        newton_radii=tuple(radii),
        certified=True,
        cluster_flags=tuple(flags),
    )
