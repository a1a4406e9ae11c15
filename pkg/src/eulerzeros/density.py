"""Classify computed zeros against the limit set and extract density stats.

Classification rule: a root is ``interval`` when its imaginary part is below
tol_real (default: ten times the largest certified Newton radius, so tight
conjugate pairs are never double-counted as real) and its real part is
within tol_attr of the interval span; otherwise it joins the nearest arc if
within tol_attr of it, and is an ``outlier`` past that.

Sector statistics live in the zeta plane (zeta = z e^{1-z}, z = pi i x),
where the arc images are uniformly distributed in angle; interval statistics
live directly on the real line.  Uniformity is summarized by the
Kolmogorov-Smirnov distance against the uniform law.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from mpmath import mpf

from .errors import DomainViolation, EmptyInput
from .attractor import AttractorModel, distance_to_attractor, sample_attractor
from .mproots import RootSet, certify, find_roots

INTERVAL_HALF = 1.0 / (math.pi * math.e)
QUARTER_ARC_ANGLE = math.pi / 2 - 1.0 / math.e
_SLACK = 1e-12

TARGET_INTERVAL_FRACTION = 2.0 / (math.pi * math.e)
TARGET_QUARTER_ARC_FRACTION = 0.25 - 1.0 / (2 * math.pi * math.e)


@dataclass(frozen=True)
class DensityReport:
    n: int
    counts: dict
    fractions: dict
    sector_counts: list          # (alpha, beta, count)
    ks_arc: float | None
    ks_interval: float | None
    tol_real: float
    tol_attr: float
    labels: tuple = ()
    distances: tuple = ()        # distance to the limit set, per root
    quarter_fractions: dict = field(default_factory=dict)

    def deviations(self) -> dict:
        devs = {
            "interval": abs(self.fractions["interval"] - TARGET_INTERVAL_FRACTION)
        }
        for key, frac in self.quarter_fractions.items():
            devs[key] = abs(frac - TARGET_QUARTER_ARC_FRACTION)
        return devs


def _zeta_arg(x: complex) -> float:
    z = complex(0, math.pi) * x
    return cmath.phase(z * cmath.exp(1 - z))


def _lower_representative(x: complex) -> complex:
    return x.conjugate() if x.imag > 0 else x


def classify_roots(rs: RootSet, model: AttractorModel,
                   tol_real=None, tol_attr: float = 0.1) -> DensityReport:
    """Per-root component labels plus counts and fractions (no sector/KS yet)."""
    if tol_real is None:
        tol_real = 10 * rs.max_newton_radius()
    tol_real_mp = mpf(tol_real)
    if tol_real_mp < 0 or tol_attr <= 0:
        raise ValueError("tolerances must be positive")

    labels = []
    distances = []
    for root in rs.roots:
        xc = complex(root)
        _, dist = distance_to_attractor(xc, model)
        distances.append(dist)
        if abs(root.im) <= tol_real_mp and abs(xc.real) <= INTERVAL_HALF + tol_attr:
            labels.append("interval")
            continue
        lower = _arc_distance(xc, model, "lower_arc")
        upper = _arc_distance(xc, model, "upper_arc")
        arc_label, arc_dist = ("lower_arc", lower) if lower <= upper else ("upper_arc", upper)
        if arc_dist <= tol_attr:
            labels.append(arc_label)
        else:
            labels.append("outlier")

    counts = {k: labels.count(k) for k in ("interval", "lower_arc", "upper_arc", "outlier")}
    fractions = {k: v / rs.n for k, v in counts.items()}
    return DensityReport(
        n=rs.n,
        counts=counts,
        fractions=fractions,
        sector_counts=[],
        ks_arc=None,
        ks_interval=None,
        tol_real=float(tol_real_mp),
        tol_attr=tol_attr,
        labels=tuple(labels),
        distances=tuple(distances),
    )


def _arc_distance(xc: complex, model: AttractorModel, which: str) -> float:
    from .attractor import _dist_to_arc
    return _dist_to_arc(xc, conj=(which == "upper_arc"))


def _report_for(rs, model, report, tol_real, tol_attr):
    if report is not None:
        return report
    return classify_roots(rs, model, tol_real, tol_attr)


def sector_count(rs: RootSet, model: AttractorModel, alpha: float, beta: float,
                 tol_real=None, tol_attr: float = 0.1,
                 report: DensityReport | None = None) -> int:
    """Lower-arc roots whose zeta-image argument falls in [alpha, beta].

    The admissible range is [0, pi/2 - 1/e], the angular span of the quarter
    arc treated by the sector-density limit; the upper half follows by
    conjugation and is not double-counted here.
    """
    if not (0 <= alpha <= beta <= QUARTER_ARC_ANGLE + _SLACK):
        raise DomainViolation(
            f"sector bounds must satisfy 0 <= alpha <= beta <= pi/2 - 1/e; "
            f"got ({alpha}, {beta})"
        )
    rep = _report_for(rs, model, report, tol_real, tol_attr)
    count = 0
    for root, label in zip(rs.roots, rep.labels):
        if label != "lower_arc":
            continue
        arg = _zeta_arg(complex(root))
        if alpha <= arg <= beta:
            count += 1
    return count


def interval_count(rs: RootSet, a: float, b: float,
                   model: AttractorModel | None = None,
                   tol_real=None, tol_attr: float = 0.1,
                   report: DensityReport | None = None) -> int:
    """Interval-classified roots with real part in [a, b]."""
    if not (-INTERVAL_HALF - _SLACK <= a <= b <= INTERVAL_HALF + _SLACK):
        raise DomainViolation(
            f"interval bounds must satisfy -1/(pi e) <= a <= b <= 1/(pi e); "
            f"got ({a}, {b})"
        )
    if report is None and model is None:
        model = sample_attractor(64)
    rep = _report_for(rs, model, report, tol_real, tol_attr)
    count = 0
    for root, label in zip(rs.roots, rep.labels):
        if label == "interval" and a <= complex(root).real <= b:
            count += 1
    return count


def disc_count(rs: RootSet, center, radius: float) -> int:
    """Roots within the closed disc |x - center| <= radius."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    c = complex(center)
    return sum(1 for r in rs.roots if abs(complex(r) - c) <= radius)


def ks_uniform(values) -> float:
    """sup_t |F_empirical(t) - t| against the uniform law on [0, 1]."""
    vals = sorted(float(v) for v in values)
    if not vals:
        raise EmptyInput("ks_uniform needs at least one value")
    if vals[0] < 0 or vals[-1] > 1:
        raise ValueError("values must lie in [0, 1]")
    m = len(vals)
    d = 0.0
    for i, v in enumerate(vals, start=1):
        d = max(d, i / m - v, v - (i - 1) / m)
    return d


def arc_angle_sample(rs: RootSet, rep: DensityReport) -> list[float]:
    """Quarter-arc zeta angles of lower-arc roots, normalized to [0, 1]."""
    out = []
    for root, label in zip(rs.roots, rep.labels):
        if label != "lower_arc":
            continue
        arg = _zeta_arg(complex(root))
        if 0 <= arg <= QUARTER_ARC_ANGLE:
            out.append(arg / QUARTER_ARC_ANGLE)
    return out


def interval_position_sample(rs: RootSet, rep: DensityReport) -> list[float]:
    """Interval-root positions normalized to [0, 1]."""
    out = []
    for root, label in zip(rs.roots, rep.labels):
        if label != "interval":
            continue
        re = complex(root).real
        if abs(re) <= INTERVAL_HALF:
            out.append((re + INTERVAL_HALF) / (2 * INTERVAL_HALF))
    return out


def _quarter_fractions(rs: RootSet, rep: DensityReport) -> dict:
    quarters = {"lower_right": 0, "lower_left": 0, "upper_right": 0, "upper_left": 0}
    for root, label in zip(rs.roots, rep.labels):
        if label not in ("lower_arc", "upper_arc"):
            continue
        t = _zeta_arg(_lower_representative(complex(root)))
        side = "right" if t >= 0 else "left"
        quarters[f"{label[:5]}_{side}"] += 1
    return {k: v / rs.n for k, v in quarters.items()}


DEFAULT_SECTORS = tuple(
    (0.0, QUARTER_ARC_ANGLE * k / 4) for k in range(1, 5)
) + ((0.0, 0.6),)


@dataclass(frozen=True)
class DensityOptions:
    precision_bits: int | None = None
    seed: int = 0
    tol_real: float | None = None
    tol_attr: float = 0.1
    arc_samples: int = 64
    sectors: tuple = DEFAULT_SECTORS


def full_report(rs: RootSet, model: AttractorModel,
                options: DensityOptions = DensityOptions()) -> DensityReport:
    """Classification plus sector counts, quarter fractions, and KS stats."""
    rep = classify_roots(rs, model, options.tol_real, options.tol_attr)
    sector_counts = [
        (a, b, sector_count(rs, model, a, b, report=rep)) for a, b in options.sectors
    ]
    arc_sample = arc_angle_sample(rs, rep)
    int_sample = interval_position_sample(rs, rep)
    return DensityReport(
        n=rep.n,
        counts=rep.counts,
        fractions=rep.fractions,
        sector_counts=sector_counts,
        ks_arc=ks_uniform(arc_sample) if arc_sample else None,
        ks_interval=ks_uniform(int_sample) if int_sample else None,
        tol_real=rep.tol_real,
        tol_attr=rep.tol_attr,
        labels=rep.labels,
        distances=rep.distances,
        quarter_fractions=_quarter_fractions(rs, rep),
    )


def density_report(n_list, options: DensityOptions = DensityOptions(),
                   root_source=None, model: AttractorModel | None = None):
    """Full pipeline per degree: roots -> certify -> classify -> statistics.

    Returns a list of (n, DensityReport | None, error | None); a failure for
    one degree does not abort the others.  ``root_source(n)`` may be passed
    to reuse cached or precomputed root sets.
    """
    if model is None:
        model = sample_attractor(max(64, options.arc_samples))
    if root_source is None:
        def root_source(n):
            return certify(find_roots(n, options.precision_bits, options.seed))
    results = []
    for n in n_list:
        if n < 10:
            results.append((n, None, ValueError("density pipeline needs n >= 10")))
            continue
        try:
            rs = root_source(n)
            results.append((n, full_report(rs, model, options), None))
        except Exception as exc:  # record per-n failures, keep going
            results.append((n, None, exc))
    return results
