"""Decimal-string JSON serialization, schema validation, and the root cache.

Multiprecision values cross module and process boundaries only as decimal
strings carrying ceil(precision_bits * 0.3010) significant digits, so no
binary float format leaks into any interface.  Serialization is fully
deterministic: identical in-memory values always produce identical bytes,
and the cache returns stored bytes verbatim, which makes cache hits
byte-identical to fresh computation by construction.
"""

from __future__ import annotations

import json
import math
import os
from decimal import Decimal, ROUND_HALF_EVEN, localcontext

import mpmath
from mpmath import mpf, workprec

from .errors import SchemaError
from .attractor import AttractorModel, CURVE_PRECISION
from .eulerpoly import ExactPolynomial
from .mproots import RootSet
from .precision import MPComplex


def digits_for(precision_bits: int) -> int:
    return math.ceil(precision_bits * 0.3010)


def mpf_to_str(x, digits: int) -> str:
    """Canonical decimal form of an mpf: sign, significand, E-exponent."""
    x = mpf(x)
    if mpmath.isnan(x):
        return "NaN"
    if mpmath.isinf(x):
        return "-Infinity" if x < 0 else "Infinity"
    if x == 0:
        return "0"
    sign, man, exp, _ = x._mpf_
    if exp >= 0:
        d = Decimal(man << exp)
    else:
        d = Decimal(man * 5 ** (-exp)).scaleb(exp)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        d = +d
    s = format(d, "E")
    return "-" + s if sign else s


def str_to_mpf(s: str, precision_bits: int):
    with workprec(precision_bits):
        return mpf(s)


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, separators=(",", ": ")) + "\n"


# -- RootSet ---------------------------------------------------------------

def rootset_to_obj(rs: RootSet) -> dict:
    digits = digits_for(rs.precision_bits)
    obj = {
        "n": rs.n,
        "precision_bits": rs.precision_bits,
        "seed": rs.seed,
        "roots": [
            {"re": mpf_to_str(r.re, digits), "im": mpf_to_str(r.im, digits)}
            for r in rs.roots
        ],
        "residuals": [mpf_to_str(v, digits) for v in rs.residuals],
        "newton_radii": [mpf_to_str(v, digits) for v in rs.newton_radii],
        "certified": rs.certified,
        "cluster_flags": list(rs.cluster_flags) if rs.cluster_flags is not None else None,
    }
    return obj


def validate_rootset_obj(obj) -> None:
    if not isinstance(obj, dict):
        raise SchemaError("root set document must be a JSON object")
    for key, typ in (("n", int), ("precision_bits", int), ("seed", int),
                     ("roots", list), ("residuals", list), ("newton_radii", list)):
        if key not in obj:
            raise SchemaError(f"root set document missing key {key!r}")
        if not isinstance(obj[key], typ):
            raise SchemaError(f"root set key {key!r} must be {typ.__name__}")
    n = obj["n"]
    if n < 1 or obj["precision_bits"] < 64:
        raise SchemaError("root set needs n >= 1 and precision_bits >= 64")
    for name in ("roots", "residuals", "newton_radii"):
        if len(obj[name]) != n:
            raise SchemaError(f"{name} must have exactly n = {n} entries")
    for entry in obj["roots"]:
        if not isinstance(entry, dict) or "re" not in entry or "im" not in entry:
            raise SchemaError("each root must be an object with 're' and 'im'")


def rootset_from_obj(obj) -> RootSet:
    validate_rootset_obj(obj)
    p = obj["precision_bits"]
    try:
        roots = tuple(
            MPComplex(str_to_mpf(e["re"], p), str_to_mpf(e["im"], p), p)
            for e in obj["roots"]
        )
        residuals = tuple(str_to_mpf(s, p) for s in obj["residuals"])
        radii = tuple(str_to_mpf(s, p) for s in obj["newton_radii"])
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"unparseable decimal value in root set: {exc}") from exc
    flags = obj.get("cluster_flags")
    return RootSet(
        n=obj["n"],
        precision_bits=p,
        seed=obj["seed"],
        roots=roots,
        residuals=residuals,
        newton_radii=radii,
        certified=bool(obj.get("certified", False)),
        cluster_flags=tuple(flags) if flags is not None else None,
    )


# -- coefficients ----------------------------------------------------------

def validate_coeffs_obj(obj) -> None:
    if not isinstance(obj, dict) or "n" not in obj or "coeffs" not in obj:
        raise SchemaError("coefficient document must carry 'n' and 'coeffs'")
    if not isinstance(obj["n"], int) or obj["n"] < 0:
        raise SchemaError("'n' must be a non-negative integer")
    if len(obj["coeffs"]) != obj["n"] + 1:
        raise SchemaError("'coeffs' must have n + 1 entries")
    for pair in obj["coeffs"]:
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(s, str) for s in pair)):
            raise SchemaError("each coefficient must be a [num, den] string pair")


# -- attractor -------------------------------------------------------------

def attractor_to_obj(model: AttractorModel) -> dict:
    digits = digits_for(CURVE_PRECISION)

    def cpx(v):
        return {"re": mpf_to_str(v.re, digits), "im": mpf_to_str(v.im, digits)}

    return {
        "interval": [mpf_to_str(model.interval[0], digits),
                     mpf_to_str(model.interval[1], digits)],
        "lower_arc": [cpx(s) for s in model.lower_arc],
        "upper_arc": [cpx(s) for s in model.upper_arc],
        "constants": {k: mpf_to_str(v, digits) for k, v in model.constants.items()},
    }


def validate_attractor_obj(obj) -> None:
    if not isinstance(obj, dict):
        raise SchemaError("attractor document must be a JSON object")
    for key in ("interval", "lower_arc", "upper_arc", "constants"):
        if key not in obj:
            raise SchemaError(f"attractor document missing key {key!r}")
    if len(obj["interval"]) != 2:
        raise SchemaError("'interval' must be a two-element list")
    if len(obj["lower_arc"]) != len(obj["upper_arc"]) or len(obj["lower_arc"]) < 16:
        raise SchemaError("arcs must carry >= 16 samples and match in length")


# -- density reports -------------------------------------------------------

def density_report_to_obj(report) -> dict:
    from .density import TARGET_INTERVAL_FRACTION, TARGET_QUARTER_ARC_FRACTION
    return {
        "n": report.n,
        "counts": report.counts,
        "fractions": report.fractions,
        "quarter_fractions": report.quarter_fractions,
        "sector_counts": [[a, b, c] for a, b, c in report.sector_counts],
        "ks_arc": report.ks_arc,
        "ks_interval": report.ks_interval,
        "tolerances": {"tol_real": report.tol_real, "tol_attr": report.tol_attr},
        "targets": {
            "interval_fraction": TARGET_INTERVAL_FRACTION,
            "quarter_arc_fraction": TARGET_QUARTER_ARC_FRACTION,
        },
        "deviations": report.deviations(),
    }


def density_csv_rows(reports) -> list[str]:
    header = ("n,interval_fraction,lower_right,lower_left,upper_right,upper_left,"
              "outlier_fraction,ks_arc,ks_interval")
    rows = [header]
    for rep in reports:
        q = rep.quarter_fractions
        rows.append(
            f"{rep.n},{rep.fractions['interval']!r},{q.get('lower_right', 0.0)!r},"
            f"{q.get('lower_left', 0.0)!r},{q.get('upper_right', 0.0)!r},"
            f"{q.get('upper_left', 0.0)!r},{rep.fractions['outlier']!r},"
            f"{rep.ks_arc!r},{rep.ks_interval!r}"
        )
    return rows


# -- complex rendering for CSV ----------------------------------------------

def complex_to_str(z, digits: int) -> str:
    if isinstance(z, MPComplex):
        re, im = z.re, z.im
    else:
        re, im = mpf(z.real), mpf(z.imag)
    re_s = mpf_to_str(re, digits)
    im_s = mpf_to_str(im, digits)
    joiner = "+" if not im_s.startswith("-") else ""
    return f"{re_s}{joiner}{im_s}j"


# -- root cache --------------------------------------------------------------

def cache_path(cache_dir: str, n: int, precision_bits: int, seed: int) -> str:
    return os.path.join(cache_dir, f"roots_n{n}_p{precision_bits}_s{seed}.json")


def load_cached_rootset(cache_dir: str, n: int, precision_bits: int,
                        seed: int) -> tuple[RootSet, bytes] | None:
    path = cache_path(cache_dir, n, precision_bits, seed)
    if not os.path.exists(path):
        return None
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        obj = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"corrupt cache file {path}: {exc}") from exc
    return rootset_from_obj(obj), raw


def store_rootset(cache_dir: str, rs: RootSet) -> bytes:
    os.makedirs(cache_dir, exist_ok=True)
    raw = dumps(rootset_to_obj(rs)).encode("utf-8")
    path = cache_path(cache_dir, rs.n, rs.precision_bits, rs.seed)
    with open(path, "wb") as fh:
        fh.write(raw)
    return raw
