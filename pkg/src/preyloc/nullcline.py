"""Prey nullcline y = g(x): values, slopes, critical points and branch partition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import OutOfDomain
from .models import Family, ModelInstance

LOCAL_MIN = "LocalMin"
LOCAL_MAX = "LocalMax"
ASCENDING = "ascending"
DESCENDING = "descending"
CRITICAL = "critical"

CRITICAL_BAND = 1e-10
_POLISH_BRACKET = 1e-6


@dataclass(frozen=True)
class CriticalPoint:
    x: float
    kind: str
    g_value: float


@dataclass(frozen=True)
class NullclineProfile:
    model: ModelInstance
    x_lo: float
    x_hi: float
    critical_points: tuple
    degree: str
    branches: tuple  # ((lo, hi, monotonicity), ...)
    slope_scale: float  # max |g'| over the admissible interval

    @property
    def family(self) -> Family:
        return self.model.family


# ---------------------------------------------------------------------------
# raw formulas, valid for floats and arrays alike


def cm_h(p, x):
    """Auxiliary parabola h(x) = rho (1 - x/k)(1 + b x) of the Crowley-Martin nullcline."""
    return p["rho"] * (1.0 - x / p["k"]) * (1.0 + p["b"] * x)


def cm_dh(p, x):
    return p["rho"] / p["k"] * (p["b"] * p["k"] - 1.0 - 2.0 * p["b"] * x)


def g_raw(family: Family, p, x):
    if family is Family.BAZYKIN:
        return p["r"] / (p["a"] * p["k"]) * (p["k"] - x) * (p["b"] + x)
    if family is Family.HOLLING_IV:
        s = 3.0 + p["h10"]
        return (3.0 / s - x) * (9.0 / (4.0 * s * s) + x * x)
    h = cm_h(p, x)
    return h / (p["a"] - p["c"] * h)


def dg_raw(family: Family, p, x):
    if family is Family.BAZYKIN:
        return p["r"] / (p["a"] * p["k"]) * (p["k"] - p["b"] - 2.0 * x)
    if family is Family.HOLLING_IV:
        s = 3.0 + p["h10"]
        return -3.0 / (4.0 * s * s) * (2.0 * s * x - 1.0) * (2.0 * s * x - 3.0)
    den = p["a"] - p["c"] * cm_h(p, x)
    return p["a"] * cm_dh(p, x) / (den * den)


def d2g_raw(family: Family, p, x):
    if family is Family.BAZYKIN:
        return -2.0 * p["r"] / (p["a"] * p["k"])
    if family is Family.HOLLING_IV:
        s = 3.0 + p["h10"]
        return -3.0 / (4.0 * s * s) * (8.0 * s * s * x - 8.0 * s)
    a, c = p["a"], p["c"]
    den = a - c * cm_h(p, x)
    d2h = -2.0 * p["rho"] * p["b"] / p["k"]
    dh = cm_dh(p, x)
    return a * d2h / den**2 + 2.0 * a * c * dh * dh / den**3


def admissible_interval(m: ModelInstance) -> tuple:
    """Interval of prey densities on which g is defined and non-negative."""
    p = m.params.values
    fam = m.family
    if fam is Family.BAZYKIN:
        return 0.0, p["k"]
    if fam is Family.HOLLING_IV:
        return 0.0, 3.0 / (3.0 + p["h10"])
    k = p["k"]
    a, c = p["a"], p["c"]
    x_v = m.params["x_v"]
    if c == 0.0 or c * cm_h(p, x_v) < a:
        return 0.0, k
    # pole inside (0, k): keep the component that reaches x = k
    x_pole = brentq(lambda x: a - c * cm_h(p, x), x_v, k, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return x_pole, k


def _in_domain(lo, hi, x, lo_open=False):
    tol = 1e-12 * max(1.0, abs(hi))
    if lo_open:
        return lo < x <= hi + tol
    return lo - tol <= x <= hi + tol


def _domain_of(obj):
    if isinstance(obj, NullclineProfile):
        return obj.model, obj.x_lo, obj.x_hi
    lo, hi = admissible_interval(obj)
    return obj, lo, hi


def nullcline_value(obj, x: float) -> float:
    """g(x) for a model instance or a profile; OutOfDomain outside the admissible interval."""
    m, lo, hi = _domain_of(obj)
    if not _in_domain(lo, hi, x, lo_open=lo > 0.0):
        raise OutOfDomain(f"x={x!r} outside admissible prey interval ({lo!r}, {hi!r})")
    return g_raw(m.family, m.params.values, x)


def nullcline_slope(obj, x: float) -> float:
    m, lo, hi = _domain_of(obj)
    if not _in_domain(lo, hi, x, lo_open=lo > 0.0):
        raise OutOfDomain(f"x={x!r} outside admissible prey interval ({lo!r}, {hi!r})")
    return dg_raw(m.family, m.params.values, x)


def _closed_form_critical(m: ModelInstance):
    p = m.params
    if m.family is Family.BAZYKIN:
        return [(p["x_v"], LOCAL_MAX)]
    if m.family is Family.HOLLING_IV:
        return [(p["x_min"], LOCAL_MIN), (p["x_max"], LOCAL_MAX)]
    return [(p["x_v"], LOCAL_MAX)]


def polish_critical_point(m: ModelInstance, x_guess: float, bracket: float = _POLISH_BRACKET) -> float:
    """Bisection on g' inside ``x_guess +- bracket`` followed by Newton refinement."""
    fam, p = m.family, m.params.values
    half = bracket * max(1.0, abs(x_guess))
    lo, hi = x_guess - half, x_guess + half
    flo, fhi = dg_raw(fam, p, lo), dg_raw(fam, p, hi)
    if flo * fhi > 0.0:
        raise ArithmeticError(f"g' does not change sign around x={x_guess!r}")
    x = brentq(lambda t: dg_raw(fam, p, t), lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    for _ in range(8):
        curv = d2g_raw(fam, p, x)
        if curv == 0.0:
            break
        step = dg_raw(fam, p, x) / curv
        x -= step
        if abs(step) <= 1e-12 * max(1.0, abs(x)):
            break
    return x


def critical_points(m: ModelInstance) -> list:
    """Closed-form critical points of g, each cross-checked by a polished root of g'."""
    lo, hi = admissible_interval(m)
    fam, p = m.family, m.params.values
    out = []
    for x_c, kind in _closed_form_critical(m):
        if not lo < x_c < hi:
            continue
        x_p = polish_critical_point(m, x_c)
        if abs(x_p - x_c) > 1e-9 * max(1.0, abs(x_c)):
            raise ArithmeticError(f"closed-form critical point {x_c!r} disagrees with root of g' at {x_p!r}")
        out.append(CriticalPoint(x_c, kind, float(g_raw(fam, p, x_c))))
    return out


def nullcline_profile(m: ModelInstance) -> NullclineProfile:
    lo, hi = admissible_interval(m)
    fam, p = m.family, m.params.values
    cps = tuple(critical_points(m))
    grid = np.linspace(lo, hi, 65)
    if lo > 0.0:
        grid = grid[1:]
    scale = float(np.max(np.abs(dg_raw(fam, p, grid))))
    cuts = [lo] + [cp.x for cp in cps] + [hi]
    branches = []
    for left, right in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (left + right)
        branches.append((left, right, ASCENDING if dg_raw(fam, p, mid) > 0.0 else DESCENDING))
    if fam is Family.BAZYKIN:
        degree = "quadratic"
    elif fam is Family.HOLLING_IV:
        degree = "cubic"
    else:
        degree = "rational" if p["c"] > 0.0 else "quadratic"
    return NullclineProfile(m, lo, hi, cps, degree, tuple(branches), scale)


def branch_of(profile: NullclineProfile, x: float) -> str:
    """ascending / descending by the sign of g', critical inside the tolerance band."""
    slope = nullcline_slope(profile, x)
    band = CRITICAL_BAND * profile.slope_scale
    if abs(slope) <= band:
        return CRITICAL
    return ASCENDING if slope > 0.0 else DESCENDING


def branch_index(profile: NullclineProfile, x: float) -> int:
    """Index of the branch-partition cell containing ``x``."""
    for i, (_, right, _) in enumerate(profile.branches):
        if x <= right:
            return i
    return len(profile.branches) - 1


def containing_interval(profile: NullclineProfile, x: float) -> tuple:
    """(nearest critical point below x or left end, nearest above or right end)."""
    lower = max([profile.x_lo] + [cp.x for cp in profile.critical_points if cp.x < x])
    upper = min([profile.x_hi] + [cp.x for cp in profile.critical_points if cp.x > x])
    return lower, upper
