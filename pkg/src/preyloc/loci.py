"""Hopf, Bogdanov-Takens and Neimark-Sacker points with branch-localization verdicts.

Closed forms are used where they exist (Bazykin Hopf, Crowley-Martin Hopf in
the interference parameter, HollingIV Hopf branch); everything else is found by
scanning a nullcline coordinate and bracketing. Every emitted point is
re-verified on the full analytic Jacobian before it is returned.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .equilibria import track_equilibrium
from .errors import (
    DegenerateCrossing,
    NoConvergence,
    NullclineNonpositive,
    OutOfDomain,
    PatternViolation,
    SpectralConditionFailure,
)
from .models import (
    CONDITIONING_PARAMETER,
    DESIGNATED_PARAMETER,
    Family,
    ModelInstance,
    PlanarState,
    jacobian_entries,
)
from .nullcline import (
    ASCENDING,
    DESCENDING,
    NullclineProfile,
    admissible_interval,
    branch_of,
    cm_h,
    containing_interval,
    g_raw,
    nullcline_profile,
)
from .spectral import SpectralSummary, conditioning_value, spectral_summary

log = logging.getLogger(__name__)

HOPF = "Hopf"
BT = "BT"
NEIMARK_SACKER = "NeimarkSacker"

SPECTRAL_TOL = 1e-10
BT_TOL = 1e-9
POSITIVE_FLOOR = 1e-8

_XTOL = 1e-15
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class LocalizationVerdict:
    containing_interval: tuple
    satisfies_principle: bool
    branch: str


@dataclass(frozen=True)
class BifurcationPoint:
    kind: str
    x_star: float
    state: PlanarState
    critical_param_name: str
    critical_param_value: float
    spectral: SpectralSummary
    verdict: LocalizationVerdict
    model: ModelInstance = field(repr=False, compare=False, default=None)

    def to_record(self) -> dict:
        s = self.spectral
        return {
            "kind": self.kind,
            "family": self.model.family.value if self.model is not None else None,
            "x_star": self.x_star,
            "state": [self.state.x, self.state.y],
            "critical_param": {"name": self.critical_param_name, "value": self.critical_param_value},
            "params": self.model.params.as_dict() if self.model is not None else None,
            "trace": s.trace,
            "det": s.det,
            "eigenvalues": [[lam.real, lam.imag] for lam in s.eigenvalues],
            "branch": self.verdict.branch,
            "containing_interval": list(self.verdict.containing_interval),
            "satisfies_principle": self.verdict.satisfies_principle,
        }


def localization_verdict(kind: str, profile: NullclineProfile, x: float) -> LocalizationVerdict:
    """Branch of the prey nullcline at x and whether it is the one prescribed for ``kind``."""
    branch = branch_of(profile, x)
    if kind == NEIMARK_SACKER:
        ok = branch == DESCENDING
    else:
        ok = branch == ASCENDING
    return LocalizationVerdict(containing_interval(profile, x), ok, branch)


def spectral_conditions_hold(kind: str, s: SpectralSummary, tol: float = SPECTRAL_TOL) -> bool:
    scale = s.scale
    if kind == HOPF:
        return abs(s.trace) <= tol * scale and s.det > 0.0
    if kind == BT:
        return abs(s.trace) <= tol * scale and abs(s.det) <= tol * scale
    if kind == NEIMARK_SACKER:
        return abs(s.det - 1.0) <= tol and abs(s.trace) < 2.0
    raise ValueError(f"unknown bifurcation kind {kind!r}")


def verify_point(point: BifurcationPoint, tol: float = SPECTRAL_TOL) -> bool:
    """Recompute the spectrum from the point's own model and state and re-check its conditions."""
    s = spectral_summary(point.model, point.state)
    return spectral_conditions_hold(point.kind, s, tol)


def make_point(kind, m: ModelInstance, state, param, profile=None, tol=SPECTRAL_TOL, strict=True):
    s = spectral_summary(m, state)
    if not spectral_conditions_hold(kind, s, tol):
        if strict:
            raise SpectralConditionFailure(
                f"{kind} conditions fail at x={state[0]!r}: trace={s.trace!r}, det={s.det!r}"
            )
        return None
    if profile is None:
        profile = nullcline_profile(m)
    verdict = localization_verdict(kind, profile, state[0])
    return BifurcationPoint(kind, float(state[0]), PlanarState(*state), param, float(m[param]), s, verdict, m)


# ---------------------------------------------------------------------------
# Bazykin


def bazykin_hopf_parameters(k0, b, x0, r, sigma, d=None) -> dict:
    """Full Bazykin parameter set at the Hopf point with prey coordinate k0/2.

    The carrying capacity is k = k0 + b + x0 and the predation rate a is the
    critical value. The predator mortality d is free in the construction; the
    default d = sigma y* / Q, Q = b (k0 + 2b + 2x0)/(k0 x0), keeps det > 0.
    e is then solved from the predator equation.
    """
    k = k0 + b + x0
    a0 = (k0 + 2.0 * b) ** 2 * (k0 + 2.0 * b + 2.0 * x0) * sigma / (4.0 * k0 * x0)
    x = 0.5 * k0
    y = k0 * r * x0 / ((k0 + 2.0 * b) * k * sigma)
    if d is None:
        q = b * (k0 + 2.0 * b + 2.0 * x0) / (k0 * x0)
        d = sigma * y / q
    e = (d + sigma * y) * (x + b) / (a0 * x)
    return {"r": r, "k": k, "a": a0, "b": b, "e": e, "d": d, "sigma": sigma}, (x, y)


def bazykin_det_closed_form(k0, b, x0, r, sigma, e) -> float:
    """e r x0 (k0 + 2b + 2x0) sigma/(k0 + b + x0).

    Kept for comparison only: it does not agree with the Jacobian determinant
    at the Hopf point in general (see the acceptance suite).
    """
    return e * r * x0 * (k0 + 2.0 * b + 2.0 * x0) * sigma / (k0 + b + x0)


def bazykin_hopf(k0, b, x0, r, sigma, d=None) -> BifurcationPoint:
    values, state = bazykin_hopf_parameters(k0, b, x0, r, sigma, d)
    m = ModelInstance.create(Family.BAZYKIN, **values)
    return make_point(HOPF, m, state, "a")


# ---------------------------------------------------------------------------
# Crowley-Martin


def crowley_martin_c0(a, b, d, k0, x):
    """Interference value at which the trace vanishes at prey density x."""
    return a * b * x * (k0 - 2.0 * b * x) / (d * (1.0 + b * x) ** 2 * (1.0 + k0 - b * x))


def _cm_c0_of(m: ModelInstance, x):
    p = m.params.values
    return crowley_martin_c0(p["a"], p["b"], p["d"], p["b"] * p["k"] - 1.0, x)


def crowley_martin_hopf(m: ModelInstance, x: float):
    """Hopf point at prey density x with c = c0(x) and gamma solved, or None.

    None when c0(x) <= 0, when c0 makes the parameters inadmissible, or when
    the determinant at the resulting equilibrium is not positive.
    """
    p = m.params.values
    if not 0.0 < x < p["k"]:
        raise OutOfDomain(f"x={x!r} outside (0, k={p['k']!r})")
    c0 = _cm_c0_of(m, x)
    if not c0 > 0.0:
        return None
    values = dict(p)
    values["c"] = c0
    if values["a"] <= c0 * values["rho"] or values["a"] - c0 * cm_h(values, x) <= 0.0:
        return None
    y = g_raw(m.family, values, x)
    values["gamma"] = conditioning_value(m.family, values, x, y)
    inst = ModelInstance.create(Family.CROWLEY_MARTIN, **values)
    lo, hi = admissible_interval(inst)
    if not lo < x < hi:
        return None
    s = spectral_summary(inst, (x, y))
    if abs(s.trace) > SPECTRAL_TOL * s.scale:
        raise SpectralConditionFailure(f"trace {s.trace!r} at c0={c0!r} does not vanish")
    if not s.det > 0.0:
        return None
    return make_point(HOPF, inst, (x, y), "c")


def cm_hopf_x(m: ModelInstance, c: float, panels: int = 512) -> list:
    """Prey coordinates x in (0, x_v) with c0(x) = c, ascending.

    c0 rises from 0 and returns to 0 at the vertex, so there are typically two
    solutions; the largest one is the branch that tends to x_v as c -> 0.
    """
    x_v = m["x_v"]
    xs = np.linspace(0.0, x_v, panels + 1)[1:-1]
    vals = _cm_c0_of(m, xs) - c
    roots = []
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            roots.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(lambda t: _cm_c0_of(m, t) - c, xs[i], xs[i + 1], xtol=_XTOL, rtol=_RTOL))
    if len(vals) and vals[-1] * (0.0 - c) < 0.0:
        # last panel up to the vertex where c0 = 0
        roots.append(brentq(lambda t: _cm_c0_of(m, t) - c, xs[-1], x_v, xtol=_XTOL, rtol=_RTOL))
    return sorted(roots)


# ---------------------------------------------------------------------------
# HollingIV


class HopfBranchSample(NamedTuple):
    y0: float
    delta_eff0: float
    beta0: float
    det: float


def _h4_values(h10, beta=1.0, delta=1.0, h2=0.0):
    return {"h10": h10, "h2": h2, "delta": delta, "beta": beta}


def holling4_hopf_branch(h10: float, x: float) -> HopfBranchSample:
    """Eliminate y, delta_eff and beta from prey equation, predator equation and trace = 0."""
    p = _h4_values(h10)
    y0 = g_raw(Family.HOLLING_IV, p, x)
    if not y0 > 0.0:
        raise NullclineNonpositive(f"prey nullcline non-positive at x={x!r} (g={y0!r})")
    (j11, _), _ = jacobian_entries(Family.HOLLING_IV, p, x, y0, map_form=False)
    beta0 = x * j11 / y0
    delta0 = beta0 * y0 / x
    p.update(beta=beta0, delta=delta0)
    (a11, a12), (a21, a22) = jacobian_entries(Family.HOLLING_IV, p, x, y0, map_form=False)
    return HopfBranchSample(y0, delta0, beta0, a11 * a22 - a12 * a21)


@dataclass(frozen=True)
class HopfWindowReport:
    h10: float
    x_min: float
    x_max: float
    x_hi: float
    beta_at_min: float
    beta_at_max: float
    inside: tuple
    left: tuple
    right: tuple


def holling4_hopf_window(h10: float, n_samples: int = 50, endpoint_tol: float = 1e-8) -> HopfWindowReport:
    """Check the sign pattern of the Hopf branch on the three regions cut by the critical points.

    Inside (x_min, x_max) all four quantities must be positive; left of x_min
    beta0 < 0; right of x_max (up to the x-intercept) y0 < 0 or det <= 0.
    """
    if n_samples < 3:
        raise ValueError("n_samples must be at least 3")
    s = 3.0 + h10
    x_min, x_max, x_hi = 0.5 / s, 1.5 / s, 3.0 / s

    def interior(lo, hi):
        return np.linspace(lo, hi, n_samples + 2)[1:-1]

    def sample(x):
        try:
            return float(x), holling4_hopf_branch(h10, float(x))
        except NullclineNonpositive:
            return float(x), HopfBranchSample(g_raw(Family.HOLLING_IV, _h4_values(h10), float(x)), math.nan, math.nan, math.nan)

    inside = tuple(sample(x) for x in interior(x_min, x_max))
    left = tuple(sample(x) for x in interior(0.0, x_min))
    right = tuple(sample(x) for x in interior(x_max, x_hi))
    for x, q in inside:
        if not (q.y0 > 0 and q.delta_eff0 > 0 and q.beta0 > 0 and q.det > 0):
            raise PatternViolation(f"non-positive Hopf branch quantity inside the window at x={x!r}", (x, q))
    for x, q in left:
        if not q.beta0 < 0:
            raise PatternViolation(f"beta0 not negative left of x_min at x={x!r}", (x, q))
    for x, q in right:
        if not (q.y0 < 0 or q.det <= 0):
            raise PatternViolation(f"Hopf branch admissible right of x_max at x={x!r}", (x, q))
    b_min = holling4_hopf_branch(h10, x_min).beta0
    b_max = holling4_hopf_branch(h10, x_max).beta0
    for x, b0 in ((x_min, b_min), (x_max, b_max)):
        if abs(b0) > endpoint_tol:
            raise PatternViolation(f"beta0={b0!r} does not vanish at critical point x={x!r}", (x, b0))
    return HopfWindowReport(h10, x_min, x_max, x_hi, b_min, b_max, inside, left, right)


def _bt_residual(x, u):
    """Residuals of prey eq, predator eq, trace, det for unknowns u = (y, delta_eff, beta, h10)."""
    y, delta, beta, h10 = u
    p = _h4_values(h10, beta=beta, delta=delta)
    s = 3.0 + h10
    h1, a = h10 / s, 9.0 / (4.0 * s * s)
    w = a + x * x
    f1 = 1.0 - x - y / w - h1
    f2 = delta - beta * y / x
    (j11, j12), (j21, j22) = jacobian_entries(Family.HOLLING_IV, p, x, y, map_form=False)
    return np.array([f1, f2, j11 + j22, j11 * j22 - j12 * j21]), abs(j11) + abs(j12) + abs(j21) + abs(j22)


def _bt_newton(x, u0, tol=1e-12, max_iter=60, max_halvings=30):
    u = np.array(u0, dtype=float)
    res, scale = _bt_residual(x, u)
    norm = np.max(np.abs(res))
    for _ in range(max_iter):
        if norm <= tol * max(1.0, scale):
            return u
        jac = np.empty((4, 4))
        for j in range(4):
            h = 1e-7 * max(1.0, abs(u[j]))
            up, um = u.copy(), u.copy()
            up[j] += h
            um[j] -= h
            jac[:, j] = (_bt_residual(x, up)[0] - _bt_residual(x, um)[0]) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, res)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jac, res, rcond=None)[0]
        lam = 1.0
        for _ in range(max_halvings):
            cand = u - lam * step
            if cand[3] > -3.0 and cand[0] > 0.0:
                r_c, s_c = _bt_residual(x, cand)
                n_c = np.max(np.abs(r_c))
                if math.isfinite(n_c) and n_c < norm:
                    u, res, scale, norm = cand, r_c, s_c, n_c
                    break
            lam *= 0.5
        else:
            break
    if norm <= tol * max(1.0, scale):
        return u
    raise NoConvergence(f"BT Newton stalled at x0={x!r} with residual {norm!r}")


def _bt_seeds(x, n=8):
    seeds = []
    for h10 in np.geomspace(0.05, 30.0, n):
        try:
            q = holling4_hopf_branch(float(h10), x)
        except NullclineNonpositive:
            seeds.append((0.1, 0.1, 0.1, float(h10)))
            continue
        seeds.append((q.y0, abs(q.delta_eff0) + 1e-3, abs(q.beta0) + 1e-3, float(h10)))
    return seeds


def holling4_bt(x0_grid, failures: list | None = None, seeds: int = 8) -> list:
    """Solve prey eq, predator eq, trace = 0, det = 0 for (y, delta_eff, beta, h10) at each x0.

    Only solutions with every unknown positive are returned. Grid points with no
    converged start, and converged but inadmissible solutions, are appended to
    ``failures`` as ``(x0, reason)`` when a list is passed.
    """
    out = []
    for x0 in x0_grid:
        x0 = float(x0)
        found, reasons = [], []
        for u0 in _bt_seeds(x0, seeds):
            try:
                u = _bt_newton(x0, u0)
            except NoConvergence as exc:
                reasons.append(str(exc))
                continue
            y, delta, beta, h10 = (float(v) for v in u)
            if min(y, delta, beta, h10) <= POSITIVE_FLOOR:
                reasons.append(f"inadmissible solution y={y!r} delta={delta!r} beta={beta!r} h10={h10!r}")
                continue
            if any(abs(h10 - f[3]) <= 1e-8 * max(1.0, h10) and abs(beta - f[2]) <= 1e-8 * max(1.0, beta) for f in found):
                continue
            found.append((y, delta, beta, h10))
        for y, delta, beta, h10 in sorted(found, key=lambda f: f[3]):
            m = ModelInstance.create(Family.HOLLING_IV, h10=h10, h2=0.0, delta=delta, beta=beta)
            point = make_point(BT, m, (x0, y), "beta", tol=BT_TOL, strict=False)
            if point is None:
                reasons.append(f"BT conditions not met on re-verification at h10={h10!r}")
                continue
            out.append(point)
        if not found and failures is not None:
            failures.append((x0, reasons[-1] if reasons else "no start converged"))
    return out


# ---------------------------------------------------------------------------
# nullcline scans: move along the prey nullcline, keep (x, g(x)) an equilibrium
# by solving the conditioning parameter, and look for the bifurcation condition


def _conditioned_jacobian(family, values, xs):
    y = g_raw(family, values, xs)
    cond = conditioning_value(family, values, xs, y)
    v = dict(values)
    v[CONDITIONING_PARAMETER[family]] = cond
    (j11, j12), (j21, j22) = jacobian_entries(family, v, xs, y, map_form=False)
    return y, cond, j11 + j22, j11 * j22 - j12 * j21


def _hopf_fn(family, values):
    def fn(x):
        with np.errstate(all="ignore"):
            return _conditioned_jacobian(family, values, x)[2]
    return fn


def _ns_fn(family, values):
    # det of the map minus one = trace + det of the flow
    def fn(x):
        with np.errstate(all="ignore"):
            _, _, tr, det = _conditioned_jacobian(family, values, x)
        return tr + det
    return fn


def _scan_sign_changes(fn, valid_fn, lo, hi, panels):
    xs = np.linspace(lo, hi, panels + 1)[1:-1]
    with np.errstate(all="ignore"):
        vals = fn(xs)
        ok = valid_fn(xs) & np.isfinite(vals)
    roots = []
    for i in range(len(xs) - 1):
        if not (ok[i] and ok[i + 1]):
            continue
        if vals[i] == 0.0:
            roots.append(float(xs[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(brentq(fn, xs[i], xs[i + 1], xtol=_XTOL, rtol=_RTOL))
    return roots


def _valid_fn(family, values):
    def ok(xs):
        y, cond, _, _ = _conditioned_jacobian(family, values, xs)
        return (y > 0.0) & (cond > 0.0) & np.isfinite(cond)
    return ok


def _points_along_nullcline(m: ModelInstance, kind: str, panels: int, profile=None) -> list:
    fam, p = m.family, m.params.values
    if profile is None:
        profile = nullcline_profile(m)
    fn = _ns_fn(fam, p) if kind == NEIMARK_SACKER else _hopf_fn(fam, p)
    roots = _scan_sign_changes(fn, _valid_fn(fam, p), profile.x_lo, profile.x_hi, panels)
    cond_name = CONDITIONING_PARAMETER[fam]
    param = DESIGNATED_PARAMETER[fam]
    points = []
    for x in roots:
        y = g_raw(fam, p, x)
        inst = m.with_params(**{cond_name: conditioning_value(fam, p, x, y)})
        point = make_point(kind, inst, (x, y), param, profile, strict=False)
        if point is not None:
            points.append(point)
    return points


def hopf_points_at(m: ModelInstance, panels: int = 512, profile=None) -> list:
    """Hopf points on the prey nullcline of m, with the conditioning parameter solved at each."""
    if m.family.is_map:
        raise ValueError("Hopf points are defined for flows; use ns_points_at for the map")
    return _points_along_nullcline(m, HOPF, panels, profile)


def ns_points_at(m: ModelInstance, panels: int = 512, profile=None) -> list:
    """Neimark-Sacker points on the nullcline of the discrete model, gamma solved at each."""
    if not m.family.is_map:
        raise ValueError("Neimark-Sacker points are defined for the discrete model")
    return _points_along_nullcline(m, NEIMARK_SACKER, panels, profile)


def bt_points_at(m: ModelInstance, panels: int = 512, profile=None) -> list:
    """Points where the conditioned trace vanishes together with the determinant."""
    fam, p = m.family, m.params.values
    if profile is None:
        profile = nullcline_profile(m)
    roots = _scan_sign_changes(_hopf_fn(fam, p), _valid_fn(fam, p), profile.x_lo, profile.x_hi, panels)
    cond_name = CONDITIONING_PARAMETER[fam]
    out = []
    for x in roots:
        y = g_raw(fam, p, x)
        inst = m.with_params(**{cond_name: conditioning_value(fam, p, x, y)})
        point = make_point(BT, inst, (x, y), DESIGNATED_PARAMETER[fam], profile, tol=BT_TOL, strict=False)
        if point is not None:
            out.append(point)
    return out


_NS_FREE = ("c", "rho", "d")


def _param_grid(values, free, x, n=160):
    if free == "c":
        limit = values["a"] / values["rho"]
        h = cm_h(values, x)
        if h > 0.0:
            limit = min(limit, values["a"] / h)
        return np.geomspace(1e-8 * limit, limit * (1.0 - 1e-9), n)
    return np.geomspace(1e-4, 1e4, n)


def ns_locus(m: ModelInstance, free_param: str = "c", x_range=None, panels: int = 256) -> list:
    """Neimark-Sacker points traced over prey density with one parameter left free.

    At each x the conditioning parameter gamma makes (x, g(x)) a fixed point and
    det of the map = 1 is solved for ``free_param`` by bracketing and bisection.
    Points with |trace of the map| >= 2 or inadmissible parameters are dropped.
    Output is ordered by x then by parameter value.
    """
    if not m.family.is_map:
        raise ValueError("ns_locus needs the discrete Crowley-Martin model")
    if free_param not in _NS_FREE:
        raise ValueError(f"free parameter must be one of {_NS_FREE}, got {free_param!r}")
    fam = m.family
    base = dict(m.params.values)
    if x_range is None:
        x_range = (0.0, base["k"])
    xs = np.linspace(x_range[0], x_range[1], panels + 2)[1:-1]
    points = []
    for x in xs:
        x = float(x)

        def phi(v):
            vals = dict(base)
            vals[free_param] = v
            with np.errstate(all="ignore"):
                y, cond, tr, det = _conditioned_jacobian(fam, vals, x)
            ok = (y > 0.0) & (cond > 0.0) & np.isfinite(cond)
            return np.where(ok, tr + det, np.nan)

        grid = _param_grid(base, free_param, x)
        vals = phi(grid)
        for i in range(len(grid) - 1):
            v0, v1 = vals[i], vals[i + 1]
            if not (np.isfinite(v0) and np.isfinite(v1)) or v0 * v1 > 0.0:
                continue
            root = float(grid[i]) if v0 == 0.0 else brentq(
                lambda v: float(phi(v)), grid[i], grid[i + 1], xtol=1e-12 * grid[i + 1], rtol=_RTOL
            )
            point = _ns_point(m, free_param, root, x)
            if point is not None:
                points.append(point)
    return sorted(points, key=lambda pt: (pt.x_star, pt.critical_param_value))


def _ns_point(m, free_param, value, x):
    fam = m.family
    vals = dict(m.params.values)
    vals[free_param] = value
    y = g_raw(fam, vals, x)
    vals["gamma"] = conditioning_value(fam, vals, x, y)
    try:
        inst = ModelInstance.create(fam, **vals)
    except ValueError:
        return None
    lo, hi = admissible_interval(inst)
    if not lo < x < hi:
        return None
    return make_point(NEIMARK_SACKER, inst, (x, y), free_param, strict=False)


# ---------------------------------------------------------------------------
# transversality


def _crossing_measure(m, guess, kind):
    state = track_equilibrium(m, guess)
    s = spectral_summary(m, state)
    if kind == NEIMARK_SACKER:
        return max(abs(lam) for lam in s.eigenvalues)
    return max(lam.real for lam in s.eigenvalues)


def hopf_transversality(point: BifurcationPoint, m: ModelInstance | None = None) -> float:
    """d Re(lambda)/d p (flows) or d |lambda|/d p (maps) at the critical parameter value.

    The equilibrium is re-tracked at p +- step with every other parameter held
    at the point's values; step = 1e-5 (1 + |p|).
    """
    m = m or point.model
    name, value = point.critical_param_name, float(point.critical_param_value)
    step = 1e-5 * (1.0 + abs(value))
    up = _crossing_measure(m.with_params(**{name: value + step}), point.state, point.kind)
    down = _crossing_measure(m.with_params(**{name: value - step}), point.state, point.kind)
    deriv = (up - down) / (2.0 * step)
    if abs(deriv) < 1e-8:
        raise DegenerateCrossing(f"eigenvalues do not cross: derivative {deriv!r} in {name}")
    return deriv


def loci_for(m: ModelInstance, kind: str, profile=None, panels: int = 512) -> list:
    """Dispatch used by the sweep harness and the CLI."""
    if kind == HOPF:
        return hopf_points_at(m, panels, profile)
    if kind == NEIMARK_SACKER:
        return ns_points_at(m, panels, profile)
    if kind == BT:
        return bt_points_at(m, panels, profile)
    raise ValueError(f"unknown locus kind {kind!r}")

