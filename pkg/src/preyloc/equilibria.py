"""Coexistence equilibria as intersections of the prey and predator nullclines."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import NoConvergence
from .models import Family, ModelInstance, PlanarState, jacobian_entries, residual_scale, vector_field
from .nullcline import (
    NullclineProfile,
    branch_index,
    branch_of,
    g_raw,
    nullcline_profile,
)

log = logging.getLogger(__name__)

SCAN_PANELS = 512
REFINED_PANELS = 4096
RESIDUAL_TOL = 1e-10
MERGE_TOL = 1e-9


@dataclass(frozen=True)
class Equilibrium:
    state: PlanarState
    residual_norm: float
    branch: str
    inter_critical_interval: int
    scale: float = 1.0

    @property
    def x(self) -> float:
        return self.state.x

    @property
    def y(self) -> float:
        return self.state.y


def _predator_y_raw(family: Family, p, x):
    """Predator-nullcline height, continued to non-positive values (no clipping)."""
    if family is Family.BAZYKIN:
        return (p["e"] * p["a"] * x / (x + p["b"]) - p["d"]) / p["sigma"]
    if family is Family.HOLLING_IV:
        return (p["delta"] - p["h2"]) * x / p["beta"]
    return (p["gamma"] * p["a"] * x / (p["d"] * (1.0 + p["b"] * x)) - 1.0) / p["c"]


def predator_nullcline_y(m: ModelInstance, x: float):
    """Unique positive predator density with y' = 0 at prey density ``x``, else None.

    For Crowley-Martin with c = 0 the predator nullcline is a vertical line and
    has no unique height, so None is returned.
    """
    if x <= 0.0:
        return None
    if m.family in (Family.CROWLEY_MARTIN, Family.DISCRETE_CROWLEY_MARTIN) and m["c"] == 0.0:
        return None
    y = _predator_y_raw(m.family, m.params.values, x)
    return y if y > 0.0 else None


def _polish(m: ModelInstance, x: float, y: float) -> PlanarState:
    """Two-dimensional Newton refinement; keeps the input if it does not help."""
    p = m.params.values
    fam = m.family
    best = (x, y)
    best_res = max(abs(v) for v in vector_field(m, best))
    for _ in range(3):
        f1, f2 = vector_field(m, (x, y))
        (a11, a12), (a21, a22) = jacobian_entries(fam, p, x, y, map_form=False)
        det = a11 * a22 - a12 * a21
        if det == 0.0 or not math.isfinite(det):
            break
        x = x - (a22 * f1 - a12 * f2) / det
        y = y - (-a21 * f1 + a11 * f2) / det
        if not (x > 0.0 and y > 0.0):
            break
        res = max(abs(v) for v in vector_field(m, (x, y)))
        if res < best_res:
            best, best_res = (x, y), res
        else:
            break
    return PlanarState(*best)


def _scan_roots(fun, lo, hi, panels):
    xs = np.linspace(lo, hi, panels + 1)
    if lo > 0.0:
        xs[0] = lo + (hi - lo) * 1e-9
    with np.errstate(all="ignore"):
        vals = fun(xs)
    roots = []
    for i in range(panels):
        v0, v1 = vals[i], vals[i + 1]
        if not (math.isfinite(v0) and math.isfinite(v1)):
            continue
        if v0 == 0.0 and 0 < i:
            roots.append(float(xs[i]))
        elif v0 * v1 < 0.0:
            roots.append(brentq(fun, xs[i], xs[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return roots, (hi - lo) / panels


def _cm_classical_root(m: ModelInstance, lo, hi):
    # c = 0: predator nullcline is the vertical line gamma a x/(1 + b x) = d
    p = m.params.values
    den = p["gamma"] * p["a"] - p["d"] * p["b"]
    if den <= 0.0:
        return []
    x = p["d"] / den
    return [x] if lo < x < hi else []


def find_coexistence_equilibria(m: ModelInstance, profile: NullclineProfile | None = None) -> list:
    """All interior equilibria, ordered by prey density."""
    if profile is None:
        profile = nullcline_profile(m)
    fam, p = m.family, m.params.values
    lo, hi = profile.x_lo, profile.x_hi

    if fam in (Family.CROWLEY_MARTIN, Family.DISCRETE_CROWLEY_MARTIN) and p["c"] == 0.0:
        xs = _cm_classical_root(m, lo, hi)
    else:
        def diff(x):
            return g_raw(fam, p, x) - _predator_y_raw(fam, p, x)

        xs, width = _scan_roots(diff, lo, hi, SCAN_PANELS)
        if any(b - a < 4.0 * width for a, b in zip(xs[:-1], xs[1:])):
            xs, _ = _scan_roots(diff, lo, hi, REFINED_PANELS)

    candidates = []
    for x in xs:
        if not lo < x < hi:
            continue
        y = g_raw(fam, p, x)
        if not y > 0.0:
            continue
        state = _polish(m, x, y)
        scale = residual_scale(m, state)
        res = max(abs(v) for v in vector_field(m, state))
        if res > RESIDUAL_TOL * scale:
            log.warning("dropping equilibrium candidate x=%r with residual %r (scale %r)", x, res, scale)
            continue
        candidates.append((state, res, scale))

    merged = []
    for state, res, scale in sorted(candidates, key=lambda c: c[0].x):
        if merged and abs(state.x - merged[-1][0].x) <= MERGE_TOL * max(1.0, abs(state.x)):
            if res < merged[-1][1]:
                merged[-1] = (state, res, scale)
            continue
        merged.append((state, res, scale))

    return [
        Equilibrium(state, res, branch_of(profile, state.x), branch_index(profile, state.x), scale)
        for state, res, scale in merged
    ]


def track_equilibrium(m: ModelInstance, guess, max_iter: int = 50) -> PlanarState:
    """Newton iteration from ``guess`` to the nearby interior equilibrium of m."""
    fam, p = m.family, m.params.values
    x, y = float(guess[0]), float(guess[1])
    for _ in range(max_iter):
        f1, f2 = vector_field(m, (x, y))
        scale = residual_scale(m, (x, y))
        if max(abs(f1), abs(f2)) <= 1e-13 * scale:
            return PlanarState(x, y)
        (a11, a12), (a21, a22) = jacobian_entries(fam, p, x, y, map_form=False)
        det = a11 * a22 - a12 * a21
        if det == 0.0 or not math.isfinite(det):
            break
        x, y = x - (a22 * f1 - a12 * f2) / det, y - (-a21 * f1 + a11 * f2) / det
        if not (x > 0.0 and y > 0.0):
            break
    res = max(abs(v) for v in vector_field(m, (x, y)))
    if x > 0.0 and y > 0.0 and res <= RESIDUAL_TOL * residual_scale(m, (x, y)):
        return PlanarState(x, y)
    raise NoConvergence(f"equilibrium tracking from {tuple(guess)!r} failed (residual {res!r})")
