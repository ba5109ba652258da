"""Trace, determinant and eigenvalues of equilibrium Jacobians, and rigidity at nullcline critical points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoCEPAtCriticalPoint, OutOfDomain
from .models import (
    CONDITIONING_PARAMETER,
    DESIGNATED_PARAMETER,
    Family,
    ModelInstance,
    jacobian_entries,
)
from .nullcline import CriticalPoint, cm_h, g_raw, nullcline_value

DEGENERATE_DISC = 1e-14
BLOCK_TOL = 1e-10


@dataclass(frozen=True)
class SpectralSummary:
    J11: float
    J12: float
    J21: float
    J22: float
    trace: float
    det: float
    discriminant: float
    eigenvalues: tuple
    degenerate: bool = False

    @property
    def scale(self) -> float:
        """Sum of absolute Jacobian entries; the reference for trace/det tolerances."""
        return abs(self.J11) + abs(self.J12) + abs(self.J21) + abs(self.J22)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.J11, self.J12], [self.J21, self.J22]])

    def moduli(self) -> tuple:
        return tuple(abs(lam) for lam in self.eigenvalues)


def summarize_matrix(j11, j12, j21, j22) -> SpectralSummary:
    tr = j11 + j22
    det = j11 * j22 - j12 * j21
    disc = tr * tr - 4.0 * det
    degenerate = abs(disc) <= DEGENERATE_DISC * tr * tr
    if disc >= 0.0:
        root = math.sqrt(disc)
        # avoid cancellation: larger-magnitude root first, the other from the product
        big = 0.5 * (tr + math.copysign(root, tr)) if tr != 0.0 else 0.5 * root
        small = det / big if big != 0.0 else 0.5 * (tr - root)
        lam = tuple(sorted((complex(big), complex(small)), key=lambda z: z.real, reverse=True))
    else:
        im = 0.5 * math.sqrt(-disc)
        lam = (complex(0.5 * tr, im), complex(0.5 * tr, -im))
    return SpectralSummary(j11, j12, j21, j22, tr, det, disc, lam, degenerate)


def spectral_summary(m: ModelInstance, s) -> SpectralSummary:
    x, y = s
    (j11, j12), (j21, j22) = jacobian_entries(m.family, m.params.values, x, y)
    return summarize_matrix(float(j11), float(j12), float(j21), float(j22))


def summary_from_values(family, values, x, y, *, map_form=None) -> SpectralSummary:
    """Spectral summary on a raw (unvalidated) parameter mapping."""
    (j11, j12), (j21, j22) = jacobian_entries(family, values, x, y, map_form=map_form)
    return summarize_matrix(j11, j12, j21, j22)


def conditioning_value(family, values, x, y):
    """Value of the conditioning parameter making (x, y) an interior equilibrium.

    ``y`` must lie on the prey nullcline. Bazykin solves e, HollingIV solves
    delta (keeping h2), Crowley-Martin solves gamma.
    """
    family = Family.parse(family)
    p = values
    if family is Family.BAZYKIN:
        return (p["d"] + p["sigma"] * y) * (x + p["b"]) / (p["a"] * x)
    if family is Family.HOLLING_IV:
        return p["h2"] + p["beta"] * y / x
    return p["d"] * (1.0 + p["b"] * x) * (1.0 + p["c"] * y) / (p["a"] * x)


def conditioned_values(family, values, x):
    """(values with the conditioning parameter solved, y) at nullcline point x, or None.

    None when g(x) is not positive or the solved parameter is not positive.
    """
    family = Family.parse(family)
    y = g_raw(family, values, x)
    if not (y > 0.0 and math.isfinite(y)):
        return None
    val = conditioning_value(family, values, x, y)
    if not (val > 0.0 and math.isfinite(val)):
        return None
    out = dict(values)
    out[CONDITIONING_PARAMETER[family]] = val
    return out, y


def condition_equilibrium(m: ModelInstance, x: float):
    """Model with the conditioning parameter chosen so (x, g(x)) is a coexistence equilibrium.

    Returns ``(model, state)``; raises OutOfDomain when no positive value exists.
    """
    y = nullcline_value(m, x)
    res = conditioned_values(m.family, m.params.values, x)
    if res is None:
        name = CONDITIONING_PARAMETER[m.family]
        raise OutOfDomain(f"no positive {name} makes x={x!r} (g={y!r}) a coexistence equilibrium")
    values, y = res
    name = CONDITIONING_PARAMETER[m.family]
    return m.with_params(**{name: values[name]}), (x, y)


def trace_on_nullcline(m: ModelInstance, x: float) -> tuple:
    """(trace, prey diagonal part, predator diagonal part) at (x, g(x)).

    The predator part is evaluated at the equilibrium conditioning, so for
    Crowley-Martin it reduces to -d c h(x)/a and for HollingIV to -beta g/x.
    For the discrete model the parts are the map diagonal entries 1 + J.
    """
    fam, p = m.family, m.params.values
    y = nullcline_value(m, x)
    if fam is Family.BAZYKIN:
        (j11, _), _ = jacobian_entries(fam, p, x, y, map_form=False)
        j22 = -p["sigma"] * y
    elif fam is Family.HOLLING_IV:
        (j11, _), _ = jacobian_entries(fam, p, x, y, map_form=False)
        j22 = -p["beta"] * y / x
    else:
        # J11 on the nullcline, written with h so it is manifestly c-free
        j11 = p["rho"] * x * (p["b"] * p["k"] - 1.0 - 2.0 * p["b"] * x) / (p["k"] * (1.0 + p["b"] * x))
        j22 = -p["d"] * p["c"] * cm_h(p, x) / p["a"]
    if fam.is_map:
        j11, j22 = 1.0 + j11, 1.0 + j22
    return j11 + j22, j11, j22


@dataclass(frozen=True)
class RigiditySample:
    param_value: float
    state: tuple
    summary: SpectralSummary


@dataclass(frozen=True)
class RigidityReport:
    location: CriticalPoint
    param_name: str
    J11_at_critical: float
    trace_at_critical: float
    det_at_critical: float
    hopf_blocked: bool
    ns_blocked: object  # bool for maps, None for flows
    samples: tuple = field(default_factory=tuple)
    skipped: tuple = field(default_factory=tuple)


def rigidity_report(m: ModelInstance, cp: CriticalPoint, samples, param: str | None = None) -> RigidityReport:
    """Spectrum at the critical-point equilibrium across bifurcation-parameter samples.

    For each sample the conditioning parameter is re-solved so that the critical
    point carries an equilibrium; samples where that is impossible are skipped.
    Worst-case (largest) trace and the det closest to 1 (maps) are reported.
    """
    fam = m.family
    param = param or DESIGNATED_PARAMETER[fam]
    x = cp.x
    done, skipped = [], []
    for value in sorted(float(v) for v in samples):
        values = dict(m.params.values)
        values[param] = value
        if fam in (Family.CROWLEY_MARTIN, Family.DISCRETE_CROWLEY_MARTIN) and values["c"] * cm_h(values, x) >= values["a"]:
            skipped.append((value, "pole of the prey nullcline"))
            continue
        res = conditioned_values(fam, values, x)
        if res is None:
            skipped.append((value, f"no positive {CONDITIONING_PARAMETER[fam]}"))
            continue
        cond, y = res
        done.append(RigiditySample(value, (x, y), summary_from_values(fam, cond, x, y)))
    if not done:
        raise NoCEPAtCriticalPoint(f"no sampled {param} value supports an equilibrium at x={x!r}")

    worst = max(done, key=lambda r: r.summary.trace - (2.0 if fam.is_map else 0.0))
    flow_traces = [r.summary.trace - (2.0 if fam.is_map else 0.0) for r in done]
    hopf_blocked = all(t < -BLOCK_TOL * r.summary.scale for t, r in zip(flow_traces, done))
    ns_blocked = None
    if fam.is_map:
        ns_blocked = all(abs(r.summary.det - 1.0) > BLOCK_TOL for r in done)
        worst = min(done, key=lambda r: abs(r.summary.det - 1.0))
    s = worst.summary
    return RigidityReport(cp, param, s.J11, s.trace, s.det, hopf_blocked, ns_blocked, tuple(done), tuple(skipped))


def eigen_crossing_measure(summary: SpectralSummary, is_map: bool) -> float:
    """Re(lambda) of the leading pair for flows, |lambda| for maps."""
    if is_map:
        return max(abs(lam) for lam in summary.eigenvalues)
    return max(lam.real for lam in summary.eigenvalues)


def eigen_identity_error(summary: SpectralSummary) -> float:
    """Relative mismatch of eigenvalue sum/product against trace/det."""
    l1, l2 = summary.eigenvalues
    s_err = abs((l1 + l2) - summary.trace) / max(1.0, abs(summary.trace))
    p_err = abs(l1 * l2 - summary.det) / max(1.0, abs(summary.det))
    return max(s_err, p_err)


__all__ = [
    "SpectralSummary",
    "RigidityReport",
    "RigiditySample",
    "spectral_summary",
    "summarize_matrix",
    "summary_from_values",
    "conditioning_value",
    "conditioned_values",
    "condition_equilibrium",
    "trace_on_nullcline",
    "rigidity_report",
    "eigen_crossing_measure",
    "eigen_identity_error",
]
