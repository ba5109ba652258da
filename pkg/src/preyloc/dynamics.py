"""Fixed-step RK4 flows, map iteration and orbit classification near a reference equilibrium."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibria import track_equilibrium
from .errors import InsufficientSamples, NonFiniteState
from .models import Family, ModelInstance, PlanarState

CONVERGES = "ConvergesToEquilibrium"
LIMIT_CYCLE = "LimitCycle"
INVARIANT_CIRCLE = "InvariantCircle"
DIVERGENT = "Divergent"
UNDETERMINED = "Undetermined"

DECAY_SLOPE = 1e-4
MIN_RETURNS = 5
MIN_AMPLITUDE = 1e-6
MIN_SAMPLES = 1000
BLOWUP = 1e8


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n, 2)
    step: float
    method: str
    is_map: bool = False
    clipped: bool = False
    divergent: bool = False
    max_undershoot: float = 0.0

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> PlanarState:
        return PlanarState(*self.states[-1])


@dataclass(frozen=True)
class OscillationVerdict:
    kind: str
    amplitude: float
    period_estimate: float | None = None
    decay_slope: float | None = None
    returns: int = 0
    details: dict = field(default_factory=dict, compare=False)


def _fast_field(m: ModelInstance):
    """Right-hand side specialised on scalar floats for the integration hot loop."""
    p = m.params.values
    fam = m.family
    if fam is Family.BAZYKIN:
        r, k, a, b, e, d, s = (p[n] for n in ("r", "k", "a", "b", "e", "d", "sigma"))

        def f(x, y):
            pred = a * x * y / (x + b)
            return r * x * (1.0 - x / k) - pred, e * pred - d * y - s * y * y

    elif fam is Family.HOLLING_IV:
        h10 = p["h10"]
        sc = 3.0 + h10
        h1, a = h10 / sc, 9.0 / (4.0 * sc * sc)
        delta, beta, h2 = p["delta"], p["beta"], p["h2"]

        def f(x, y):
            dx = x * (1.0 - x) - x * y / (a + x * x) - h1 * x
            if x <= 0.0:
                return dx, (0.0 if y == 0.0 else -math.inf)
            return dx, y * (delta - beta * y / x) - h2 * y

    else:
        rho, k, a, b, c, gamma, d = (p[n] for n in ("rho", "k", "a", "b", "c", "gamma", "d"))

        def f(x, y):
            resp = a * x * y / ((1.0 + b * x) * (1.0 + c * y))
            return rho * x * (1.0 - x / k) - resp, gamma * resp - d * y

    return f


def _clip(x, y, info):
    if x < 0.0 or y < 0.0:
        info["clipped"] = True
        info["under"] = max(info["under"], -min(x, y))
        x, y = max(x, 0.0), max(y, 0.0)
    return x, y


def integrate_flow(m: ModelInstance, s0, t_end: float, dt: float, max_samples: int = 40000) -> Trajectory:
    """Classical fixed-step fourth-order Runge-Kutta.

    At most ``max_samples`` states are stored (evenly strided); the integration
    itself always uses step ``dt``. Overflow stops the run with ``divergent``.
    """
    if m.family.is_map:
        raise ValueError("integrate_flow needs a flow family; use iterate_map")
    if not (dt > 0.0 and t_end > 0.0):
        raise ValueError("dt and t_end must be positive")
    x, y = float(s0[0]), float(s0[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise NonFiniteState(f"non-finite initial state {(x, y)!r}")
    f = _fast_field(m)
    n = int(round(t_end / dt))
    stride = max(1, -(-n // max_samples))
    times, xs, ys = [0.0], [x], [y]
    info = {"clipped": False, "under": 0.0}
    divergent = False
    h2, h6 = 0.5 * dt, dt / 6.0
    for i in range(1, n + 1):
        k1x, k1y = f(x, y)
        k2x, k2y = f(x + h2 * k1x, y + h2 * k1y)
        k3x, k3y = f(x + h2 * k2x, y + h2 * k2y)
        k4x, k4y = f(x + dt * k3x, y + dt * k3y)
        x = x + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        if not (math.isfinite(x) and math.isfinite(y)) or abs(x) + abs(y) > BLOWUP:
            divergent = True
            break
        x, y = _clip(x, y, info)
        if i % stride == 0 or i == n:
            times.append(i * dt)
            xs.append(x)
            ys.append(y)
    return Trajectory(
        np.array(times), np.column_stack([xs, ys]), dt, "RK4", False,
        info["clipped"], divergent, info["under"],
    )


def iterate_map(m: ModelInstance, s0, n: int) -> Trajectory:
    """Exact iteration (x, y) -> (x, y) + F(x, y)."""
    if not m.family.is_map:
        raise ValueError("iterate_map needs the discrete family")
    if n < 1:
        raise ValueError("n must be at least 1")
    x, y = float(s0[0]), float(s0[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise NonFiniteState(f"non-finite initial state {(x, y)!r}")
    f = _fast_field(m)
    xs, ys = [x], [y]
    info = {"clipped": False, "under": 0.0}
    divergent = False
    for _ in range(n):
        dx, dy = f(x, y)
        x, y = x + dx, y + dy
        if not (math.isfinite(x) and math.isfinite(y)) or abs(x) + abs(y) > BLOWUP:
            divergent = True
            break
        x, y = _clip(x, y, info)
        xs.append(x)
        ys.append(y)
    return Trajectory(
        np.arange(len(xs), dtype=float), np.column_stack([xs, ys]), 1.0, "map", True,
        info["clipped"], divergent, info["under"],
    )


def _section_returns(t, x, y, ref):
    """Crossings of x = ref.x with x increasing; returns (times, signed offsets along the section)."""
    u = x - ref[0]
    idx = np.nonzero((u[:-1] < 0.0) & (u[1:] >= 0.0))[0]
    w = u[idx] / (u[idx] - u[idx + 1])
    tc = t[idx] + w * (t[idx + 1] - t[idx])
    yc = y[idx] + w * (y[idx + 1] - y[idx])
    return tc, yc - ref[1]


def classify_orbit(traj: Trajectory, reference) -> OscillationVerdict:
    """Classify the late part of a trajectory relative to an equilibrium.

    The first half is discarded as transient. A log-radius slope below
    -1e-4 per unit time means convergence; a bounded orbit with at least five
    section returns of comparable size is a limit cycle (invariant circle for
    maps).
    """
    if traj.divergent:
        return OscillationVerdict(DIVERGENT, math.inf)
    n = len(traj)
    half = n // 2
    if n - half < MIN_SAMPLES:
        raise InsufficientSamples(f"{n - half} samples after transient discard, need {MIN_SAMPLES}")
    t = traj.times[half:]
    st = traj.states[half:]
    if not np.all(np.isfinite(st)):
        return OscillationVerdict(DIVERGENT, math.inf)
    ref = (float(reference[0]), float(reference[1]))
    radius = np.hypot(st[:, 0] - ref[0], st[:, 1] - ref[1])
    size = 1.0 + abs(ref[0]) + abs(ref[1])
    if radius.max() > 1e6 * size:
        return OscillationVerdict(DIVERGENT, float(radius.max()))
    if radius.max() <= 1e-12 * size:
        return OscillationVerdict(CONVERGES, float(radius.max()), None, -math.inf)
    with np.errstate(divide="ignore"):
        logr = np.log(radius)
    good = np.isfinite(logr)
    slope = float(np.polyfit(t[good], logr[good], 1)[0]) if good.sum() > 2 else -math.inf
    if slope < -DECAY_SLOPE:
        return OscillationVerdict(CONVERGES, float(radius[-1]), None, slope)

    tc, offs = _section_returns(t, st[:, 0], st[:, 1], ref)
    amp = 0.5 * float(radius.max() + radius.min()) if len(radius) else 0.0
    period = float(np.mean(np.diff(tc))) if len(tc) > 1 else None
    details = {"section_returns": int(len(tc))}
    if len(tc) >= MIN_RETURNS and amp > MIN_AMPLITUDE and abs(slope) <= DECAY_SLOPE:
        d = np.abs(offs)
        ratios = d[1:] / np.where(d[:-1] == 0.0, np.nan, d[:-1])
        ok = (ratios > 0.5) & (ratios < 1.5)
        run = best = 0
        for flag in ok:
            run = run + 1 if flag else 0
            best = max(best, run)
        if best + 1 >= MIN_RETURNS:
            kind = INVARIANT_CIRCLE if traj.is_map else LIMIT_CYCLE
            return OscillationVerdict(kind, amp, period, slope, int(len(tc)), details)
    if slope > DECAY_SLOPE and radius[-1] > 1e3 * size:
        return OscillationVerdict(DIVERGENT, float(radius[-1]), period, slope, int(len(tc)), details)
    return OscillationVerdict(UNDETERMINED, amp, period, slope, int(len(tc)), details)


def default_step(m: ModelInstance, state, factor: float = 1e-3, bounds=(1e-4, 1e-2)) -> float:
    """``factor`` times the characteristic time 1/max|lambda|, clamped to ``bounds``."""
    from .spectral import spectral_summary

    lam = max(abs(v) for v in spectral_summary(m, state).eigenvalues)
    if lam == 0.0:
        return bounds[1]
    return min(bounds[1], max(bounds[0], factor / lam))


# coarser step for the two-sided probes: growth rates there are ~1e-3, so the
# run must cover ~1e4 time units; RK4 damping at this step is below 1e-9 per step
PROBE_STEP_FACTOR = 5e-2
PROBE_STEP_BOUNDS = (1e-4, 0.25)


@dataclass(frozen=True)
class SideProbe:
    param_value: float
    equilibrium: PlanarState
    verdict: OscillationVerdict
    leading_rate: float  # Re(lambda) for flows, log|lambda| per iterate for maps


@dataclass(frozen=True)
class BifurcationConfirmation:
    kind: str
    param_name: str
    critical_value: float
    below: SideProbe
    above: SideProbe
    transversality: float
    oscillatory_side: int  # -1 below, +1 above, 0 none or both
    expected_side: int
    flips: bool
    matches: bool


def _probe(m: ModelInstance, value, guess, horizon_rate, n_iter, max_steps):
    from .spectral import spectral_summary

    eq = track_equilibrium(m, guess)
    s = spectral_summary(m, eq)
    x0 = eq.x + min(1e-3, 0.1 * eq.x)
    if m.family.is_map:
        rate = math.log(max(abs(v) for v in s.eigenvalues))
        n = int(min(max(n_iter, 16.0 / max(horizon_rate, 1e-12)), 20 * n_iter))
        traj = iterate_map(m, (x0, eq.y), n)
    else:
        rate = max(v.real for v in s.eigenvalues)
        lam = max(abs(v) for v in s.eigenvalues)
        period = 2.0 * math.pi / max(abs(v.imag) for v in s.eigenvalues) if any(v.imag for v in s.eigenvalues) else 1.0 / lam
        dt = default_step(m, eq, PROBE_STEP_FACTOR, PROBE_STEP_BOUNDS)
        # long enough to cross several e-folds at the rate expected near the crossing
        t_end = max(60.0 * period, 16.0 / max(horizon_rate, 1e-12))
        t_end = min(t_end, dt * max_steps)
        traj = integrate_flow(m, (x0, eq.y), t_end, dt)
    return SideProbe(value, eq, classify_orbit(traj, eq), rate)


def confirm_bifurcation(point, offset: float = 0.05, n_iter: int = 100_000, max_steps: int = 1_500_000) -> BifurcationConfirmation:
    """Simulate just below and just above the critical parameter value of a Hopf or NS point.

    Neither side is assumed to oscillate; the side predicted by the sign of
    the transversality derivative is compared with what the simulation shows.
    """
    from .loci import hopf_transversality

    m = point.model
    name, value = point.critical_param_name, float(point.critical_param_value)
    deriv = hopf_transversality(point)
    probes = []
    for factor in (1.0 - offset, 1.0 + offset):
        v = value * factor
        mm = m.with_params(**{name: v})
        horizon_rate = abs(deriv) * abs(v - value)
        probes.append(_probe(mm, v, point.state, horizon_rate, n_iter, max_steps))
    below, above = probes
    osc = {LIMIT_CYCLE, INVARIANT_CIRCLE}
    b_osc, a_osc = below.verdict.kind in osc, above.verdict.kind in osc
    side = 0 if b_osc == a_osc else (1 if a_osc else -1)
    expected = 1 if deriv > 0 else -1
    flips = side != 0 and {below.verdict.kind, above.verdict.kind} - osc == {CONVERGES}
    return BifurcationConfirmation(point.kind, name, value, below, above, deriv, side, expected, flips, flips and side == expected)
