"""Seeded randomized sweeps checking that detected bifurcations sit on the prescribed nullcline branch."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import confirm_bifurcation
from .equilibria import find_coexistence_equilibria
from .errors import EmptyLocus, NoCEPAtCriticalPoint, ParameterError, PreylocError
from .loci import (
    BT,
    HOPF,
    NEIMARK_SACKER,
    make_point,
    loci_for,
    spectral_conditions_hold,
)
from .models import DESIGNATED_PARAMETER, SCHEMAS, Family, ModelInstance
from .nullcline import dg_raw, nullcline_profile
from .spectral import rigidity_report, spectral_summary

CHECKS = ("hopf", "bt", "ns", "rigidity", "dynamics-confirm")
_KIND_OF_CHECK = {"hopf": HOPF, "bt": BT, "ns": NEIMARK_SACKER}

DEFAULT_RANGE = (0.1, 10.0)
MAX_REDRAWS = 100
DEFAULT_DYNAMICS_CAP = 20
RNG_ALGORITHM = "numpy PCG64 via SeedSequence.spawn (one child stream per sample)"

DEFAULT_CHECKS = {
    Family.BAZYKIN: ("hopf", "rigidity"),
    Family.HOLLING_IV: ("hopf", "bt", "rigidity"),
    Family.CROWLEY_MARTIN: ("hopf", "rigidity"),
    Family.DISCRETE_CROWLEY_MARTIN: ("ns", "rigidity"),
}

# parameters held fixed unless a range is given explicitly
_FIXED = {Family.HOLLING_IV: {"h2": 0.0}}


@dataclass(frozen=True)
class SweepConfig:
    family: Family
    samples: int
    seed: int
    checks: tuple
    free_param: str | None = None
    ranges: dict = field(default_factory=dict)
    dynamics_cap: int = DEFAULT_DYNAMICS_CAP
    workers: int = 1
    panels: int = 512

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        if self.samples < 1:
            raise ValueError("sample count must be at least 1")
        if not self.checks:
            raise ValueError("no checks requested")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ValueError(f"unknown checks {bad}; choose from {CHECKS}")
        schema = SCHEMAS[self.family]
        for name, rng in self.ranges.items():
            if name not in schema:
                raise ValueError(f"range given for unknown parameter {name!r}")
            lo, hi = rng
            if not 0.0 < lo <= hi:
                raise ValueError(f"range for {name!r} must satisfy 0 < lo <= hi")
        if self.free_param is None:
            object.__setattr__(self, "free_param", DESIGNATED_PARAMETER[self.family])

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "samples": self.samples,
            "seed": self.seed,
            "checks": list(self.checks),
            "free_param": self.free_param,
            "ranges": {k: list(v) for k, v in sorted(self.ranges.items())},
            "dynamics_cap": self.dynamics_cap,
            "panels": self.panels,
        }


@dataclass
class SweepReport:
    config: dict
    records: list
    counterexamples: list
    summary: dict
    rng: str = RNG_ALGORITHM
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "config": self.config,
            "rng": self.rng,
            "summary": self.summary,
            "counterexamples": self.counterexamples,
            "records": self.records,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return dumps(self.to_dict(include_timing))


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, shortest round-trip floats, non-finite as strings."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=1, ensure_ascii=False, allow_nan=False) + "\n"


def _jsonable(obj):
    if isinstance(obj, float) or isinstance(obj, np.floating):
        v = float(obj)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return [_jsonable(obj.real), _jsonable(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def sample_parameters(cfg: SweepConfig, rng: np.random.Generator):
    """Log-uniform draw of every schema parameter; constraint violations are redrawn.

    Returns ``(params, redraws)`` or ``(None, redraws)`` after MAX_REDRAWS failures.
    """
    schema = SCHEMAS[cfg.family]
    fixed = {k: v for k, v in _FIXED.get(cfg.family, {}).items() if k not in cfg.ranges}
    for attempt in range(MAX_REDRAWS + 1):
        raw = dict(fixed)
        for name in schema:
            if name in raw:
                continue
            lo, hi = cfg.ranges.get(name, DEFAULT_RANGE)
            raw[name] = float(math.exp(rng.uniform(math.log(lo), math.log(hi))))
        try:
            ModelInstance.create(cfg.family, **raw)
        except ParameterError:
            continue
        return raw, attempt
    return None, MAX_REDRAWS


def _point_record(point) -> dict:
    return {
        "kind": point.kind,
        "x_star": point.x_star,
        "y_star": point.state.y,
        "param": point.critical_param_name,
        "param_value": point.critical_param_value,
        "conditioned": {k: v for k, v in point.model.params.values.items()},
        "trace": point.spectral.trace,
        "det": point.spectral.det,
        "branch": point.verdict.branch,
        "interval": list(point.verdict.containing_interval),
        "satisfies_principle": point.verdict.satisfies_principle,
    }


def _reverify(point) -> bool:
    """Counterexample survives a 10x tighter spectral tolerance and a strict slope sign check."""
    s = spectral_summary(point.model, point.state)
    if not spectral_conditions_hold(point.kind, s, tol=1e-11 if point.kind != BT else 1e-10):
        return False
    slope = dg_raw(point.model.family, point.model.params.values, point.x_star)
    profile = nullcline_profile(point.model)
    band = 1e-11 * profile.slope_scale
    if point.kind == NEIMARK_SACKER:
        return not slope < -band
    return not slope > band


def _run_sample(args):
    cfg, index, child = args
    rng = np.random.Generator(np.random.PCG64(child))
    params, redraws = sample_parameters(cfg, rng)
    rec = {"index": index, "redraws": redraws}
    if params is None:
        rec["skip"] = f"no admissible draw after {MAX_REDRAWS} redraws"
        return rec, [], []
    m = ModelInstance.create(cfg.family, **params)
    rec["params"] = params
    profile = nullcline_profile(m)
    rec["critical_points"] = [[cp.x, cp.kind] for cp in profile.critical_points]
    eqs = find_coexistence_equilibria(m, profile)
    rec["equilibria"] = [[e.x, e.y, e.branch] for e in eqs]
    points, counter, skips = [], [], []

    for check in cfg.checks:
        kind = _KIND_OF_CHECK.get(check)
        if kind is None:
            continue
        if (kind == NEIMARK_SACKER) != cfg.family.is_map:
            skips.append(f"{check} not defined for {cfg.family.value}")
            continue
        try:
            found = loci_for(m, kind, profile, cfg.panels)
        except PreylocError as exc:
            skips.append(f"{check}: {exc}")
            continue
        for pt in found:
            prec = _point_record(pt)
            points.append(prec)
            if not pt.verdict.satisfies_principle:
                genuine = _reverify(pt)
                prec["reverified"] = genuine
                if genuine:
                    counter.append({"sample": index, "seed": cfg.seed, "params": params, "point": prec})

    if "rigidity" in cfg.checks:
        rig = []
        name = cfg.free_param
        base = params[name]
        for cp in profile.critical_points:
            try:
                rep = rigidity_report(m, cp, [0.5 * base, base, 2.0 * base], name)
            except NoCEPAtCriticalPoint as exc:
                rig.append({"x": cp.x, "kind": cp.kind, "skip": str(exc)})
                continue
            entry = {
                "x": cp.x,
                "kind": cp.kind,
                "trace": rep.trace_at_critical,
                "det": rep.det_at_critical,
                "hopf_blocked": rep.hopf_blocked,
                "ns_blocked": rep.ns_blocked,
                "samples_used": len(rep.samples),
            }
            rig.append(entry)
            blocked = rep.ns_blocked if cfg.family.is_map else rep.hopf_blocked
            if not blocked:
                counter.append({"sample": index, "seed": cfg.seed, "params": params, "rigidity": entry})
        rec["rigidity"] = rig

    rec["points"] = points
    if skips:
        rec["skips"] = skips
    return rec, counter, _dynamics_candidates(m, cfg, points)


def _dynamics_candidates(m, cfg, points):
    if "dynamics-confirm" not in cfg.checks:
        return []
    return [p for p in points if p["kind"] in (HOPF, NEIMARK_SACKER)]


def _dynamics_confirm(cfg, candidates):
    """Two-sided simulation for the first ``dynamics_cap`` Hopf/NS points of the sweep."""
    from .loci import make_point

    out = []
    for index, prec in candidates[: cfg.dynamics_cap]:
        m = ModelInstance.create(cfg.family, **prec["conditioned"])
        point = make_point(prec["kind"], m, (prec["x_star"], prec["y_star"]), prec["param"], strict=False)
        if point is None:
            out.append({"sample": index, "skip": "point failed re-verification"})
            continue
        try:
            conf = confirm_bifurcation(point)
        except PreylocError as exc:
            out.append({"sample": index, "x_star": prec["x_star"], "skip": str(exc)})
            continue
        out.append({
            "sample": index,
            "x_star": prec["x_star"],
            "below": conf.below.verdict.kind,
            "above": conf.above.verdict.kind,
            "transversality": conf.transversality,
            "oscillatory_side": conf.oscillatory_side,
            "flips": conf.flips,
            "matches": conf.matches,
        })
    return out


def run_sweep(cfg: SweepConfig) -> SweepReport:
    t0 = time.perf_counter()
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.samples)
    work = [(cfg, i, child) for i, child in enumerate(children)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_sample, work, chunksize=max(1, cfg.samples // (8 * cfg.workers))))
    else:
        results = [_run_sample(w) for w in work]

    records, counter, dyn = [], [], []
    for rec, ce, cand in results:
        records.append(rec)
        counter.extend(ce)
        dyn.extend((rec["index"], p) for p in cand)

    summary = _summarize(records, counter)
    if "dynamics-confirm" in cfg.checks:
        confirmations = _dynamics_confirm(cfg, dyn)
        summary["dynamics"] = confirmations
    return SweepReport(cfg.to_dict(), records, counter, summary, wall_time=time.perf_counter() - t0)


def _summarize(records, counter) -> dict:
    points_by_kind = {}
    eq_count_hist = {}
    by_eq_count = {}
    skipped = 0
    for rec in records:
        if "skip" in rec:
            skipped += 1
            continue
        n_eq = len(rec["equilibria"])
        eq_count_hist[str(n_eq)] = eq_count_hist.get(str(n_eq), 0) + 1
        bucket = by_eq_count.setdefault(str(n_eq), {"points": 0, "violations": 0})
        for p in rec["points"]:
            points_by_kind[p["kind"]] = points_by_kind.get(p["kind"], 0) + 1
            bucket["points"] += 1
            if not p["satisfies_principle"]:
                bucket["violations"] += 1
    return {
        "samples": len(records),
        "skipped": skipped,
        "points_by_kind": points_by_kind,
        "equilibrium_count_histogram": eq_count_hist,
        "by_equilibrium_count": by_eq_count,
        "counterexamples": len(counter),
    }


# ---------------------------------------------------------------------------


def duality_report(params: dict, c_range=(1e-3, 1e-1), n: int = 50, panels: int = 512) -> dict:
    """Hopf points of the flow and NS points of the map on the same nullcline, per value of c.

    ``params`` holds rho, k, a, b, d (gamma, if present, is ignored: it is
    solved at every point). Each entry records x_v, both point lists and
    whether max(Hopf x) < x_v < min(NS x). An empty side is noted as such.
    """
    base = {k: float(v) for k, v in params.items() if k not in ("c", "gamma")}
    base["gamma"] = 1.0
    entries = []
    for c in np.geomspace(c_range[0], c_range[1], n):
        c = float(c)
        flow = ModelInstance.create(Family.CROWLEY_MARTIN, c=c, **base)
        prof = nullcline_profile(flow)
        x_v = flow["x_v"]
        hopf = sorted(p.x_star for p in loci_for(flow, HOPF, prof, panels))
        ns = sorted(p.x_star for p in loci_for(flow.as_map(), NEIMARK_SACKER, prof, panels))
        entry = {"c": c, "x_v": x_v, "hopf_x": hopf, "ns_x": ns}
        empty = []
        if not hopf:
            empty.append(f"{EmptyLocus.__name__}: no Hopf point")
        if not ns:
            empty.append(f"{EmptyLocus.__name__}: no Neimark-Sacker point")
        if empty:
            entry["empty"] = empty
        entry["ordered"] = (not hopf or max(hopf) < x_v) and (not ns or x_v < min(ns))
        entries.append(entry)
    return {
        "params": base | {"gamma": "solved"},
        "c_range": list(c_range),
        "entries": entries,
        "all_ordered": all(e["ordered"] for e in entries),
    }


__all__ = [
    "SweepConfig",
    "SweepReport",
    "run_sweep",
    "duality_report",
    "sample_parameters",
    "dumps",
    "CHECKS",
    "DEFAULT_CHECKS",
]
