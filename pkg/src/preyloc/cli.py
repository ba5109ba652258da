"""Command-line entry point: analyze, loci, simulate, verify.

Every command reads a JSON scenario file (``--config``) and writes JSON and CSV
files into ``--out``. Exit codes: 0 success, 2 configuration error, 3 domain
error (parameters violate a model constraint), 4 counterexamples found.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .dynamics import classify_orbit, default_step, integrate_flow, iterate_map
from .equilibria import find_coexistence_equilibria, track_equilibrium
from .errors import InsufficientSamples, MissingSymbol, ParameterError, PreylocError, UnknownSymbol
from .harness import DEFAULT_CHECKS, SweepConfig, dumps, duality_report, run_sweep
from .loci import (
    BT,
    HOPF,
    NEIMARK_SACKER,
    bazykin_hopf,
    crowley_martin_hopf,
    holling4_bt,
    loci_for,
    ns_locus,
)
from .models import Family, ModelInstance
from .nullcline import dg_raw, g_raw, nullcline_profile
from .spectral import spectral_summary, trace_on_nullcline

log = logging.getLogger("preyloc")

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_COUNTEREXAMPLE = 0, 2, 3, 4


class ConfigError(Exception):
    pass


# short descriptions of the result each kind of entry instantiates
ANCHORS = {
    (Family.BAZYKIN, HOPF): "Bazykin: Hopf prey coordinate left of the nullcline vertex",
    (Family.HOLLING_IV, HOPF): "Holling IV: Hopf prey coordinate between the nullcline minimum and maximum",
    (Family.HOLLING_IV, BT): "Holling IV: Bogdanov-Takens point between the nullcline minimum and maximum",
    (Family.CROWLEY_MARTIN, HOPF): "Crowley-Martin: Hopf in the interference parameter left of the vertex",
    (Family.DISCRETE_CROWLEY_MARTIN, NEIMARK_SACKER): "discrete Crowley-Martin: Neimark-Sacker on the descending branch",
    "rigidity": "spectral rigidity at nullcline critical points",
    "duality": "flow Hopf left of the vertex, map Neimark-Sacker right of it",
    "sweep": "randomized test of branch localization",
}


def _anchor(family, kind):
    return ANCHORS.get((family, kind), f"{family.value}: {kind} branch localization")


# ---------------------------------------------------------------------------
# config handling

_COMMON = {"family", "params"}
_ALLOWED = {
    "analyze": _COMMON | {"x_samples"},
    "loci": _COMMON | {"kind", "construction", "x", "x0_grid", "free_param", "x_range", "panels"},
    "simulate": _COMMON | {"initial_state", "t_end", "dt", "iterations", "reference"},
    "sweep": {"family", "samples", "seed", "checks", "ranges", "free_param", "dynamics_cap", "workers", "panels"},
    "duality": {"family", "params", "c_range", "n"},
}


def load_config(path, section) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(cfg) - _ALLOWED[section])
    if unknown:
        raise ConfigError(f"unknown key: {unknown[0]}")
    return cfg


def _require(cfg, key):
    if key not in cfg:
        raise ConfigError(f"missing key: {key}")
    return cfg[key]


def _model(cfg) -> ModelInstance:
    try:
        family = Family.parse(_require(cfg, "family"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    params = _require(cfg, "params")
    if not isinstance(params, dict):
        raise ConfigError("params must be an object")
    return ModelInstance.create(family, **params)


def _family(cfg) -> Family:
    try:
        return Family.parse(_require(cfg, "family"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# output


def _write_json(out: Path, name, obj):
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def _fmt(v):
    if isinstance(v, (bool, str)) or v is None:
        return "" if v is None else str(v)
    return format(float(v), ".17g")


def _write_csv(out: Path, name, header, rows):
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(cfg, out: Path, args) -> int:
    m = _model(cfg)
    profile = nullcline_profile(m)
    eqs = find_coexistence_equilibria(m, profile)
    report = {
        "model": m.to_dict(),
        "derived": dict(m.params.derived),
        "admissible_interval": [profile.x_lo, profile.x_hi],
        "degree": profile.degree,
        "critical_points": [{"x": cp.x, "kind": cp.kind, "g": cp.g_value} for cp in profile.critical_points],
        "branches": [{"interval": [lo, hi], "monotonicity": mono} for lo, hi, mono in profile.branches],
        "equilibria": [],
    }
    for e in eqs:
        s = spectral_summary(m, e.state)
        entry = {
            "state": [e.x, e.y],
            "residual": e.residual_norm,
            "branch": e.branch,
            "interval_index": e.inter_critical_interval,
            "jacobian": [[s.J11, s.J12], [s.J21, s.J22]],
            "trace": s.trace,
            "det": s.det,
            "discriminant": s.discriminant,
            "eigenvalues": [[v.real, v.imag] for v in s.eigenvalues],
            "degenerate": s.degenerate,
        }
        report["equilibria"].append(entry)
    if args.traceability:
        for cp in report["critical_points"]:
            cp["anchor"] = ANCHORS["rigidity"]
    n = int(cfg.get("x_samples", 201))
    if n < 2:
        raise ConfigError("x_samples must be at least 2")
    xs = np.linspace(profile.x_lo, profile.x_hi, n + 2)[1:-1]
    rows = []
    fam, p = m.family, m.params.values
    for x in xs:
        tr, j11, j22 = trace_on_nullcline(m, float(x))
        rows.append((x, g_raw(fam, p, float(x)), dg_raw(fam, p, float(x)), tr, j11, j22))
    _write_json(out, "analyze.json", report)
    _write_csv(out, "analyze_series.csv", ["x", "g", "g_prime", "trace_on_nullcline", "J11_part", "J22_part"], rows)
    return EXIT_OK


def _grid(spec):
    if isinstance(spec, list):
        return [float(v) for v in spec]
    if isinstance(spec, dict):
        start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        n = int(round((stop - start) / step))
        return [start + i * step for i in range(n + 1)]
    raise ConfigError("grid must be a list or {start, stop, step}")


def cmd_loci(cfg, out: Path, args) -> int:
    kind_name = args.kind or cfg.get("kind")
    if kind_name not in ("hopf", "bt", "ns"):
        raise ConfigError("missing key: kind (hopf, bt or ns)")
    family = _family(cfg)
    points, failures = [], []
    panels = int(cfg.get("panels", 512))
    if kind_name == "hopf":
        if family is Family.BAZYKIN and "construction" in cfg:
            c = cfg["construction"]
            try:
                points = [bazykin_hopf(c["k0"], c["b"], c["x0"], c["r"], c["sigma"], c.get("d"))]
            except KeyError as exc:
                raise ConfigError(f"missing key: construction.{exc.args[0]}") from exc
        elif family is Family.CROWLEY_MARTIN and "x" in cfg:
            m = _model(cfg)
            for x in _grid(cfg["x"]):
                pt = crowley_martin_hopf(m, x)
                if pt is not None:
                    points.append(pt)
        else:
            points = loci_for(_model(cfg), HOPF, panels=panels)
    elif kind_name == "bt":
        if family is Family.HOLLING_IV and "x0_grid" in cfg:
            points = holling4_bt(_grid(cfg["x0_grid"]), failures)
        else:
            points = loci_for(_model(cfg), BT, panels=panels)
    else:
        m = _model(cfg)
        if not m.family.is_map:
            raise ConfigError("ns loci need family DiscreteCrowleyMartin")
        if "free_param" in cfg:
            points = ns_locus(m, cfg["free_param"], cfg.get("x_range"), min(panels, 256))
        else:
            points = loci_for(m, NEIMARK_SACKER, panels=panels)
    records = []
    for pt in points:
        rec = pt.to_record()
        if args.traceability:
            rec["anchor"] = _anchor(pt.model.family, pt.kind)
        records.append(rec)
    report = {"kind": kind_name, "family": family.value, "points": records}
    if failures:
        report["failures"] = [{"x0": x, "reason": r} for x, r in failures]
    _write_json(out, f"loci_{kind_name}.json", report)
    _write_csv(
        out, f"loci_{kind_name}.csv",
        ["x_star", "param_name", "param_value", "trace", "det", "branch", "satisfies_principle"],
        [(r["x_star"], r["critical_param"]["name"], r["critical_param"]["value"], r["trace"], r["det"],
          r["branch"], r["satisfies_principle"]) for r in records],
    )
    return EXIT_OK


def cmd_simulate(cfg, out: Path, args) -> int:
    m = _model(cfg)
    s0 = _require(cfg, "initial_state")
    if "reference" in cfg:
        ref = tuple(float(v) for v in cfg["reference"])
    else:
        eqs = find_coexistence_equilibria(m)
        if not eqs:
            raise ConfigError("no coexistence equilibrium; give a reference state")
        ref = min(eqs, key=lambda e: (e.x - s0[0]) ** 2 + (e.y - s0[1]) ** 2).state
        ref = tuple(track_equilibrium(m, ref))
    if m.family.is_map:
        n = int(_require(cfg, "iterations"))
        traj = iterate_map(m, s0, n)
        label = "n"
    else:
        t_end = float(_require(cfg, "t_end"))
        dt = float(cfg.get("dt", default_step(m, ref)))
        traj = integrate_flow(m, s0, t_end, dt)
        label = "t"
    try:
        verdict = classify_orbit(traj, ref)
        vrec = {"kind": verdict.kind, "amplitude": verdict.amplitude,
                "period_estimate": verdict.period_estimate, "decay_slope": verdict.decay_slope,
                "section_returns": verdict.returns}
    except InsufficientSamples as exc:
        vrec = {"kind": "Undetermined", "reason": str(exc)}
    vrec.update({"reference": list(ref), "samples": len(traj), "step": traj.step, "method": traj.method,
                 "clipped": traj.clipped, "divergent": traj.divergent})
    _write_csv(out, "simulate_trajectory.csv", [label, "x", "y"],
               ((t, s[0], s[1]) for t, s in zip(traj.times, traj.states)))
    _write_json(out, "simulate_verdict.json", vrec)
    return EXIT_OK


def _sweep_configs(cfg, seed):
    fam = _require(cfg, "family")
    if fam == "all":
        families = list(Family)
    elif isinstance(fam, list):
        families = [Family.parse(f) for f in fam]
    else:
        families = [Family.parse(fam)]
    samples = int(cfg.get("samples", 10_000))
    configs = []
    for f in families:
        checks = tuple(cfg["checks"]) if "checks" in cfg else DEFAULT_CHECKS[f]
        if not checks:
            raise ConfigError("no checks requested")
        ranges = {k: tuple(v) for k, v in cfg.get("ranges", {}).get(f.value, {}).items()}
        configs.append(SweepConfig(
            f, samples, seed, checks, cfg.get("free_param"), ranges,
            int(cfg.get("dynamics_cap", 20)), int(cfg.get("workers", 1)), int(cfg.get("panels", 512)),
        ))
    return configs


def cmd_verify(cfg, out: Path, args) -> int:
    mode = args.mode
    if mode == "duality":
        family = _family(cfg)
        if family is not Family.CROWLEY_MARTIN:
            raise ConfigError("duality needs family CrowleyMartin")
        params = _require(cfg, "params")
        rep = duality_report(params, tuple(cfg.get("c_range", (1e-3, 1e-1))), int(cfg.get("n", 50)))
        if args.traceability:
            rep["anchor"] = ANCHORS["duality"]
        _write_json(out, "verify_duality.json", rep)
        return EXIT_OK if rep["all_ordered"] else EXIT_COUNTEREXAMPLE

    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        raise ConfigError("missing key: seed (seed is mandatory for verify)")
    try:
        configs = _sweep_configs(cfg, int(seed))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    reports, total = {}, 0
    for sc in configs:
        rep = run_sweep(sc)
        log.info("%s: %d samples, %d counterexamples, %.1fs", sc.family.value, sc.samples,
                 len(rep.counterexamples), rep.wall_time)
        d = rep.to_dict()
        if args.traceability:
            d["anchor"] = ANCHORS["sweep"]
            for ce in d["counterexamples"]:
                ce["anchor"] = _anchor(sc.family, ce["point"]["kind"]) if "point" in ce else ANCHORS["rigidity"]
        reports[sc.family.value] = d
        total += len(rep.counterexamples)
    _write_json(out, "verify_sweep.json", {"reports": reports, "counterexamples_total": total})
    return EXIT_COUNTEREXAMPLE if total else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON scenario file")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="random seed (verify)")
    common.add_argument("--traceability", action="store_true", help="annotate entries with the result they instantiate")

    parser = argparse.ArgumentParser(prog="preyloc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="nullcline, equilibria and spectra")
    p = sub.add_parser("loci", parents=[common], help="bifurcation points")
    p.add_argument("kind", choices=["hopf", "bt", "ns"])
    sub.add_parser("simulate", parents=[common], help="integrate or iterate and classify the orbit")
    p = sub.add_parser("verify", parents=[common], help="randomized sweeps and the flow/map duality check")
    p.add_argument("mode", choices=["sweep", "duality"])
    return parser


_SECTIONS = {"analyze": "analyze", "loci": "loci", "simulate": "simulate"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "kind"):
        args.kind = None
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    section = _SECTIONS.get(args.command) or args.mode
    handler = {"analyze": cmd_analyze, "loci": cmd_loci, "simulate": cmd_simulate, "verify": cmd_verify}[args.command]
    try:
        cfg = load_config(args.config, section)
        return handler(cfg, Path(args.out), args)
    except (ConfigError, MissingSymbol, UnknownSymbol) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParameterError, PreylocError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
