"""Predator-prey model families, parameter validation, vector fields and Jacobians.

Four families are supported::

    Bazykin                 x' = r x (1 - x/k) - a x y/(x + b)
                            y' = e a x y/(x + b) - d y - sigma y^2

    HollingIV (Leslie)      x' = x (1 - x) - x y/(a + x^2) - h1 x
                            y' = y (delta - beta y/x) - h2 y
                            with h1 = h10/(3 + h10), a = 9/(4 (3 + h10)^2)

    CrowleyMartin           x' = rho x (1 - x/k) - a x y/((1 + b x)(1 + c y))
                            y' = gamma a x y/((1 + b x)(1 + c y)) - d y

    DiscreteCrowleyMartin   (x, y) -> (x, y) + F(x, y), F the CrowleyMartin field

All evaluation functions accept python floats or numpy arrays for the state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping, NamedTuple

import numpy as np

from .errors import ConstraintViolation, MissingSymbol, NonPositiveValue, UnknownSymbol


class Family(str, Enum):
    BAZYKIN = "Bazykin"
    HOLLING_IV = "HollingIV"
    CROWLEY_MARTIN = "CrowleyMartin"
    DISCRETE_CROWLEY_MARTIN = "DiscreteCrowleyMartin"

    @property
    def is_map(self) -> bool:
        return self is Family.DISCRETE_CROWLEY_MARTIN

    @property
    def is_flow(self) -> bool:
        return not self.is_map

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, Family):
            return value
        for fam in cls:
            if value == fam.value or str(value).lower() == fam.value.lower():
                return fam
        raise ValueError(f"unknown model family {value!r}")


SCHEMAS = {
    Family.BAZYKIN: ("r", "k", "a", "b", "e", "d", "sigma"),
    Family.HOLLING_IV: ("h10", "h2", "delta", "beta"),
    Family.CROWLEY_MARTIN: ("rho", "k", "a", "b", "c", "gamma", "d"),
    Family.DISCRETE_CROWLEY_MARTIN: ("rho", "k", "a", "b", "c", "gamma", "d"),
}

# bifurcation parameter each localization result is stated in
DESIGNATED_PARAMETER = {
    Family.BAZYKIN: "a",
    Family.HOLLING_IV: "beta",
    Family.CROWLEY_MARTIN: "c",
    Family.DISCRETE_CROWLEY_MARTIN: "c",
}

# parameter solved from the predator equation to make a nullcline point an equilibrium
CONDITIONING_PARAMETER = {
    Family.BAZYKIN: "e",
    Family.HOLLING_IV: "delta",
    Family.CROWLEY_MARTIN: "gamma",
    Family.DISCRETE_CROWLEY_MARTIN: "gamma",
}

_HOLLING_RAW = ("a", "h1", "h2", "delta", "beta")

_ALIASES = {
    "σ": "sigma",
    "ρ": "rho",
    "γ": "gamma",
    "δ": "delta",
    "β": "beta",
    "h₁₀": "h10",
    "h₁": "h1",
    "h₂": "h2",
}

# symbols allowed to be zero
_NONNEGATIVE = {
    Family.HOLLING_IV: {"h2"},
    Family.CROWLEY_MARTIN: {"c"},
    Family.DISCRETE_CROWLEY_MARTIN: {"c"},
}


class PlanarState(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class ParameterSet:
    """Validated parameter values plus derived quantities (read-only mappings)."""

    values: Mapping[str, float]
    derived: Mapping[str, float] = field(default_factory=dict)

    def __getitem__(self, key):
        if key in self.values:
            return self.values[key]
        return self.derived[key]

    def __contains__(self, key):
        return key in self.values or key in self.derived

    def as_dict(self) -> dict:
        return dict(self.values)


def _derive(family: Family, v: Mapping[str, float]) -> dict:
    if family is Family.BAZYKIN:
        return {"x_v": 0.5 * (v["k"] - v["b"])}
    if family is Family.HOLLING_IV:
        s = 3.0 + v["h10"]
        return {
            "h1": v["h10"] / s,
            "a": 9.0 / (4.0 * s * s),
            "x_min": 1.0 / (2.0 * s),
            "x_max": 3.0 / (2.0 * s),
            "x_hi": 3.0 / s,
            "delta_eff": v["delta"] - v["h2"],
        }
    k0 = v["b"] * v["k"] - 1.0
    return {"k0": k0, "x_v": k0 / (2.0 * v["b"])}


def _canonical_keys(raw: Mapping) -> dict:
    out = {}
    for key, val in raw.items():
        out[_ALIASES.get(key, key)] = val
    return out


def _holling_from_raw(raw: dict) -> dict:
    h1 = float(raw["h1"])
    if not 0.0 < h1 < 1.0:
        raise ConstraintViolation("0<h1<1", f"h1 must lie in (0, 1), got {h1!r}")
    h10 = 3.0 * h1 / (1.0 - h1)
    a_tied = 9.0 / (4.0 * (3.0 + h10) ** 2)
    if not math.isclose(float(raw["a"]), a_tied, rel_tol=1e-9):
        raise ConstraintViolation(
            "a!=9/(4(3+h10)^2)",
            f"a={raw['a']!r} is not the value {a_tied!r} tied to h1={h1!r}",
        )
    return {"h10": h10, "h2": raw["h2"], "delta": raw["delta"], "beta": raw["beta"]}


def validate_parameters(family, raw: Mapping) -> ParameterSet:
    """Check ``raw`` against the family schema and constraints.

    HollingIV also accepts the raw ``(a, h1, h2, delta, beta)`` form, provided
    ``a`` and ``h1`` satisfy the h10 reparametrisation; ``h2`` defaults to 0.
    """
    family = Family.parse(family)
    raw = _canonical_keys(raw)
    if family is Family.HOLLING_IV:
        raw.setdefault("h2", 0.0)
        if "h10" not in raw and set(raw) == set(_HOLLING_RAW):
            _check_values(family, raw, _HOLLING_RAW)
            raw = _holling_from_raw(raw)
    schema = SCHEMAS[family]
    for key in raw:
        if key not in schema:
            raise UnknownSymbol(key, family.value)
    for key in schema:
        if key not in raw:
            raise MissingSymbol(key, family.value)
    _check_values(family, raw, schema)
    values = {key: float(raw[key]) for key in schema}

    if family is Family.BAZYKIN:
        if values["k"] <= values["b"]:
            raise ConstraintViolation("k<=b", "Bazykin requires k > b so the vertex (k-b)/2 is positive")
    elif family in (Family.CROWLEY_MARTIN, Family.DISCRETE_CROWLEY_MARTIN):
        if values["b"] * values["k"] <= 1.0:
            raise ConstraintViolation(
                "bk<=1",
                "Crowley-Martin requires b*k > 1 (hypothesis of the Crowley-Martin localization result)",
            )
        if values["a"] <= values["c"] * values["rho"]:
            raise ConstraintViolation("a<=c*rho", "Crowley-Martin requires a > c*rho so that g(0) > 0")
    return ParameterSet(MappingProxyType(values), MappingProxyType(_derive(family, values)))


def _check_values(family, raw, keys):
    allowed_zero = _NONNEGATIVE.get(family, set())
    for key in keys:
        val = float(raw[key])
        if not math.isfinite(val):
            raise NonPositiveValue(key, val)
        if val < 0.0 or (val == 0.0 and key not in allowed_zero):
            raise NonPositiveValue(key, val)


@dataclass(frozen=True)
class ModelInstance:
    family: Family
    params: ParameterSet

    @classmethod
    def create(cls, family, **params) -> "ModelInstance":
        family = Family.parse(family)
        return cls(family, validate_parameters(family, params))

    def __getitem__(self, key):
        return self.params[key]

    def with_params(self, **changes) -> "ModelInstance":
        values = self.params.as_dict()
        values.update(_canonical_keys(changes))
        return ModelInstance(self.family, validate_parameters(self.family, values))

    def as_flow(self) -> "ModelInstance":
        """The continuous Crowley-Martin model with identical parameters (identity for flows)."""
        if self.family is Family.DISCRETE_CROWLEY_MARTIN:
            return ModelInstance(Family.CROWLEY_MARTIN, self.params)
        return self

    def as_map(self) -> "ModelInstance":
        if self.family is Family.CROWLEY_MARTIN:
            return ModelInstance(Family.DISCRETE_CROWLEY_MARTIN, self.params)
        if self.family is Family.DISCRETE_CROWLEY_MARTIN:
            return self
        raise ValueError(f"{self.family.value} has no discrete counterpart")

    def to_dict(self) -> dict:
        return {"family": self.family.value, "params": self.params.as_dict()}


# ---------------------------------------------------------------------------
# per-family right-hand sides on plain parameter mappings (no validation, so
# bifurcation code can also evaluate at inadmissible parameter values)


def _baz_field(p, x, y):
    pred = p["a"] * x * y / (x + p["b"])
    return (
        p["r"] * x * (1.0 - x / p["k"]) - pred,
        p["e"] * pred - p["d"] * y - p["sigma"] * y * y,
    )


def _baz_terms(p, x, y):
    pred = p["a"] * x * y / (x + p["b"])
    return (
        (p["r"] * x, p["r"] * x * x / p["k"], pred),
        (p["e"] * pred, p["d"] * y, p["sigma"] * y * y),
    )


def _baz_jac(p, x, y):
    r, k, a, b, e, d, s = (p[n] for n in ("r", "k", "a", "b", "e", "d", "sigma"))
    q = x + b
    return (
        (r * (1.0 - 2.0 * x / k) - a * b * y / (q * q), -a * x / q),
        (e * a * b * y / (q * q), e * a * x / q - d - 2.0 * s * y),
    )


def _h4_consts(p):
    h10 = p["h10"]
    s = 3.0 + h10
    return h10 / s, 9.0 / (4.0 * s * s)


def _h4_field(p, x, y):
    h1, a = _h4_consts(p)
    dx = x * (1.0 - x) - x * y / (a + x * x) - h1 * x
    if np.ndim(x) == 0:
        if x == 0.0:
            dy = 0.0 if y == 0.0 else -math.inf
        else:
            dy = y * (p["delta"] - p["beta"] * y / x) - p["h2"] * y
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            dy = y * (p["delta"] - p["beta"] * y / x) - p["h2"] * y
        dy = np.where(y == 0.0, 0.0, dy)
    return dx, dy


def _h4_terms(p, x, y):
    h1, a = _h4_consts(p)
    return (
        (x, x * x, x * y / (a + x * x), h1 * x),
        (p["delta"] * y, p["beta"] * y * y / x, p["h2"] * y),
    )


def _h4_jac(p, x, y):
    h1, a = _h4_consts(p)
    w = a + x * x
    beta = p["beta"]
    return (
        (1.0 - 2.0 * x - h1 - y * (a - x * x) / (w * w), -x / w),
        (beta * y * y / (x * x), p["delta"] - p["h2"] - 2.0 * beta * y / x),
    )


def _cm_field(p, x, y):
    resp = p["a"] * x * y / ((1.0 + p["b"] * x) * (1.0 + p["c"] * y))
    return (
        p["rho"] * x * (1.0 - x / p["k"]) - resp,
        p["gamma"] * resp - p["d"] * y,
    )


def _cm_terms(p, x, y):
    resp = p["a"] * x * y / ((1.0 + p["b"] * x) * (1.0 + p["c"] * y))
    return (
        (p["rho"] * x, p["rho"] * x * x / p["k"], resp),
        (p["gamma"] * resp, p["d"] * y),
    )


def _cm_jac(p, x, y):
    rho, k, a, b, c, gamma, d = (p[n] for n in ("rho", "k", "a", "b", "c", "gamma", "d"))
    u = 1.0 + b * x
    v = 1.0 + c * y
    return (
        (rho * (1.0 - 2.0 * x / k) - a * y / (u * u * v), -a * x / (u * v * v)),
        (gamma * a * y / (u * u * v), gamma * a * x / (u * v * v) - d),
    )


_FIELDS = {
    Family.BAZYKIN: _baz_field,
    Family.HOLLING_IV: _h4_field,
    Family.CROWLEY_MARTIN: _cm_field,
    Family.DISCRETE_CROWLEY_MARTIN: _cm_field,
}

_JACOBIANS = {
    Family.BAZYKIN: _baz_jac,
    Family.HOLLING_IV: _h4_jac,
    Family.CROWLEY_MARTIN: _cm_jac,
    Family.DISCRETE_CROWLEY_MARTIN: _cm_jac,
}

_TERMS = {
    Family.BAZYKIN: _baz_terms,
    Family.HOLLING_IV: _h4_terms,
    Family.CROWLEY_MARTIN: _cm_terms,
    Family.DISCRETE_CROWLEY_MARTIN: _cm_terms,
}


def field_function(family, values):
    """Return ``f(x, y) -> (dx, dy)`` bound to a raw parameter mapping."""
    fn = _FIELDS[Family.parse(family)]
    return lambda x, y: fn(values, x, y)


def vector_field(m: ModelInstance, s) -> tuple:
    """Right-hand side of the flow, or the displacement ``F`` for the map."""
    x, y = s
    return _FIELDS[m.family](m.params.values, x, y)


def residual_scale(m: ModelInstance, s) -> float:
    """Largest absolute additive term of the vector field at ``s``."""
    x, y = s
    terms = _TERMS[m.family](m.params.values, x, y)
    return max(abs(t) for group in terms for t in group)


def jacobian_entries(family, values, x, y, *, map_form=None):
    """Analytic Jacobian entries on a raw parameter mapping."""
    family = Family.parse(family)
    (j11, j12), (j21, j22) = _JACOBIANS[family](values, x, y)
    if map_form is None:
        map_form = family.is_map
    if map_form:
        j11 = j11 + 1.0
        j22 = j22 + 1.0
    return (j11, j12), (j21, j22)


def jacobian(m: ModelInstance, s) -> np.ndarray:
    """Analytic 2x2 Jacobian; for the map this is identity + flow Jacobian."""
    x, y = s
    return np.array(jacobian_entries(m.family, m.params.values, x, y), dtype=float)


def map_step(m: ModelInstance, s) -> PlanarState:
    """One iterate of the discrete model."""
    x, y = s
    dx, dy = _cm_field(m.params.values, x, y)
    return PlanarState(x + dx, y + dy)
