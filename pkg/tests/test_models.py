import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from preyloc.errors import ConstraintViolation, MissingSymbol, NonPositiveValue, UnknownSymbol
from preyloc.models import (
    Family,
    ModelInstance,
    jacobian,
    map_step,
    validate_parameters,
    vector_field,
)

from conftest import log_uniform, random_model

FAMILIES = list(Family)


def fd_jacobian(m, s):
    """Central differences of the vector field (map: of the map itself)."""
    x, y = s
    out = np.empty((2, 2))
    for j, (dx, dy) in enumerate(((1.0, 0.0), (0.0, 1.0))):
        h = 1e-6 * (1.0 + abs(s[j]))
        fp = np.array(vector_field(m, (x + h * dx, y + h * dy)))
        fm = np.array(vector_field(m, (x - h * dx, y - h * dy)))
        out[:, j] = (fp - fm) / (2 * h)
    if m.family.is_map:
        out += np.eye(2)
    return out


def test_family_tags():
    assert Family.DISCRETE_CROWLEY_MARTIN.is_map
    assert all(f.is_flow for f in FAMILIES if f is not Family.DISCRETE_CROWLEY_MARTIN)
    assert Family.parse("crowleymartin") is Family.CROWLEY_MARTIN
    with pytest.raises(ValueError):
        Family.parse("Lotka")


def test_bazykin_valid():
    ps = validate_parameters("Bazykin", {"r": 1, "k": 3, "a": 1, "b": 1, "e": 1, "d": 0.1, "σ": 1})
    assert ps["x_v"] == 1.0


def test_bazykin_k_le_b():
    with pytest.raises(ConstraintViolation) as err:
        validate_parameters("Bazykin", {"r": 1, "k": 1, "a": 1, "b": 2, "e": 1, "d": 0.1, "sigma": 1})
    assert err.value.constraint == "k<=b"


def test_cm_k0():
    ps = validate_parameters("CrowleyMartin", {"rho": 1, "k": 2, "a": 1, "b": 1, "c": 0.5, "gamma": 1, "d": 1})
    assert ps["k0"] == 1.0
    assert ps["a"] > ps["c"] * ps["rho"]


@pytest.mark.parametrize(
    "change, tag",
    [({"k": 0.5}, "bk<=1"), ({"c": 2.0}, "a<=c*rho")],
)
def test_cm_constraints(change, tag):
    raw = {"rho": 1, "k": 2, "a": 1, "b": 1, "c": 0.5, "gamma": 1, "d": 1} | change
    with pytest.raises(ConstraintViolation) as err:
        validate_parameters("CrowleyMartin", raw)
    assert err.value.constraint == tag


def test_missing_unknown_nonpositive():
    with pytest.raises(MissingSymbol):
        validate_parameters("Bazykin", {"r": 1, "k": 3, "a": 1, "b": 1, "e": 1, "d": 0.1})
    with pytest.raises(UnknownSymbol):
        validate_parameters("Bazykin", {"r": 1, "k": 3, "a": 1, "b": 1, "e": 1, "d": 0.1, "sigma": 1, "q": 2})
    with pytest.raises(NonPositiveValue):
        validate_parameters("Bazykin", {"r": 0, "k": 3, "a": 1, "b": 1, "e": 1, "d": 0.1, "sigma": 1})
    # c = 0 allowed only for the Crowley-Martin families
    validate_parameters("CrowleyMartin", {"rho": 1, "k": 2, "a": 1, "b": 1, "c": 0, "gamma": 1, "d": 1})


def test_holling_reparametrisation():
    ps = validate_parameters("HollingIV", {"h10": 1, "delta": 1, "beta": 2})
    assert ps["h1"] == pytest.approx(0.25)
    assert ps["a"] == pytest.approx(9 / 64)
    assert ps["h2"] == 0.0
    raw = validate_parameters("HollingIV", {"a": 9 / 64, "h1": 0.25, "h2": 0.1, "delta": 1, "beta": 2})
    assert raw["h10"] == pytest.approx(1.0)
    with pytest.raises(ConstraintViolation):
        validate_parameters("HollingIV", {"a": 0.2, "h1": 0.25, "h2": 0.1, "delta": 1, "beta": 2})


def test_vector_field_cm_by_hand(cm_example):
    dx, dy = vector_field(cm_example, (1.0, 1.0))
    assert dx == pytest.approx(1 / 6, rel=1e-15)
    assert dy == pytest.approx(-2 / 3, rel=1e-15)
    # independent path: expanded expression
    x = y = 1.0
    resp = 1.0 * x * y / ((1 + x) * (1 + 0.5 * y))
    assert dx == pytest.approx(x * (1 - x / 2) - resp)


def test_bazykin_boundary_equilibrium(bazykin_example):
    assert vector_field(bazykin_example, (3.0, 0.0)) == (0.0, 0.0)


@pytest.mark.parametrize("family", FAMILIES)
def test_axes_invariant(family, rng):
    for _ in range(250):
        m = random_model(family, rng)
        x, y = log_uniform(rng, 0.01, 10, 2)
        assert vector_field(m, (0.0, y))[0] == 0.0
        assert vector_field(m, (x, 0.0))[1] == 0.0


@pytest.mark.parametrize("family", FAMILIES)
def test_jacobian_matches_finite_differences(family, rng):
    for _ in range(100):
        m = random_model(family, rng)
        s = tuple(log_uniform(rng, 0.05, 5, 2))
        ja, jf = jacobian(m, s), fd_jacobian(m, s)
        assert np.max(np.abs(ja - jf)) <= 1e-6 * max(1.0, np.max(np.abs(ja)))


def test_discrete_is_identity_plus_flow(rng):
    for _ in range(100):
        m = random_model("DiscreteCrowleyMartin", rng)
        s = tuple(log_uniform(rng, 0.05, 5, 2))
        # (1 + J) - 1 rounds, so compare at machine precision
        assert np.allclose(jacobian(m, s) - np.eye(2), jacobian(m.as_flow(), s), rtol=0, atol=1e-15)
        assert vector_field(m, s) == vector_field(m.as_flow(), s)
        nxt = map_step(m, s)
        f = vector_field(m, s)
        assert nxt == (s[0] + f[0], s[1] + f[1])


def test_classical_limit_holling_ii(rng):
    for _ in range(200):
        m = random_model("CrowleyMartin", rng).with_params(c=0.0)
        x, y = log_uniform(rng, 0.05, 5, 2)
        p = m.params
        holling2 = p["rho"] * x * (1 - x / p["k"]) - p["a"] * x * y / (1 + p["b"] * x)
        assert vector_field(m, (x, y))[0] == pytest.approx(holling2, rel=1e-13, abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0.1, 10),
)
def test_bazykin_vertex_j11_zero(k0, b, r, sigma, a):
    from preyloc.spectral import condition_equilibrium

    m = ModelInstance.create("Bazykin", r=r, k=k0 + b, a=a, b=b, e=1.0, d=0.1, sigma=sigma)
    cond, s = condition_equilibrium(m, m["x_v"])
    assert abs(jacobian(cond, s)[0, 0]) <= 1e-12 * max(1.0, r)


def test_with_params_revalidates(cm_example):
    with pytest.raises(ConstraintViolation):
        cm_example.with_params(k=0.9)
    assert cm_example.with_params(c=0.1)["c"] == 0.1
    assert math.isclose(cm_example.as_map().as_flow()["k0"], 1.0)
