import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from preyloc.equilibria import find_coexistence_equilibria
from preyloc.errors import NoCEPAtCriticalPoint, OutOfDomain
from preyloc.models import Family, ModelInstance, jacobian
from preyloc.nullcline import critical_points, nullcline_profile
from preyloc.spectral import (
    condition_equilibrium,
    eigen_identity_error,
    rigidity_report,
    spectral_summary,
    summarize_matrix,
    trace_on_nullcline,
)

from conftest import log_uniform, random_model


def test_summary_closed_form():
    s = summarize_matrix(0.0, -1.0, 1.0, -1.0)
    assert (s.trace, s.det, s.discriminant) == (-1.0, 1.0, -3.0)
    assert s.eigenvalues[0] == pytest.approx(complex(-0.5, math.sqrt(3) / 2))
    assert s.eigenvalues[1] == s.eigenvalues[0].conjugate()


def test_degenerate_flag():
    assert summarize_matrix(1.0, 1.0, 0.0, 1.0).degenerate
    assert not summarize_matrix(1.0, 0.0, 0.0, 2.0).degenerate


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4))
def test_eigen_identities(entries):
    s = summarize_matrix(*entries)
    assert eigen_identity_error(s) <= 1e-12 * max(1.0, s.scale)
    ref = np.sort_complex(np.linalg.eigvals(np.array(entries).reshape(2, 2)))
    assert np.allclose(np.sort_complex(np.array(s.eigenvalues)), ref, rtol=1e-9, atol=1e-9 * max(1.0, s.scale))


def test_bazykin_vertex_trace():
    k0, b, r, sigma, a = 1.0, 1.0, 1.0, 1.0, 1.0
    m = ModelInstance.create("Bazykin", r=r, k=k0 + b, a=a, b=b, e=1, d=0.1, sigma=sigma)
    cond, s = condition_equilibrium(m, m["x_v"])
    tr = spectral_summary(cond, s).trace
    assert tr == pytest.approx(-(k0 + 2 * b) ** 2 * r * sigma / (4 * a * (k0 + b)), rel=1e-12)
    assert tr == pytest.approx(-1.125)


def test_discrete_vertex_j00_is_one():
    m = ModelInstance.create("DiscreteCrowleyMartin", rho=1, k=2, a=1, b=1, c=0.5, gamma=1, d=1)
    cond, s = condition_equilibrium(m, m["x_v"])
    assert abs(spectral_summary(cond, s).J11 - 1.0) <= 1e-12


def test_cm_j11_part_example():
    # a large enough that the nullcline has no pole for every c
    for c in (0.1, 1.0, 10.0):
        m = ModelInstance.create("CrowleyMartin", rho=1, k=2, a=50, b=1, c=c, gamma=1, d=1)
        _, j11, _ = trace_on_nullcline(m, 0.25)
        assert j11 == pytest.approx(0.05, rel=1e-14)


def test_cm_vertex_trace_negative():
    for c in (0.1, 1.0, 10.0):
        m = ModelInstance.create("CrowleyMartin", rho=1, k=2, a=50, b=1, c=c, gamma=1, d=1)
        tr, j11, j22 = trace_on_nullcline(m, 0.5)
        assert j11 == 0.0 and tr == j22 < 0


@pytest.mark.parametrize("family", list(Family))
def test_trace_decomposition_matches_jacobian(family, rng):
    for _ in range(100):
        m = random_model(family, rng)
        prof = nullcline_profile(m)
        x = float(rng.uniform(prof.x_lo, prof.x_hi))
        try:
            cond, s = condition_equilibrium(m, x)
        except OutOfDomain:
            continue
        tr, _, _ = trace_on_nullcline(cond, x)
        full = spectral_summary(cond, s)
        assert tr == pytest.approx(full.trace, rel=1e-12, abs=1e-12 * full.scale)


def test_bazykin_descending_trace_negative(rng):
    n = 0
    while n < 1000:
        m = random_model("Bazykin", rng)
        x = float(rng.uniform(m["x_v"], m["k"]))
        if x == m["x_v"]:
            continue
        assert trace_on_nullcline(m, x)[0] < 0
        n += 1


@pytest.mark.parametrize("family", list(Family))
def test_sign_structure_at_equilibria(family, rng):
    seen = 0
    while seen < 250:
        m = random_model(family, rng)
        for e in find_coexistence_equilibria(m):
            j = jacobian(m, e.state)
            if family.is_map:
                j = j - np.eye(2)
            assert j[0, 1] < 0 < j[1, 0]
            if family is not Family.BAZYKIN:
                assert j[1, 1] <= 0
            seen += 1
    # Bazykin: J22 at the equilibrium is -sigma y*
    for _ in range(200):
        m = random_model("Bazykin", rng)
        for e in find_coexistence_equilibria(m):
            assert jacobian(m, e.state)[1, 1] == pytest.approx(-m["sigma"] * e.y, rel=1e-8, abs=1e-12)


def test_map_trace_identity(rng):
    for _ in range(1000):
        m = random_model("DiscreteCrowleyMartin", rng)
        s = tuple(log_uniform(rng, 0.05, 5, 2))
        t_map = spectral_summary(m, s).trace
        t_flow = spectral_summary(m.as_flow(), s).trace
        assert abs(t_map - (2 + t_flow)) <= 1e-12 * max(1.0, abs(t_map))


def test_rigidity_bazykin():
    m = ModelInstance.create("Bazykin", r=1, k=2, a=1, b=1, e=1, d=0.1, sigma=1)
    (cp,) = critical_points(m)
    rep = rigidity_report(m, cp, [0.5, 1, 2, 5])
    assert rep.hopf_blocked and rep.ns_blocked is None
    for smp in rep.samples:
        expected = -(1 + 2) ** 2 / (4 * smp.param_value * 2)
        assert smp.summary.trace == pytest.approx(expected, rel=1e-12)


def test_rigidity_cm_and_map():
    m = ModelInstance.create("CrowleyMartin", rho=1, k=2, a=20, b=1, c=0.5, gamma=1, d=1)
    (cp,) = critical_points(m)
    assert rigidity_report(m, cp, [0.1, 1, 10]).hopf_blocked
    mm = m.as_map()
    rep = rigidity_report(mm, cp, [0.1, 1, 10])
    assert all(abs(s.summary.J11 - 1) <= 1e-12 for s in rep.samples)
    assert rep.ns_blocked is True


def test_rigidity_map_vertex_reaches_unit_det():
    # at c = a r/((1 + r) h) the vertex fixed point has det = 1, so the map is not blocked there
    p = dict(rho=1.0, k=2.0, a=1.0, b=1.0, d=1.0)
    x = 0.5
    r = p["rho"] * (1 - x / p["k"]) / (1 + p["b"] * x)
    h = p["rho"] * (1 - x / p["k"]) * (1 + p["b"] * x)
    c_star = p["a"] * r / ((1 + r) * h)
    m = ModelInstance.create("DiscreteCrowleyMartin", c=0.1, gamma=1, **p)
    (cp,) = critical_points(m)
    rep = rigidity_report(m, cp, [c_star])
    assert abs(rep.det_at_critical - 1) <= 1e-12
    assert rep.ns_blocked is False


def test_rigidity_holling_blocked_at_both_critical_points():
    m = ModelInstance.create("HollingIV", h10=1, delta=1, beta=1)
    for cp in critical_points(m):
        rep = rigidity_report(m, cp, [0.5, 1, 2])
        assert rep.hopf_blocked
        assert all(abs(s.summary.J11) <= 1e-12 for s in rep.samples)


def test_rigidity_no_cep():
    m = ModelInstance.create("CrowleyMartin", rho=1, k=2, a=1, b=1, c=0.5, gamma=1, d=1)
    (cp,) = critical_points(m)
    with pytest.raises(NoCEPAtCriticalPoint):
        rigidity_report(m, cp, [5.0, 8.0])  # c h(x_v) >= a: pole at the vertex
