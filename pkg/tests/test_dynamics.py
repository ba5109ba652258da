import math

import numpy as np
import pytest

from preyloc.dynamics import (
    CONVERGES,
    DIVERGENT,
    INVARIANT_CIRCLE,
    LIMIT_CYCLE,
    UNDETERMINED,
    Trajectory,
    classify_orbit,
    confirm_bifurcation,
    default_step,
    integrate_flow,
    iterate_map,
)
from preyloc.equilibria import find_coexistence_equilibria
from preyloc.errors import InsufficientSamples, NonFiniteState
from preyloc.loci import bazykin_hopf, crowley_martin_hopf
from preyloc.models import ModelInstance, map_step
from preyloc.spectral import spectral_summary


@pytest.fixture
def cm_coexist():
    return ModelInstance.create("CrowleyMartin", rho=1, k=2, a=1, b=1, c=0.5, gamma=3, d=1)


def synthetic(times, xs, ys, is_map=False):
    return Trajectory(np.asarray(times, float), np.column_stack([xs, ys]), 1.0, "synthetic", is_map)


def test_equilibrium_is_fixed(cm_coexist):
    (eq,) = find_coexistence_equilibria(cm_coexist)
    traj = integrate_flow(cm_coexist, eq.state, 50.0, 0.01)
    assert np.max(np.abs(traj.states - np.array(eq.state))) <= 1e-10
    mm = cm_coexist.as_map()
    it = iterate_map(mm, eq.state, 1000)
    assert np.max(np.abs(it.states - np.array(eq.state))) <= 1e-10


def test_rk4_fourth_order(cm_example):
    s0 = (0.5, 0.4)
    ref = integrate_flow(cm_example, s0, 4.0, 1e-3).final
    e1 = np.hypot(*(np.array(integrate_flow(cm_example, s0, 4.0, 0.1).final) - ref))
    e2 = np.hypot(*(np.array(integrate_flow(cm_example, s0, 4.0, 0.05).final) - ref))
    assert 12 <= e1 / e2 <= 20


def test_iterate_map_is_exact(cm_example):
    mm = cm_example.as_map()
    traj = iterate_map(mm, (0.3, 0.2), 20)
    s = (0.3, 0.2)
    for k in range(1, 21):
        s = map_step(mm, s)
        assert tuple(traj.states[k]) == tuple(s)


def test_input_validation(cm_example):
    with pytest.raises(ValueError):
        iterate_map(cm_example, (0.3, 0.2), 10)
    with pytest.raises(ValueError):
        integrate_flow(cm_example.as_map(), (0.3, 0.2), 1.0, 0.1)
    with pytest.raises(NonFiniteState):
        integrate_flow(cm_example, (math.nan, 0.2), 1.0, 0.1)


def test_synthetic_spiral_converges():
    t = np.linspace(0, 200, 4000)
    r = 0.5 * np.exp(-0.05 * t)
    v = classify_orbit(synthetic(t, 1 + r * np.cos(t), 1 + r * np.sin(t)), (1, 1))
    assert v.kind == CONVERGES
    assert v.decay_slope == pytest.approx(-0.05, rel=1e-6)


def test_synthetic_circle():
    t = np.linspace(0, 400, 8000)
    v = classify_orbit(synthetic(t, 1 + 0.2 * np.cos(t), 1 + 0.2 * np.sin(t)), (1, 1))
    assert v.kind == LIMIT_CYCLE
    assert v.amplitude == pytest.approx(0.2, rel=1e-6)
    assert v.period_estimate == pytest.approx(2 * math.pi, rel=0.02)


def test_synthetic_invariant_circle_for_maps():
    n = np.arange(4000)
    theta = 0.3 * n
    v = classify_orbit(synthetic(n, 1 + 0.1 * np.cos(theta), 1 + 0.1 * np.sin(theta), is_map=True), (1, 1))
    assert v.kind == INVARIANT_CIRCLE


def test_blowup_divergent(cm_example):
    t = np.linspace(0, 10, 3000)
    v = classify_orbit(synthetic(t, np.exp(t), np.exp(t)), (1, 1))
    assert v.kind == DIVERGENT
    flagged = Trajectory(t, np.ones((3000, 2)), 1.0, "synthetic", divergent=True)
    assert classify_orbit(flagged, (1, 1)).kind == DIVERGENT


def test_undetermined_for_slow_drift():
    t = np.linspace(0, 10, 3000)
    v = classify_orbit(synthetic(t, 1 + 0.1 + 0 * t, 1 + 0 * t), (1, 1))
    assert v.kind == UNDETERMINED


def test_insufficient_samples():
    t = np.linspace(0, 10, 1500)
    with pytest.raises(InsufficientSamples):
        classify_orbit(synthetic(t, t, t), (0, 0))


def test_decay_rate_matches_eigenvalue():
    m = ModelInstance.create("CrowleyMartin", rho=1, k=2, a=1, b=1, c=0.5, gamma=3, d=1)
    (eq,) = find_coexistence_equilibria(m)
    s = spectral_summary(m, eq.state)
    re = max(lam.real for lam in s.eigenvalues)
    assert re < 0
    # short enough that the radius stays well above rounding level
    traj = integrate_flow(m, (eq.x + 1e-3, eq.y), 12.0 / abs(re), default_step(m, eq.state))
    v = classify_orbit(traj, eq.state)
    assert v.kind == CONVERGES
    assert v.decay_slope == pytest.approx(re, rel=0.1)


def test_default_step_clamped(cm_coexist):
    (eq,) = find_coexistence_equilibria(cm_coexist)
    dt = default_step(cm_coexist, eq.state)
    assert 1e-4 <= dt <= 1e-2


def test_bazykin_hopf_confirmation_flips():
    conf = confirm_bifurcation(bazykin_hopf(1, 1, 1, 1, 1))
    assert conf.flips and conf.matches
    assert {conf.below.verdict.kind, conf.above.verdict.kind} == {CONVERGES, LIMIT_CYCLE}


def test_cm_hopf_confirmation_flips():
    m = ModelInstance.create("CrowleyMartin", rho=1, k=2, a=1, b=1, c=0.01, gamma=1, d=1)
    conf = confirm_bifurcation(crowley_martin_hopf(m, 0.25))
    assert conf.flips and conf.matches
