import math

import numpy as np
import pytest

from preyloc.models import Family, ModelInstance

# acceptance results: criterion number -> (passed, message)
ACCEPTANCE = {}


def record_criterion(number, passed, message):
    ACCEPTANCE[number] = (bool(passed), message)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, message = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {message}")


def log_uniform(rng, lo=0.1, hi=10.0, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def random_model(family, rng, redraws=200):
    """Random admissible instance with every parameter log-uniform on [0.1, 10]."""
    family = Family.parse(family)
    from preyloc.models import SCHEMAS

    for _ in range(redraws):
        raw = {name: float(log_uniform(rng)) for name in SCHEMAS[family]}
        if family is Family.HOLLING_IV:
            raw["h2"] = 0.0
        try:
            return ModelInstance.create(family, **raw)
        except ValueError:
            continue
    raise RuntimeError("no admissible draw")


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def cm_example():
    return ModelInstance.create("CrowleyMartin", rho=1, k=2, a=1, b=1, c=0.5, gamma=1, d=1)


@pytest.fixture
def bazykin_example():
    return ModelInstance.create("Bazykin", r=1, k=3, a=1, b=1, e=1, d=0.1, sigma=1)
