from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from ademcartan.cochains import BUNDLED, cohomology, load_model

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def models():
    return {name: load_model(name) for name in BUNDLED}


@pytest.fixture(scope="session")
def torus(models):
    return models["torus"]


@pytest.fixture(scope="session")
def cohomologies(models):
    return {name: cohomology(A) for name, A in models.items()}


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
