import os

import numpy as np
import pytest
from hypothesis import settings

from fdqoct import ObjectSpec, SourceSpec, build_frequency_grid, synthesize_joint_spectrum

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("ci", max_examples=150, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

UM = 1e-6
NM = 1e-9


@pytest.fixture(scope="session")
def source():
    return SourceSpec()


@pytest.fixture(scope="session")
def grid(source):
    return build_frequency_grid(source)


@pytest.fixture(scope="session")
def three_layer():
    """Interfaces at 200, 340 and 480 um, R = 0.5 each."""
    return ObjectSpec.from_depths([200 * UM, 340 * UM, 480 * UM])


@pytest.fixture(scope="session")
def three_layer_js(three_layer, source):
    return synthesize_joint_spectrum(three_layer, source)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# one line per acceptance criterion, shown after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
