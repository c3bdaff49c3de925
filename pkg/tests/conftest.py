import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import A1FULL_NU, FIXTURES  # noqa: E402

from fantastack.cones import Cone  # noqa: E402
from fantastack.stacky import affine_toric_data, canonical_stack, fantastack_over_cone  # noqa: E402

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


def cone(name):
    return Cone(FIXTURES[name][0])


def sigma(name):
    return affine_toric_data(cone(name))


def stack(name):
    """Canonical stack of a fixture, or the extra-column stack for A1FULL."""
    if name == "A1FULL":
        return fantastack_over_cone(cone("A1"), A1FULL_NU)
    return canonical_stack(cone(name))


def stack_and_sigma(name):
    f = stack(name)
    return f, f.affine(0)


@pytest.fixture
def fan_path():
    return lambda name: os.path.join(FIXTURE_DIR, f"{name}.fan")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
