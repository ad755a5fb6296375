import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from l2approx.census import builtin_entry


@pytest.fixture(scope="session")
def fig8():
    return builtin_entry("figure-eight")


@pytest.fixture(scope="session")
def whitehead():
    return builtin_entry("whitehead")


@pytest.fixture(scope="session")
def sanov():
    return builtin_entry("sanov-f2")


@pytest.fixture(scope="session")
def z_entry():
    return builtin_entry("z-unipotent")


@pytest.fixture(scope="session")
def c2():
    return builtin_entry("c2-central")


@pytest.fixture(scope="session")
def z2():
    return builtin_entry("z2-lattice")
