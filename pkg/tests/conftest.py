"""Shared fixtures: one backend handle per kind, plus cached references.

Backends are stateless value factories, so session scope is safe; the
reference cache inside hyperpi.reference already memoizes digit strings.
"""

import pytest

from hyperpi.backends import BackendKind, BackendSpec, make_backend
from hyperpi.reference import machin_pi


@pytest.fixture(scope="session")
def rational():
    return make_backend(BackendSpec(BackendKind.RATIONAL))


@pytest.fixture(scope="session")
def f64():
    return make_backend(BackendSpec(BackendKind.FLOAT64))


@pytest.fixture(scope="session")
def f64c():
    return make_backend(BackendSpec(BackendKind.FLOAT64_COMPENSATED))


@pytest.fixture(scope="session")
def ap128():
    return make_backend(BackendSpec(BackendKind.BIGFLOAT, precision_bits=128))


@pytest.fixture(scope="session")
def ap256():
    return make_backend(BackendSpec(BackendKind.BIGFLOAT, precision_bits=256))


@pytest.fixture(scope="session")
def ref30():
    return machin_pi(30)


@pytest.fixture(scope="session")
def ref50():
    return machin_pi(50)


@pytest.fixture(scope="session")
def ref100():
    return machin_pi(100)
