import pytest

from crossed_desc import (
    constant_diagram,
    fatten_diagram,
    identity_diagram_morphism,
)
from crossed_desc.fixtures import NAMED_CROSSED, fix_a, fix_b, fix_c, fix_cech


@pytest.fixture(scope="session")
def diag_a():
    return fix_a()


@pytest.fixture(scope="session")
def diag_b():
    return fix_b()


@pytest.fixture(scope="session")
def diag_c():
    return fix_c()


@pytest.fixture(scope="session")
def diag_cech():
    return fix_cech(2)


@pytest.fixture(scope="session")
def diag_s3():
    return constant_diagram(NAMED_CROSSED["inner-s3"]())


@pytest.fixture(scope="session")
def fat_a(diag_a):
    """(fattened diagram, inclusion) for the two-object copy of diag_a."""
    return fatten_diagram(diag_a, 2)


@pytest.fixture(scope="session")
def fat_cech(diag_cech):
    return fatten_diagram(diag_cech, 2)


@pytest.fixture(scope="session")
def fat_s3(diag_s3):
    return fatten_diagram(diag_s3, 2)


@pytest.fixture(scope="session")
def id_a(diag_a):
    return identity_diagram_morphism(diag_a)
