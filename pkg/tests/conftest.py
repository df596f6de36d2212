import pytest

from desco import (
    MAIN,
    MulticastParams,
    ccsco_construct,
    choose_coefficients,
    desco_construct,
    expanded_musco_construct,
    iasco_construct,
)


@pytest.fixture(scope="session")
def sco12():
    # Table I(a): p[i] = s_1[i-2] + s_2[i-1] over GF(2)
    return choose_coefficients(1, 2, MAIN, 1, m=1)


@pytest.fixture(scope="session")
def sco24():
    # Table I(b): the same diagonal with interleave step 2
    return choose_coefficients(1, 2, MAIN, 2, m=1)


@pytest.fixture(scope="session")
def desco122():
    return desco_construct(1, 2, 2, m=1)


@pytest.fixture(scope="session")
def desco232():
    return desco_construct(2, 3, 2)


@pytest.fixture(scope="session")
def desco472():
    return desco_construct(4, 7, 2)


@pytest.fixture(scope="session")
def cc1224():
    return ccsco_construct(MulticastParams(1, 2, 2, 4), m=1)


@pytest.fixture(scope="session")
def ia122():
    return iasco_construct(1, 2, 2, 2, m=1)


@pytest.fixture(scope="session")
def expanded():
    return expanded_musco_construct()
