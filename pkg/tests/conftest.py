import pytest

from helpers import make_p1, make_p2


@pytest.fixture
def p1():
    return make_p1()


@pytest.fixture
def p2():
    return make_p2()
