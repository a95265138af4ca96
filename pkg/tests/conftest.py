import pytest

from consfree import corpus
from consfree.engines import Budget


@pytest.fixture(scope="session")
def parity():
    return corpus.load_program("parity")


@pytest.fixture(scope="session")
def parity2():
    return corpus.load_program("parity2")


@pytest.fixture(scope="session")
def q_program():
    return corpus.load_program("q")


@pytest.fixture(scope="session")
def endsone():
    return corpus.load_program("endsone")


@pytest.fixture(scope="session")
def mcv_program():
    return corpus.load_program("mcv")


@pytest.fixture(scope="session")
def budget():
    return Budget(10**6)


def all_inputs(max_len):
    """Every bit string of length 0..max_len, shortest first."""
    for n in range(max_len + 1):
        for i in range(2**n):
            yield tuple((i >> b) & 1 for b in range(n))
