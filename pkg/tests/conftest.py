import pytest

from wqbg.coxeter import get_group
from wqbg import qbg as qbg_mod

_QBG_CACHE = {}


@pytest.fixture(scope="session")
def group():
    return get_group


@pytest.fixture(scope="session")
def graph_of():
    def build(label):
        if label not in _QBG_CACHE:
            _QBG_CACHE[label] = qbg_mod.build_qbg(get_group(label))
        return _QBG_CACHE[label]

    return build
