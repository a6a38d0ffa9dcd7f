import numpy as np
import pytest

from modules.models.catalogue import model


@pytest.fixture(scope='session')
def pinched_rp2():
    return model('pinched_rp2')


@pytest.fixture(scope='session')
def torus():
    return model('torus')


@pytest.fixture(scope='session')
def rp2():
    return model('rp2')


@pytest.fixture(scope='session')
def nodal_sphere():
    return model('nodal_sphere')


@pytest.fixture(scope='session')
def pinched_torus():
    return model('pinched_torus')


@pytest.fixture(scope='session')
def solid_torus():
    return model('solid_torus_pair')


@pytest.fixture(scope='session')
def disk():
    return model('disk_pair')


@pytest.fixture
def rng():
    return np.random.default_rng(20)
