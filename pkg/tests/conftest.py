import numpy as np
import pytest

from tpgabor import (Gaussian, HyperbolicSecant, OneSidedExp, choose_M,
                     locate_zero, reduce, select_perturbation,
                     two_sided_exponential)


@pytest.fixture(scope="session")
def gauss():
    return Gaussian(gamma=np.pi)


@pytest.fixture(scope="session")
def tsexp():
    return two_sided_exponential(rate=1.0)


@pytest.fixture(scope="session")
def sech():
    return HyperbolicSecant(a=1.0)


@pytest.fixture(scope="session")
def ose():
    return OneSidedExp(gamma=1.0)


@pytest.fixture(scope="session")
def zak_zeros(gauss, tsexp, sech):
    """Located Zak zeros for the windows satisfying the unique-zero hypothesis."""
    return {"gauss": locate_zero(gauss), "tsexp": locate_zero(tsexp),
            "sech": locate_zero(sech)}


def make_pert(lat, x, x0):
    """Admissible perturbation for a reduced lattice at anchor x."""
    return select_perturbation(lat, x, x0, M=choose_M(x0 % 1.0))


@pytest.fixture(scope="session")
def gauss_pert_23(gauss, zak_zeros):
    lat = reduce("2/3", 1)
    return lat, make_pert(lat, 0.1, zak_zeros["gauss"].x0)
