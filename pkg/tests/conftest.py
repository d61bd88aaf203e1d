"""Shared fixtures: the canonical constant-slope model and its companions."""

import pytest

from geolorenz import (
    CoordinatePotential,
    LorenzMap1D,
    RoofFunction,
    SkewProductReturnMap,
    build_horseshoe,
)


@pytest.fixture(scope="session")
def lmap():
    return LorenzMap1D(alpha=1.0, beta=1.7)


@pytest.fixture(scope="session")
def skew(lmap):
    return SkewProductReturnMap(lmap, rho=0.3, c_H=0.5)


@pytest.fixture(scope="session")
def roof():
    return RoofFunction(c0=1.0, c1=1.0, eta0=0.5)


@pytest.fixture(scope="session")
def coord():
    return CoordinatePotential()


@pytest.fixture(scope="session")
def horseshoe12(lmap):
    # the standard pruned subshift used across the suite
    return build_horseshoe(lmap, 12, 0.002)


@pytest.fixture(scope="session")
def horseshoe6(lmap):
    return build_horseshoe(lmap, 6, 0.002)
