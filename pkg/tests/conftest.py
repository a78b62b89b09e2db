"""Shared fixtures.

Sharp constants, Legendre solutions and Bellman candidates are expensive
enough to build once per session.
"""

import math

import pytest

from bellman.candidate import BellmanCandidate
from sharp_constant.constants import SharpConstants, compute_sharp_constants
from specfun.legendre import LegendreSolution

C6 = 2.0 + math.sqrt(3.0)
C12 = 4.0 + math.sqrt(15.0)


@pytest.fixture(scope="session")
def sol6() -> LegendreSolution:
    return LegendreSolution.from_p(6.0)


@pytest.fixture(scope="session")
def consts6(sol6: LegendreSolution) -> SharpConstants:
    return compute_sharp_constants(6.0, sol=sol6)


@pytest.fixture(scope="session")
def candidate6(consts6: SharpConstants, sol6: LegendreSolution) -> BellmanCandidate:
    return BellmanCandidate(consts=consts6, sol=sol6)


@pytest.fixture(scope="session")
def candidate12() -> BellmanCandidate:
    return BellmanCandidate.for_p(12.0)
