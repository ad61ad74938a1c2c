import math

import pytest

from shiftrec.shifts import FullShift, SGapShift, golden_mean_shift

PHI = (1 + math.sqrt(5)) / 2
LOG_PHI = math.log(PHI)


@pytest.fixture(scope="session")
def full2():
    return FullShift(2)


@pytest.fixture(scope="session")
def golden():
    return golden_mean_shift()


@pytest.fixture(scope="session")
def even_gaps():
    return SGapShift([], ("ap", 0, 2))
