import numpy as np
import pytest

from lspgb import Oracle
from lspgb.objectives import CoverageGraph, MaxCover, Modular


@pytest.fixture
def path3():
    """Path graph 0-1-2."""
    return CoverageGraph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def path_cover(path3):
    return Oracle(MaxCover(path3))


def modular(weights, **kw):
    return Oracle(Modular(np.asarray(weights, dtype=float)), **kw)
