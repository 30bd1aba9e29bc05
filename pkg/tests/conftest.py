import cmath
import math

import pytest

from lingifs import MarkedLatticePath, OrderedGifs, Similitude, catalogue


@pytest.fixture(scope="session")
def heighway():
    return catalogue.get("heighway").system


@pytest.fixture(scope="session")
def koch():
    return catalogue.get("koch").system


W6 = cmath.exp(1j * math.pi / 3)


def gosper_trace():
    pts = [0j]
    for s in (1, W6, -1, W6 ** 2, 1, 1, W6.conjugate()):
        pts.append(pts[-1] + s)
    return MarkedLatticePath("triangle", tuple(pts))


def cantor():
    return OrderedGifs.ifs([Similitude(1 / 3), Similitude(1 / 3, 2 / 3)])
