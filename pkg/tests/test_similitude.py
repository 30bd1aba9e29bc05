import cmath

import pytest
from hypothesis import given, strategies as st

from lingifs import Similitude, apply, compose, compose_all, fixed_point

coord = st.floats(-3, 3, allow_nan=False)
cplx = st.builds(complex, coord, coord)
small = st.builds(lambda r, t: r * cmath.exp(1j * t), st.floats(0.05, 0.95), st.floats(-4, 4))
maps = st.builds(Similitude, small, cplx, st.booleans())


def test_apply_plain_and_reflected():
    assert apply(Similitude(2j, 1), 1 + 1j) == 2j * (1 + 1j) + 1
    assert apply(Similitude(2j, 1, True), 1 + 1j) == 2j * (1 - 1j) + 1


def test_heighway_maps_carry_segment_ends():
    phi1 = Similitude((1 - 1j) / 2)
    phi2 = Similitude(-(1 + 1j) / 2, 1 + 1j)
    assert phi1(1 + 1j) == pytest.approx(1)
    assert phi2(0) == 1 + 1j and phi2(1 + 1j) == pytest.approx(1)


@given(maps, maps, cplx)
def test_compose_matches_nested_application(f, g, z):
    h = compose(f, g)
    assert abs(h(z) - f(g(z))) <= 1e-9 * (1 + abs(z))
    assert h.conj == (f.conj != g.conj)


@given(st.lists(maps, min_size=1, max_size=5), cplx)
def test_compose_all_is_left_to_right(ms, z):
    expect = z
    for m in reversed(ms):
        expect = m(expect)
    assert abs(compose_all(ms)(z) - expect) <= 1e-9 * (1 + abs(z))


@given(maps)
def test_fixed_point_is_fixed(m):
    p = fixed_point(m)
    assert abs(m(p) - p) <= 1e-9 * (1 + abs(p))


def test_fixed_point_examples():
    assert fixed_point(Similitude(0.5, 1)) == 2
    # z = conj(z)/2 + i/2  ->  x = x/2, y = -y/2 + 1/2
    assert fixed_point(Similitude(0.5, 0.5j, True)) == pytest.approx(1j / 3)


def test_fixed_point_needs_contraction():
    with pytest.raises(ValueError):
        fixed_point(Similitude(1.0, 1))


def test_ratio_and_contraction():
    s = Similitude(0.6 + 0.8j)
    assert s.ratio() == pytest.approx(1.0)
    assert not s.is_contraction
    assert Similitude(0.3j).is_contraction
    with pytest.raises(ValueError):
        compose_all([])
