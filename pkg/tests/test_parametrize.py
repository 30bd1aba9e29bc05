import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lingifs import (GifsError, Parametrization, PathWord, build_recording, catalogue, encode,
                     heads_tails, project, spectral_data)
from lingifs.chain import diameter_bound
from lingifs.parametrize import encode_many


@pytest.fixture(scope="module")
def hpar(heighway):
    return Parametrization(heighway)


def test_recording_system_examples(heighway, koch):
    rs = build_recording(heighway, spectral_data(heighway))
    assert rs.h == pytest.approx((1.0, 1.0))
    assert rs.offsets[0] == pytest.approx((0.0, 0.5))
    assert rs.scales[0] == pytest.approx((0.5, 0.5))
    rs = build_recording(koch, spectral_data(koch))
    assert rs.offsets[0] == pytest.approx((0, 0.25, 0.5, 0.75))


@pytest.mark.parametrize("name", catalogue.names())
def test_intervals_partition(name):
    g = catalogue.get(name).system
    rs = build_recording(g, spectral_data(g))
    for v in g.vertices:
        pieces = [rs.interval(g, w) for w in g.paths(v, 2)]
        left = 0.0
        for a, length in pieces:
            assert a == pytest.approx(left, abs=1e-12)
            left = a + length
        assert left == pytest.approx(rs.h[g.index(v)], abs=1e-12)


def test_encode_examples(hpar, heighway):
    assert hpar.encode("1", 0.0, 6).edges == (0,) * 6
    assert hpar.encode("1", 1.0, 6).edges == (1,) * 6
    # breakpoint goes to the upper cylinder
    assert hpar.encode("1", 0.5, 1).edges == (1,)
    assert hpar.encode("1", 0.25, 2).edges == (0, 1)
    with pytest.raises(GifsError):
        hpar.encode("1", 1.5, 3)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1))
def test_encode_lands_in_its_interval(x):
    g = catalogue.get("gosper").system
    rs = build_recording(g, spectral_data(g))
    w = encode(rs, "1", x, 8)
    a, length = rs.interval(g, w)
    assert a - 1e-12 <= x <= a + length + 1e-12


@pytest.mark.parametrize("name", ["koch", "heighway", "four-star"])
def test_encode_many_matches_encode(name):
    g = catalogue.get(name).system
    rs = build_recording(g, spectral_data(g))
    v = g.vertices[0]
    xs = np.random.default_rng(0).random(300) * rs.h[0]
    got = encode_many(rs, v, xs, 10)
    for x, row in zip(xs, got):
        assert tuple(row) == encode(rs, v, x, 10).edges


def test_project(heighway):
    ht = heads_tails(heighway)
    assert project(heighway, ht, PathWord("1", (0,))) == 0
    assert project(heighway, ht, PathWord("1", (0,) * 7)) == ht.head["1"]
    d = diameter_bound(heighway)
    rng = np.random.default_rng(2)
    for _ in range(50):
        w = PathWord("1", tuple(rng.integers(0, 2, 5)))
        u = w.extend(rng.integers(0, 2, 12))
        r = np.prod([m.ratio() for m in heighway.edge_maps(w)])
        assert abs(project(heighway, ht, u) - project(heighway, ht, w)) <= d * r + 1e-12


def test_psi_examples(hpar):
    assert hpar.psi("1", 0.0, 1e-9) == 0
    assert abs(hpar.psi("1", 1.0, 1e-9) - (1 + 1j)) < 1e-9
    assert abs(hpar.psi("1", 0.5, 1e-9) - 1) < 1e-9
    assert abs(hpar.psi("-1", 0.0, 1e-9) - (1 + 1j)) < 1e-9
    assert abs(hpar.psi("-1", 1.0, 1e-9)) < 1e-9
    with pytest.raises(ValueError):
        hpar.psi("1", 0.3, 0)


@pytest.mark.parametrize("name", catalogue.names())
def test_psi_ends_are_head_and_tail(name):
    g = catalogue.get(name).system
    par = Parametrization(g)
    ht = heads_tails(g)
    for v in g.vertices:
        assert abs(par.psi(v, 0.0, 1e-10) - ht.head[v]) < 1e-9
        assert abs(par.psi(v, par.length(v), 1e-10) - ht.tail[v]) < 1e-9


def test_psi_respects_tolerance(koch):
    par = Parametrization(koch)
    xs = np.random.default_rng(4).random(200)
    for x in xs:
        fine = par.psi("1", x, 1e-13)
        assert abs(par.psi("1", x, 1e-4) - fine) <= 1e-4
        assert abs(par.psi("1", x, 1e-8) - fine) <= 1e-8


def test_koch_psi_at_quarters(koch):
    # psi(k/4) are the piece junctions
    par = Parametrization(koch)
    expect = [0, 1 / 3, 0.5 + 1j * math.sqrt(3) / 6, 2 / 3, 1]
    for k, z in enumerate(expect):
        assert abs(par.psi("1", k / 4, 1e-12) - z) < 1e-11


def test_psi_batch_is_pointwise_psi():
    g = catalogue.get("four-star").system
    par = Parametrization(g)
    ts = np.sort(np.random.default_rng(8).random(2000))
    ts[0], ts[-1] = 0.0, 1.0
    for v in ("X", "W"):
        got = par.psi_batch(v, ts, 1e-8)
        expect = np.array([par.psi(v, t, 1e-8) for t in ts])
        assert np.abs(got - expect).max() <= 1e-12


def test_psi_batch_ends(hpar):
    got = hpar.psi_batch("1", [0.0, 1.0], 1e-9)
    assert got[0] == 0 and abs(got[1] - (1 + 1j)) < 1e-9
    assert len(hpar.psi_batch("1", [], 1e-9)) == 0


def test_psi_unit_rescales():
    g = catalogue.get("sierpinski-curve").system
    par = Parametrization(g)
    for v in g.vertices:
        assert par.psi_unit(v, 0.3, 1e-9) == par.psi(v, 0.3 * par.length(v), 1e-9)


def test_holder_constant_formula(heighway, koch):
    par = Parametrization(koch)
    assert par.holder_constant() == pytest.approx(6 * par.D)
    hp = Parametrization(heighway)
    assert hp.holder_constant() == pytest.approx(2 * math.sqrt(2) * hp.D)


def test_holder_constant_scales_with_system(heighway):
    from lingifs import Similitude
    c = Parametrization(heighway).holder_constant()
    big = Parametrization(heighway.transformed(Similitude(3.0)))
    assert big.holder_constant() == pytest.approx(3 * c, rel=1e-9)


def test_breakpoint_codings_agree(hpar):
    bound = 2 * hpar.D * hpar.g.r_max ** 40
    n = 0
    for x, lower, upper in hpar.breakpoints("1", 3):
        assert abs(hpar.project(lower) - hpar.project(upper)) <= bound
        n += 1
    assert n == 7
