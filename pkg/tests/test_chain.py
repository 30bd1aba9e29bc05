import cmath
import math

import numpy as np
import pytest

from lingifs import (OrderedGifs, PathWord, Similitude, catalogue, chain_check, diameter_bound,
                     hata_condition, heads_tails, linearity_probe)
from lingifs.chain import cylinder_anchors


def brute_extreme(g, v, pick, depth=60):
    # apply the maps of the lowest/highest coding to an arbitrary point
    maps = []
    for _ in range(depth):
        e = g.out(v)[pick]
        maps.append(e.map)
        v = e.target
    z = 0.123 + 0.456j
    for m in reversed(maps):
        z = m(z)
    return z


@pytest.mark.parametrize("name", catalogue.names())
def test_heads_tails_match_brute_force(name):
    g = catalogue.get(name).system
    ht = heads_tails(g)
    for v in g.vertices:
        assert abs(ht.head[v] - brute_extreme(g, v, 0)) < 1e-9
        assert abs(ht.tail[v] - brute_extreme(g, v, -1)) < 1e-9


def test_heighway_heads_and_tails(heighway):
    ht = heads_tails(heighway)
    assert ht.head == pytest.approx({"1": 0, "-1": 1 + 1j})
    assert ht.tail == pytest.approx({"1": 1 + 1j, "-1": 0})
    assert ht.lowest["1"].take(5) == (0, 0, 0, 0, 0)
    assert ht.highest["1"].take(4) == (1, 1, 1, 1)


def test_end_words_walk_to_the_anchor():
    g = catalogue.get("four-star").system
    ht = heads_tails(g)
    for v in g.vertices:
        w = PathWord(v, ht.lowest[v].take(40))
        from lingifs.chain import cylinder_map
        assert abs(cylinder_map(g, w)(ht.head[g.terminal(w)]) - ht.head[v]) < 1e-9


@pytest.mark.parametrize("name", catalogue.names())
def test_catalogue_passes_chain_check(name):
    rep = chain_check(catalogue.get(name).system)
    assert rep.passed and rep.max_gap < 1e-9


def test_koch_shared_points(koch):
    # consecutive pieces meet at 1/3, 1/2 + i sqrt3/6, 2/3
    ht = heads_tails(koch)
    expect = [1 / 3, 0.5 + 1j * math.sqrt(3) / 6, 2 / 3]
    for k, p in enumerate(expect):
        assert koch.out("1")[k].map(ht.tail["1"]) == pytest.approx(p)


def test_swapped_heighway_reports_gaps(heighway):
    rep = chain_check(heighway.with_order("1", [1, 0]))
    assert not rep.passed
    assert {v.vertex for v in rep.violations} == {"1", "-1"}
    for v in rep.violations:
        assert v.gap == pytest.approx(abs(0.4 + 1.2j))


def test_chain_tolerance_validation(heighway):
    with pytest.raises(ValueError):
        chain_check(heighway, tol=-1)


def test_hata_condition():
    koch = [e.map for e in catalogue.get("koch").system.out("1")]
    assert hata_condition(koch, 1e-12) == []
    # Fix S1 = 0, Fix S2 = 1.2: S2(0) = 0.6 but S1(1.2) = 0.48
    bad = [Similitude(0.4), Similitude(0.5, 0.6)]
    assert hata_condition(bad, 1e-12) == [pytest.approx(0.12)]


def test_diameter_bound_is_an_upper_bound():
    rng = np.random.default_rng(1)
    for name in catalogue.names():
        g = catalogue.get(name).system
        d = diameter_bound(g)
        ht = heads_tails(g)
        far = 0.0
        for v in g.vertices:
            pts = cylinder_anchors(g, PathWord(v), 5, ht)
            sample = pts[rng.choice(len(pts), min(len(pts), 3000), replace=False)]
            far = max(far, np.abs(sample[:, None] - sample[None, :]).max())
        assert far <= d
        assert d <= 1.5 * far


def test_diameter_bound_known_values(koch):
    # Koch curve: diameter exactly 1
    assert 1.0 <= diameter_bound(koch) < 1.01
    segment = OrderedGifs.ifs([Similitude(0.5), Similitude(0.5, 0.5)])
    assert 1.0 <= diameter_bound(segment) <= 1.01


def test_anchors_lie_in_cylinder(heighway):
    ht = heads_tails(heighway)
    d = diameter_bound(heighway)
    w = PathWord("1", (0, 1, 1))
    pts = cylinder_anchors(heighway, w, 4, ht)
    assert len(pts) == 16
    r = np.prod([m.ratio() for m in heighway.edge_maps(w)])
    assert np.abs(pts - pts[0]).max() <= d * r + 1e-12


@pytest.mark.parametrize("name", catalogue.names())
def test_linearity_probe_accepts_catalogue(name):
    g = catalogue.get(name).system
    depth = 3 if max(len(r) for r in g.edges) > 4 else 5
    rep = linearity_probe(g, 2, depth)
    assert rep.passed and rep.pairs_checked > 0


def test_linearity_probe_flags_broken_order():
    # Koch pieces visited out of order: 1st and 3rd pieces do not touch
    koch = catalogue.get("koch").system
    bad = koch.with_order("1", [0, 2, 1, 3])
    assert not chain_check(bad).passed
    rep = linearity_probe(bad, 1, 6)
    assert not rep.passed
    assert rep.separated[0].left == (0,) and rep.separated[0].right == (1,)
