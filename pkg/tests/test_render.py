import xml.etree.ElementTree as ET

import numpy as np
import pytest
from shapely.geometry import Polygon
from shapely.ops import unary_union

from lingifs import GifsError, catalogue, heads_tails
from lingifs.chain import diameter_bound
from lingifs.render import (InitialPattern, approximate, default_pattern, point_pattern, to_svg,
                            vertex_colour)
from lingifs.system import enumerate_cylinders

SVG = "{http://www.w3.org/2000/svg}"


def test_depth_zero_is_the_pattern(heighway):
    pat = default_pattern(heighway)
    got = approximate(heighway, pat, "1", 0)
    assert np.allclose(got, [0, 1 + 1j])


def test_default_pattern_ends_are_head_and_tail():
    for name in catalogue.names():
        g = catalogue.get(name).system
        ht = heads_tails(g)
        pat = default_pattern(g, ht)
        for v in g.vertices:
            assert pat.start(v) == ht.head[v] and pat.end(v) == ht.tail[v]


def test_point_pattern_counts():
    e = catalogue.get("hilbert")
    assert len(approximate(e.system, point_pattern(e.system, e.point_pattern), "1", 1)) == 4
    e = catalogue.get("heighway")
    pts = approximate(e.system, point_pattern(e.system, e.point_pattern), "1", 8)
    assert len(pts) == 256


def test_default_pattern_joins_without_connectors(koch):
    pts = approximate(koch, default_pattern(koch), "1", 3)
    assert len(pts) == 4 ** 3 + 1
    assert np.allclose(np.abs(np.diff(pts)), 3.0 ** -3)
    g = catalogue.get("gosper").system
    pts = approximate(g, default_pattern(g), "1", 2)
    assert len(pts) == 50
    assert pts[0] == 0 and abs(pts[-1] - g.out("1")[0].map.alpha ** -1) < 1e-9


@pytest.mark.parametrize("name", ["heighway", "hilbert", "four-star", "sierpinski-curve"])
def test_point_connectors_are_short(name):
    e = catalogue.get(name)
    g = e.system
    n = 4
    bound = 2 * diameter_bound(g) * g.r_max ** n
    for v in g.vertices:
        pts = approximate(g, point_pattern(g), v, n)
        assert np.abs(np.diff(pts)).max() <= bound + 1e-12


def test_approximate_rejects_bad_input(heighway):
    with pytest.raises(ValueError):
        approximate(heighway, default_pattern(heighway), "1", -1)
    with pytest.raises(GifsError):
        approximate(heighway, InitialPattern({"1": (0,)}), "1", 2)
    with pytest.raises(GifsError):
        InitialPattern({"1": ()})


def test_shrink():
    pat = InitialPattern({"a": (0, 1j, 2)})
    s = pat.shrunk(0.1)
    assert abs(s.start("a") - 0.1) < 1e-15 and abs(s.end("a") - 1.9) < 1e-15
    assert abs(s.curves["a"][1] - (0.1 + 0.9j)) < 1e-15
    assert InitialPattern({"a": (0.5,)}).shrunk(0.1).curves == {"a": (0.5,)}
    with pytest.raises(GifsError):
        pat.shrunk(1.0)


def test_svg_structure():
    svg = to_svg([(np.array([0, 1 + 1j]), "#ff0000")])
    root = ET.fromstring(svg)
    assert root.tag == SVG + "svg" and root.get("version") == "1.1"
    paths = root.findall(SVG + "path")
    assert len(paths) == 1
    d = paths[0].get("d")
    assert d.count("M") == 1 and d.count("L") == 1
    # y axis points up in the plane and down in SVG
    assert d == "M0 0 L1 -1"
    x, y, w, h = map(float, root.get("viewBox").split())
    assert x < 0 < x + w and y < -1 < 0 < y + h


def test_svg_is_deterministic():
    g = catalogue.get("four-star").system
    pat = default_pattern(g)
    lines = [(approximate(g, pat, v, 3), vertex_colour(k, len(g))) for k, v in enumerate(g.vertices)]
    a = to_svg(lines)
    b = to_svg([(p.copy(), c) for p, c in lines])
    assert a == b
    assert len(ET.fromstring(a).findall(SVG + "path")) == 6
    assert "-0 " not in a and "e" not in a.split("viewBox")[1].split('"')[1]


def test_svg_rejects_empty():
    with pytest.raises(GifsError):
        to_svg([])
    with pytest.raises(GifsError):
        to_svg([(np.zeros(0, dtype=complex), "#000000")])


def test_vertex_colours_distinct():
    cols = {vertex_colour(k, 6) for k in range(6)}
    assert len(cols) == 6 and all(c.startswith("#") and len(c) == 7 for c in cols)


def _tile(m):
    c = 0.5 + 0.5j
    corners = [0, 1, 1 + 1j, 1j]
    return (corners[m - 1], corners[m % 4], c)


def test_sierpinski_cylinders_tile_the_triangles():
    g = catalogue.get("sierpinski-curve").system
    tiles = [np.array(_tile(m)) for m in (1, 2, 3, 4)]
    for k, v in enumerate(g.vertices):
        table = enumerate_cylinders(g, v, 4)
        assert not table.conj.any()
        corners = np.array([tiles[t] for t in table.target])
        img = table.alpha[:, None] * corners + table.beta[:, None]
        polys = [Polygon([(z.real, z.imag) for z in row]) for row in img]
        whole = Polygon([(z.real, z.imag) for z in tiles[k]])
        union = unary_union(polys)
        assert sum(p.area for p in polys) == pytest.approx(0.25, abs=1e-12)
        assert union.area == pytest.approx(0.25, abs=1e-12)
        assert union.symmetric_difference(whole).area < 1e-12
