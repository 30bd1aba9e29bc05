"""Approximation curves of an ordered system and a small deterministic SVG writer."""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import quoteattr

import numpy as np

from .chain import HeadTailTable, heads_tails
from .errors import GifsError
from .spectral import barycenters, spectral_data
from .system import OrderedGifs, enumerate_cylinders

DEGENERATE = 1e-12


@dataclass(frozen=True)
class InitialPattern:
    """One polyline per vertex; its first and last points are the initial and terminal points."""

    curves: dict

    def __post_init__(self):
        curves = {str(v): tuple(complex(z) for z in pts) for v, pts in self.curves.items()}
        for v, pts in curves.items():
            if not pts:
                raise GifsError(f"empty pattern for vertex {v!r}")
        object.__setattr__(self, "curves", curves)

    def start(self, v: str) -> complex:
        return self.curves[v][0]

    def end(self, v: str) -> complex:
        return self.curves[v][-1]

    def check(self, g: OrderedGifs):
        missing = [v for v in g.vertices if v not in self.curves]
        if missing:
            raise GifsError(f"pattern has no curve for vertices {missing}")

    def shrunk(self, eps: float) -> "InitialPattern":
        """Contract each curve toward the midpoint of its ends so the ends move in by ``eps``."""
        out = {}
        for v, pts in self.curves.items():
            a, b = pts[0], pts[-1]
            span = abs(b - a)
            if span <= DEGENERATE:
                out[v] = pts
                continue
            f = 1.0 - 2.0 * eps / span
            if f <= 0:
                raise GifsError(f"shrink {eps!r} is at least half the pattern length of vertex {v!r}")
            mid = 0.5 * (a + b)
            out[v] = tuple(mid + f * (z - mid) for z in pts)
        return InitialPattern(out)


def default_pattern(g: OrderedGifs, ht: HeadTailTable | None = None) -> InitialPattern:
    """Segment from head to tail per vertex; a single point when they coincide."""
    if ht is None:
        ht = heads_tails(g)
    curves = {}
    for v in g.vertices:
        a, b = ht.head[v], ht.tail[v]
        curves[v] = (a,) if abs(a - b) < DEGENERATE else (a, b)
    return InitialPattern(curves)


def point_pattern(g: OrderedGifs, point: complex | None = None) -> InitialPattern:
    """The same single point for every vertex, or each vertex's measure barycenter."""
    if point is not None:
        return InitialPattern({v: (point,) for v in g.vertices})
    c = barycenters(g, spectral_data(g))
    return InitialPattern({v: (complex(c[k]),) for k, v in enumerate(g.vertices)})


def approximate(g: OrderedGifs, pat: InitialPattern, vertex: str, n: int,
                cap: int | None = None) -> np.ndarray:
    """The ``n``-th approximation curve of ``E_vertex`` as an array of points.

    Images of the patterns along every depth-``n`` path, in dictionary order,
    joined end to start; zero-length joins are not duplicated.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    pat.check(g)
    table = enumerate_cylinders(g, vertex, n, cap=cap)
    pieces = []
    for k, v in enumerate(g.vertices):
        rows = np.flatnonzero(table.target == k)
        if not len(rows):
            continue
        pts = np.asarray(pat.curves[v], dtype=complex)
        z = np.where(table.conj[rows, None], np.conj(pts)[None, :], pts[None, :])
        img = table.alpha[rows, None] * z + table.beta[rows, None]
        pieces.extend(zip(rows, img))
    pieces.sort(key=lambda item: item[0])
    out = []
    last = None
    for _, img in pieces:
        start = 0
        if last is not None and abs(img[0] - last) <= DEGENERATE * max(1.0, abs(last)):
            start = 1
        out.append(img[start:])
        last = img[-1]
    return np.concatenate(out) if out else np.zeros(0, dtype=complex)


def vertex_colour(index: int, count: int) -> str:
    """Evenly spaced hues, fixed per vertex position."""
    r, g, b = colorsys.hsv_to_rgb(index / max(count, 1), 0.75, 0.8)
    return "#{:02x}{:02x}{:02x}".format(*(int(round(255 * c)) for c in (r, g, b)))


def _fmt(x: float) -> str:
    s = format(x, ".6g")
    return "0" if s == "-0" else s


def to_svg(polylines: Sequence[tuple[np.ndarray, str]], size: int = 800) -> str:
    """SVG document with one ``path`` per ``(points, colour)`` pair."""
    polylines = [(np.asarray(pts, dtype=complex), colour) for pts, colour in polylines]
    if not polylines or not any(len(p) for p, _ in polylines):
        raise GifsError("nothing to draw")
    allpts = np.concatenate([p for p, _ in polylines])
    x0, x1 = allpts.real.min(), allpts.real.max()
    y0, y1 = -allpts.imag.max(), -allpts.imag.min()
    diag = math.hypot(x1 - x0, y1 - y0) or 1.0
    w, h = x1 - x0, y1 - y0
    mx, my = 0.02 * (w or diag), 0.02 * (h or diag)
    vb = (x0 - mx, y0 - my, w + 2 * mx, h + 2 * my)
    stroke = 0.0015 * diag
    aspect = vb[3] / vb[2]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" '
        f'height="{max(1, round(size * aspect))}" viewBox="{" ".join(_fmt(v) for v in vb)}">',
    ]
    for pts, colour in polylines:
        if not len(pts):
            continue
        cmds = [f"M{_fmt(pts[0].real)} {_fmt(-pts[0].imag)}"]
        cmds += [f"L{_fmt(z.real)} {_fmt(-z.imag)}" for z in pts[1:]]
        out.append(f'<path d="{" ".join(cmds)}" fill="none" stroke={quoteattr(colour)} '
                   f'stroke-width="{_fmt(stroke)}" stroke-linejoin="round" stroke-linecap="round"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path: str, svg: str):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg)
    except OSError as exc:
        raise GifsError(f"cannot write {path}: {exc.strerror}") from None
