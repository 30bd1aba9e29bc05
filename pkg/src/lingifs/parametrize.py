"""Measure-recording system and the induced parametrization of each ``E_i``.

A point ``x`` of ``F_i = [0, h_i]`` is coded by descending through the interval
system in which edge ``e`` carries ``F_{t(e)}`` onto a sub-interval of length
``h_{t(e)} r_e^delta``; the same path is then projected into the plane.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .chain import HeadTailTable, cylinder_map, diameter_bound, heads_tails
from .errors import GifsError, PrecisionError
from .similitude import apply
from .spectral import SpectralData, spectral_data
from .system import OrderedGifs, PathWord

MAX_DEPTH = 4000
DRIFT = 1e-9


@dataclass(frozen=True)
class RecordingSystem:
    vertices: tuple[str, ...]
    h: tuple[float, ...]
    offsets: tuple[tuple[float, ...], ...]
    scales: tuple[tuple[float, ...], ...]
    targets: tuple[tuple[int, ...], ...]

    def length(self, vertex_index: int) -> float:
        return self.h[vertex_index]

    def interval(self, g: OrderedGifs, word: PathWord) -> tuple[float, float]:
        """``(left end, length)`` of the sub-interval ``F_word`` of ``F_start``."""
        v = g.index(word.start)
        left, scale = 0.0, 1.0
        for k in word.edges:
            left += scale * self.offsets[v][k]
            scale *= self.scales[v][k]
            v = self.targets[v][k]
        return left, scale * self.h[v]


def build_recording(g: OrderedGifs, sd: SpectralData) -> RecordingSystem:
    offsets, scales, targets = [], [], []
    for v, row in zip(g.vertices, g.edges):
        b, offs, sc, tg = 0.0, [], [], []
        for e in row:
            t = g.index(e.target)
            s = e.map.ratio() ** sd.delta
            offs.append(b)
            sc.append(s)
            tg.append(t)
            b += sd.h[t] * s
        if abs(b - sd.h[g.index(v)]) > 1e-9 * sd.h[g.index(v)]:
            raise GifsError(f"sub-intervals of vertex {v!r} do not close up: {b!r}")
        offsets.append(tuple(offs))
        scales.append(tuple(sc))
        targets.append(tuple(tg))
    return RecordingSystem(g.vertices, sd.h, tuple(offsets), tuple(scales), tuple(targets))


def _digit(rs: RecordingSystem, v: int, x: float) -> tuple[int, float, int]:
    offs = rs.offsets[v]
    k = max(bisect_right(offs, x) - 1, 0)
    t = rs.targets[v][k]
    y = (x - offs[k]) / rs.scales[v][k]
    ht = rs.h[t]
    if y > ht:
        if y > ht * (1 + DRIFT):
            raise PrecisionError(f"remainder {y!r} drifted beyond [0, {ht!r}]")
        y = ht
    elif y < 0.0:
        y = 0.0
    return k, y, t


def _check_range(rs: RecordingSystem, v: int, x: float):
    if not 0.0 <= x <= rs.h[v]:
        raise GifsError(f"x = {x!r} outside [0, {rs.h[v]!r}]")


def encode(rs: RecordingSystem, vertex: str, x: float, depth: int) -> PathWord:
    """First ``depth`` edges of the coding of ``x`` (upper cylinder at breakpoints)."""
    v = rs.vertices.index(str(vertex))
    x = float(x)
    _check_range(rs, v, x)
    word = []
    for _ in range(depth):
        k, x, v = _digit(rs, v, x)
        word.append(k)
    return PathWord(vertex, tuple(word))


def encode_many(rs: RecordingSystem, vertex: str, xs, depth: int) -> np.ndarray:
    """Vectorised :func:`encode`; returns an ``(len(xs), depth)`` array of edge indices."""
    v0 = rs.vertices.index(str(vertex))
    x = np.asarray(xs, dtype=float).copy()
    if len(x) and (x.min() < 0 or x.max() > rs.h[v0]):
        raise GifsError("values outside the parameter interval")
    v = np.full(len(x), v0)
    out = np.zeros((len(x), depth), dtype=np.int32)
    offs = [np.array(o) for o in rs.offsets]
    scales = [np.array(s) for s in rs.scales]
    targets = [np.array(t) for t in rs.targets]
    h = np.array(rs.h)
    for level in range(depth):
        here = v.copy()
        for u in np.unique(here):
            m = here == u
            k = np.maximum(np.searchsorted(offs[u], x[m], side="right") - 1, 0)
            t = targets[u][k]
            y = (x[m] - offs[u][k]) / scales[u][k]
            y = np.clip(y, 0.0, h[t])
            out[m, level] = k
            x[m] = y
            v[m] = t
    return out


def project(g: OrderedGifs, ht: HeadTailTable, w: PathWord) -> complex:
    """Head anchor of the cylinder ``E_w``; within ``D * r_w`` of every point coded by ``w``."""
    if not len(w):
        return ht.head[w.start]
    return apply(cylinder_map(g, w), ht.head[g.terminal(w)])


def holder_constant(g: OrderedGifs, sd: SpectralData, d_bound: float | None = None) -> float:
    """``2 D / r_min * h_min**(-1/delta)``."""
    if d_bound is None:
        d_bound = diameter_bound(g)
    return 2.0 * d_bound / g.r_min * min(sd.h) ** (-1.0 / sd.delta)


class Parametrization:
    """Evaluates ``psi_i`` on ``[0, h_i]`` for every vertex of a linear system."""

    def __init__(self, g: OrderedGifs, sd: SpectralData | None = None):
        self.g = g
        self.sd = sd if sd is not None else spectral_data(g)
        self.rs = build_recording(g, self.sd)
        self.ht = heads_tails(g)
        self.D = diameter_bound(g)
        self._edges = [[(e.map.alpha, e.map.beta, e.map.conj) for e in row] for row in g.edges]
        self._heads = [self.ht.head[v] for v in g.vertices]
        self._tails = [self.ht.tail[v] for v in g.vertices]

    def _anchor(self, v, x):
        # the top end of F_v is coded by the highest path, whose image is the tail
        return self._tails[v] if x >= self.rs.h[v] else self._heads[v]

    def length(self, vertex: str) -> float:
        return self.rs.h[self.g.index(vertex)]

    def holder_constant(self) -> float:
        return holder_constant(self.g, self.sd, self.D)

    def encode(self, vertex: str, x: float, depth: int) -> PathWord:
        return encode(self.rs, vertex, x, depth)

    def project(self, w: PathWord) -> complex:
        return project(self.g, self.ht, w)

    def psi(self, vertex: str, x: float, tol: float = 1e-9) -> complex:
        """Point of ``E_vertex`` at parameter ``x``, accurate to ``tol``.

        Digits are extracted until the cylinder diameter bound ``D * |A|`` of the
        accumulated map drops below ``tol``.
        """
        if tol <= 0:
            raise ValueError("tol must be positive")
        v = self.g.index(vertex)
        x = float(x)
        _check_range(self.rs, v, x)
        return self._finish(x, v, 1 + 0j, 0j, False, 0, tol / self.D)

    def psi_unit(self, vertex: str, u: float, tol: float = 1e-9) -> complex:
        """``psi`` on the rescaled domain ``[0, 1]``."""
        return self.psi(vertex, float(u) * self.length(vertex), tol)

    def psi_batch(self, vertex: str, ts, tol: float = 1e-9) -> np.ndarray:
        """``psi`` at every entry of ``ts``; shared coding prefixes are walked once."""
        if tol <= 0:
            raise ValueError("tol must be positive")
        v0 = self.g.index(vertex)
        ts = np.asarray(ts, dtype=float)
        out = np.empty(len(ts), dtype=complex)
        if not len(ts):
            return out
        if ts.min() < 0 or ts.max() > self.rs.h[v0]:
            raise GifsError("values outside the parameter interval")
        limit = tol / self.D
        offs = [np.array(o) for o in self.rs.offsets]
        stack = [(np.arange(len(ts)), ts.copy(), v0, 1 + 0j, 0j, False, 0)]
        while stack:
            idx, xs, v, a, b, c, depth = stack.pop()
            if len(idx) <= 4 or abs(a) <= limit or ((xs <= 0) | (xs >= self.rs.h[v])).all():
                for j, x in zip(idx, xs):
                    out[j] = self._finish(float(x), v, a, b, c, depth, limit)
                continue
            ends = (xs <= 0) | (xs >= self.rs.h[v])
            for j, x in zip(idx[ends], xs[ends]):
                out[j] = self._finish(float(x), v, a, b, c, depth, limit)
            idx, xs = idx[~ends], xs[~ends]
            ks = np.maximum(np.searchsorted(offs[v], xs, side="right") - 1, 0)
            for k in np.unique(ks):
                k = int(k)
                m = ks == k
                t = self.rs.targets[v][k]
                ys = (xs[m] - self.rs.offsets[v][k]) / self.rs.scales[v][k]
                ht = self.rs.h[t]
                if (ys > ht * (1 + DRIFT)).any():
                    raise PrecisionError("remainder drifted beyond the parameter interval")
                ys = np.clip(ys, 0.0, ht)
                ea, eb, ec = self._edges[v][k]
                if c:
                    ea, eb = ea.conjugate(), eb.conjugate()
                stack.append((idx[m], ys, t, a * ea, a * eb + b, c ^ ec, depth + 1))
        return out

    def _finish(self, x, v, a, b, c, depth, limit):
        # at either end of F_v the rest of the coding is constant; stop before
        # roundoff in the remainder can leave the end
        while abs(a) > limit and 0.0 < x < self.rs.h[v]:
            k, x, v_next = _digit(self.rs, v, x)
            ea, eb, ec = self._edges[v][k]
            if c:
                ea, eb = ea.conjugate(), eb.conjugate()
            a, b, c = a * ea, a * eb + b, c ^ ec
            v = v_next
            depth += 1
            if depth > MAX_DEPTH:
                raise PrecisionError(f"tolerance {limit * self.D!r} not reached within {MAX_DEPTH} levels")
        z = self._anchor(v, x)
        return a * (z.conjugate() if c else z) + b

    def breakpoints(self, vertex: str, depth: int, coding_depth: int = 40):
        """Interior endpoints of the depth-``depth`` sub-intervals of ``F_vertex``.

        Yields ``(x, lower, upper)`` where ``lower`` continues the cylinder left
        of ``x`` along its highest path and ``upper`` continues the cylinder to
        the right along its lowest path, both to ``coding_depth`` edges.
        """
        words = list(self.g.paths(vertex, depth))
        for left, right in zip(words, words[1:]):
            x, _ = self.rs.interval(self.g, right)
            lt, rt = self.g.terminal(left), self.g.terminal(right)
            rest = coding_depth - depth
            lower = left.extend(self.ht.highest[lt].take(rest))
            upper = right.extend(self.ht.lowest[rt].take(rest))
            yield x, lower, upper
