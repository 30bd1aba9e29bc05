"""Path-on-lattice IFS: marked unit-step paths from 0 to d on the square or triangle lattice."""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np

from .chain import chain_check, heads_tails
from .errors import GifsError, InvalidSystemError
from .similitude import Similitude, apply
from .spectral import barycenters, spectral_data
from .system import OrderedGifs, enumerate_cylinders

OMEGA = cmath.exp(2j * cmath.pi / 3)
UNIT_STEPS = {
    "square": (1 + 0j, 1j, -1 + 0j, -1j),
    "triangle": (1 + 0j, -OMEGA ** 2, OMEGA, -1 + 0j, OMEGA ** 2, -OMEGA),
}
STEP_TOL = 1e-9
# fixed sub-cell offset so coincident anchors never straddle a cell boundary by rounding
_GRID_OFFSET = 0.2718281828 + 0.3141592653j


class InvalidLatticePath(GifsError):
    pass


def snap_step(lattice: str, step: complex) -> complex:
    for u in UNIT_STEPS[lattice]:
        if abs(step - u) <= STEP_TOL:
            return u
    raise InvalidLatticePath(f"{step!r} is not a unit step of the {lattice} lattice")


@dataclass(frozen=True)
class MarkedLatticePath:
    lattice: str
    points: tuple[complex, ...]
    v: tuple[int, ...] = ()
    refl: tuple[bool, ...] = ()

    def __post_init__(self):
        if self.lattice not in UNIT_STEPS:
            raise InvalidLatticePath(f"unknown lattice {self.lattice!r}")
        pts = [complex(z) for z in self.points]
        if len(pts) < 2:
            raise InvalidLatticePath("a path needs at least one segment")
        if abs(pts[0]) > STEP_TOL:
            raise InvalidLatticePath("paths start at 0")
        # rebuild from exact unit steps so every point is a lattice point
        snapped = [0j]
        for a, b in zip(pts, pts[1:]):
            snapped.append(snapped[-1] + snap_step(self.lattice, b - a))
        object.__setattr__(self, "points", tuple(snapped))
        n = len(snapped) - 1
        v = tuple(int(x) for x in self.v) or (1,) * n
        refl = tuple(bool(x) for x in self.refl) or (False,) * n
        if len(v) != n or len(refl) != n:
            raise InvalidLatticePath(f"expected {n} marks")
        if any(x not in (1, -1) for x in v):
            raise InvalidLatticePath("marks must be +1 or -1")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "refl", refl)
        if abs(self.d) <= 1:
            raise InvalidLatticePath("|d| must exceed 1 for the maps to contract")

    @property
    def n(self) -> int:
        return len(self.points) - 1

    @property
    def d(self) -> complex:
        return self.points[-1]

    @property
    def reflection_free(self) -> bool:
        return not any(self.refl)

    def is_self_avoiding(self) -> bool:
        keys = {(round(z.real, 9), round(z.imag, 9)) for z in self.points}
        return len(keys) == len(self.points)

    def with_marks(self, v: Sequence[int], refl: Sequence[bool] = ()) -> "MarkedLatticePath":
        return replace(self, v=tuple(v), refl=tuple(refl))

    def reversed(self) -> "MarkedLatticePath":
        """Reverse path re-anchored at 0 with every orientation mark flipped."""
        d = self.d
        pts = tuple(d - z for z in reversed(self.points))
        return MarkedLatticePath(self.lattice, pts, tuple(-x for x in reversed(self.v)),
                                 tuple(reversed(self.refl)))


def build_ifs(p: MarkedLatticePath) -> list[Similitude]:
    """One similitude per segment carrying ``{0, d}`` onto ``{z_{k-1}, z_k}``."""
    d = p.d
    maps = []
    for k in range(1, p.n + 1):
        z0, z1 = p.points[k - 1], p.points[k]
        den = d.conjugate() if p.refl[k - 1] else d
        if p.v[k - 1] == 1:
            s = Similitude((z1 - z0) / den, z0, p.refl[k - 1])
            expect = (z0, z1)
        else:
            s = Similitude((z0 - z1) / den, z1, p.refl[k - 1])
            expect = (z1, z0)
        got = (apply(s, 0), apply(s, d))
        if abs(got[0] - expect[0]) > 1e-12 * abs(d) or abs(got[1] - expect[1]) > 1e-12 * abs(d):
            raise InvalidLatticePath(f"segment {k}: constructed map misses its endpoints")
        maps.append(s)
    return maps


def build_gifs(p: MarkedLatticePath) -> OrderedGifs:
    """Linear system generating the attractor of :func:`build_ifs`.

    All marks +1 gives the single-vertex IFS; otherwise two states ``1`` and
    ``-1`` run the path forwards and backwards.
    """
    maps = build_ifs(p)
    if all(x == 1 for x in p.v):
        g = OrderedGifs.ifs(maps, "1")
        expect = {"1": (0j, p.d)}
    else:
        lab = {1: "1", -1: "-1"}
        fwd = [(lab[p.v[k]], maps[k]) for k in range(p.n)]
        bwd = [(lab[-p.v[k]], maps[k]) for k in reversed(range(p.n))]
        g = OrderedGifs.from_lists({"1": fwd, "-1": bwd})
        expect = {"1": (0j, p.d), "-1": (p.d, 0j)}
    ht = heads_tails(g)
    tol = 1e-9 * abs(p.d)
    for v, (head, tail) in expect.items():
        if abs(ht.head[v] - head) > tol or abs(ht.tail[v] - tail) > tol:
            raise InvalidSystemError(
                f"vertex {v}: head/tail {ht.head[v]!r}/{ht.tail[v]!r}, expected {head!r}/{tail!r}")
    return g


@dataclass
class OverlapReport:
    depth: int
    duplicate_maps: int = 0
    collisions: int = 0
    examples: list = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return bool(self.duplicate_maps or self.collisions)


def overlap_probe(g: OrderedGifs, depth: int, pitch: float, start: str | None = None,
                  anchors: np.ndarray | None = None) -> OverlapReport:
    """Heuristic overlap detector at one depth.

    Flags depth-``depth`` cylinders with identical maps, and anchors of
    non-adjacent cylinders that fall into the same grid cell of size ``pitch``.
    The anchor of a cylinder is the image of the barycenter of the invariant
    measure, so two coinciding tiles always collide while tiles that merely
    touch do not.
    """
    start = g.vertices[0] if start is None else start
    if anchors is None:
        anchors = barycenters(g, spectral_data(g))
    table = enumerate_cylinders(g, start, depth)
    report = OverlapReport(depth)
    scale = pitch * 1e-6
    seen = {}
    for k, key in enumerate(zip(np.round(table.alpha.real / scale), np.round(table.alpha.imag / scale),
                                np.round(table.beta.real / scale), np.round(table.beta.imag / scale),
                                table.conj)):
        if key in seen:
            report.duplicate_maps += 1
            if len(report.examples) < 5:
                report.examples.append(("map", seen[key], k))
        else:
            seen[key] = k
    pts = table.apply(np.asarray(anchors)[table.target]) / pitch + _GRID_OFFSET
    cells = {}
    for k, key in enumerate(zip(np.floor(pts.real).astype(np.int64),
                                np.floor(pts.imag).astype(np.int64))):
        cells.setdefault(key, []).append(k)
    for members in cells.values():
        for a, b in itertools.combinations(members, 2):
            if abs(a - b) > 1:
                report.collisions += 1
                if len(report.examples) < 5:
                    report.examples.append(("cell", a, b))
    return report


@dataclass
class ReptileReport:
    n: int
    d_norm_sq: float
    reptile_arithmetic: bool
    overlap: list[OverlapReport]

    @property
    def likely_osc_failure(self) -> bool:
        return any(r.flagged for r in self.overlap)

    @property
    def first_flag_depth(self) -> int | None:
        for r in self.overlap:
            if r.flagged:
                return r.depth
        return None


def reptile_flag(p: MarkedLatticePath, max_depth: int = 4) -> ReptileReport:
    """Check ``n == |d|^2`` and run the overlap heuristic up to ``max_depth``.

    The heuristic can only suggest that the open set condition fails; a clean
    report is not a proof that it holds.
    """
    d2 = abs(p.d) ** 2
    g = build_gifs(p)
    anchors = barycenters(g, spectral_data(g))
    reports = []
    for k in range(1, max_depth + 1):
        pitch = g.r_min ** k * abs(p.d) / 4
        r = overlap_probe(g, k, pitch, anchors=anchors)
        reports.append(r)
        if r.flagged:
            break
    return ReptileReport(p.n, d2, abs(p.n - d2) <= 1e-12 * max(1.0, d2), reports)


def mark_enumerate(trace: MarkedLatticePath | Sequence[complex], reflection_free: bool = True,
                   lattice: str | None = None) -> Iterator[MarkedLatticePath]:
    """Every marking of ``trace``; v-vectors in lexicographic order of (+1, -1)."""
    if not isinstance(trace, MarkedLatticePath):
        if lattice is None:
            raise ValueError("lattice is required for a bare point list")
        trace = MarkedLatticePath(lattice, tuple(trace))
    n = trace.n
    refls = [(False,) * n] if reflection_free else list(itertools.product((False, True), repeat=n))
    for v in itertools.product((1, -1), repeat=n):
        for refl in refls:
            yield trace.with_marks(v, refl)


@dataclass
class MarkingReport:
    path: MarkedLatticePath
    chain_pass: bool
    reptile: ReptileReport

    @property
    def accepted(self) -> bool:
        return self.chain_pass and not self.reptile.likely_osc_failure


def assess_marking(p: MarkedLatticePath, max_depth: int = 4) -> MarkingReport:
    try:
        g = build_gifs(p)
    except InvalidSystemError:
        return MarkingReport(p, False, reptile_flag(p, max_depth))
    return MarkingReport(p, chain_check(g).passed, reptile_flag(p, max_depth))


def lattice_walks(lattice: str, n_steps: int, end_norm_sq: float | None = None,
                  self_avoiding: bool = True) -> Iterator[tuple[complex, ...]]:
    """Unit-step walks of ``n_steps`` from 0, optionally ending on ``|z|^2 = end_norm_sq``."""
    steps = UNIT_STEPS[lattice]

    def key(z):
        return (round(z.real, 9), round(z.imag, 9))

    def rec(pts, visited):
        if len(pts) == n_steps + 1:
            if end_norm_sq is None or abs(abs(pts[-1]) ** 2 - end_norm_sq) < 1e-9:
                yield tuple(pts)
            return
        remaining = n_steps + 1 - len(pts)
        for u in steps:
            z = pts[-1] + u
            if self_avoiding and key(z) in visited:
                continue
            if end_norm_sq is not None and abs(z) - remaining > end_norm_sq ** 0.5 + 1e-9:
                continue
            visited.add(key(z))
            pts.append(z)
            yield from rec(pts, visited)
            pts.pop()
            visited.discard(key(z))

    yield from rec([0j], {key(0j)})


def point_key(points: Sequence[complex]) -> tuple:
    return tuple((round(z.real, 9), round(z.imag, 9)) for z in points)


def search_paths(lattice: str, v: Sequence[int], end: complex | None = None,
                 depth: int = 2, self_avoiding: bool = True) -> list[MarkedLatticePath]:
    """Brute-force oracle: paths carrying marks ``v`` that pass the chain check
    and show no overlap up to ``depth``; sorted lexicographically."""
    n = len(v)
    found = []
    for pts in lattice_walks(lattice, n, end_norm_sq=float(n), self_avoiding=self_avoiding):
        if end is not None and abs(pts[-1] - end) > 1e-9:
            continue
        p = MarkedLatticePath(lattice, pts, tuple(v))
        try:
            g = build_gifs(p)
        except InvalidSystemError:
            continue
        # diam E >= |d|, so this is no looser than the default tolerance
        if not chain_check(g, tol=1e-9 * max(1.0, abs(p.d))).passed:
            continue
        if reptile_flag(p, depth).likely_osc_failure:
            continue
        found.append(p)
    found.sort(key=lambda p: point_key(p.points))
    return found
