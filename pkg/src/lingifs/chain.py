"""Heads, tails, the chain condition and an empirical linearity probe."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .errors import EnumerationCapError
from .similitude import Similitude, apply, compose_all, fixed_point
from .system import OrderedGifs, PathWord, enumerate_cylinders, path_cap

DEFAULT_REL_TOL = 1e-9
DIAMETER_DEPTH = 8
DIAMETER_BUDGET = 100_000


@dataclass(frozen=True)
class EndWord:
    """Eventually periodic edge word: ``preperiod`` then ``period`` repeated."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def take(self, n: int) -> tuple[int, ...]:
        out = list(self.preperiod[:n])
        while len(out) < n:
            out.extend(self.period[: n - len(out)])
        return tuple(out)


@dataclass(frozen=True)
class HeadTailTable:
    head: dict
    tail: dict
    lowest: dict
    highest: dict


def _extreme_points(g: OrderedGifs, pick: int):
    """Projections of the lowest (pick=0) or highest (pick=-1) infinite paths."""
    def choice(v):
        row = g.out(v)
        k = pick % len(row)
        return k, row[k]

    points: dict[str, complex] = {}
    words: dict[str, EndWord] = {}
    for v0 in g.vertices:
        if v0 in points:
            continue
        walk, pos = [], {}
        u = v0
        while u not in pos and u not in points:
            pos[u] = len(walk)
            walk.append(u)
            u = choice(u)[1].target
        if u in points:
            tail_part = walk
            nxt = u
        else:
            cycle = walk[pos[u]:]
            cyc_maps = [choice(c)[1].map for c in cycle]
            points[cycle[0]] = fixed_point(compose_all(cyc_maps))
            period = tuple(choice(c)[0] for c in cycle)
            words[cycle[0]] = EndWord((), period)
            for j in range(len(cycle) - 1, 0, -1):
                c = cycle[j]
                succ = cycle[(j + 1) % len(cycle)]
                points[c] = apply(choice(c)[1].map, points[succ])
                words[c] = EndWord((), period[j:] + period[:j])
            tail_part = walk[: pos[u]]
            nxt = u
        for c in reversed(tail_part):
            k, e = choice(c)
            points[c] = apply(e.map, points[nxt])
            w = words[nxt]
            words[c] = EndWord((k,) + w.preperiod, w.period)
            nxt = c
    return points, words


def heads_tails(g: OrderedGifs) -> HeadTailTable:
    head, low = _extreme_points(g, 0)
    tail, high = _extreme_points(g, -1)
    order = g.vertices
    return HeadTailTable({v: head[v] for v in order}, {v: tail[v] for v in order},
                         {v: low[v] for v in order}, {v: high[v] for v in order})


def cylinder_map(g: OrderedGifs, w: PathWord) -> Similitude:
    """Composition ``g_{w_1} o ... o g_{w_n}`` of the edge maps along ``w``."""
    return compose_all(g.edge_maps(w))


# ---------------------------------------------------------------------------
# diameter bound


def _anchor_points(g: OrderedGifs, ht: HeadTailTable, start: str, depth: int,
                   cap=None, prefix: PathWord | None = None):
    table = enumerate_cylinders(g, start, depth, cap=cap, prefix=prefix)
    heads = np.array([ht.head[v] for v in g.vertices], dtype=complex)
    return table, table.apply(heads[table.target])


def cylinder_anchors(g: OrderedGifs, w: PathWord, depth: int, ht: HeadTailTable | None = None,
                     cap: int | None = None) -> np.ndarray:
    """Head anchors ``g_{w u}(head(t(u)))`` for all extensions ``u`` of ``depth`` edges.

    Every returned point lies in ``E_w``.
    """
    if ht is None:
        ht = heads_tails(g)
    g.terminal(w)
    _, pts = _anchor_points(g, ht, w.start, depth, cap=cap, prefix=w)
    return pts


def _set_diameter(pts: np.ndarray) -> float:
    if len(pts) < 2:
        return 0.0
    xy = np.column_stack([pts.real, pts.imag])
    if len(pts) > 3:
        from scipy.spatial import ConvexHull, QhullError
        try:
            xy = xy[ConvexHull(xy).vertices]
        except QhullError:
            # collinear: the point farthest from any point is an end of the segment
            far = xy[np.argmax(((xy - xy[0]) ** 2).sum(1))]
            return float(np.sqrt(((xy - far) ** 2).sum(1)).max())
    d = xy[:, None, :] - xy[None, :, :]
    return float(np.sqrt((d ** 2).sum(-1)).max())


@lru_cache(maxsize=128)
def diameter_bound(g: OrderedGifs, depth: int = DIAMETER_DEPTH,
                   budget: int = DIAMETER_BUDGET) -> float:
    """Certified upper bound on ``max_i diam E_i``.

    Uses ``D <= A_k + 2 r_max^k D`` where ``A_k`` is the largest diameter of a
    depth-``k`` head-anchor set. ``k`` is lowered while the enumeration would
    exceed ``budget`` and raised while ``2 r_max^k >= 1``.
    """
    counts = g.path_counts
    k = depth
    while k > 1 and max(counts(k)) > budget:
        k -= 1
    while 2 * g.r_max ** k >= 1:
        k += 1
    if max(counts(k)) > path_cap():
        raise EnumerationCapError("diameter bound needs too many paths")
    ht = heads_tails(g)
    a_k = max(_set_diameter(_anchor_points(g, ht, v, k)[1]) for v in g.vertices)
    return a_k / (1.0 - 2.0 * g.r_max ** k)


# ---------------------------------------------------------------------------
# chain condition


@dataclass(frozen=True)
class Violation:
    vertex: str
    left: int
    right: int
    gap: float
    left_point: complex
    right_point: complex


@dataclass
class ChainReport:
    tol: float
    violations: list[Violation] = field(default_factory=list)
    max_gap: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.passed


def default_tolerance(g: OrderedGifs) -> float:
    return DEFAULT_REL_TOL * max(1.0, diameter_bound(g))


def chain_check(g: OrderedGifs, tol: float | None = None,
                ht: HeadTailTable | None = None) -> ChainReport:
    """Check ``g_w(tail E_t(w)) == g_u(head E_t(u))`` for adjacent sibling edges w < u."""
    if tol is None:
        tol = default_tolerance(g)
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if ht is None:
        ht = heads_tails(g)
    report = ChainReport(tol)
    for v, row in zip(g.vertices, g.edges):
        for k in range(len(row) - 1):
            left, right = row[k], row[k + 1]
            p = apply(left.map, ht.tail[left.target])
            q = apply(right.map, ht.head[right.target])
            gap = abs(p - q)
            report.max_gap = max(report.max_gap, gap)
            if gap > tol:
                report.violations.append(Violation(v, k, k + 1, gap, p, q))
    return report


def hata_condition(maps, tol: float = 0.0) -> list[float]:
    """Gaps ``|S_{k+1}(Fix S_1) - S_k(Fix S_N)|`` for an ordered IFS.

    Returns the list of gaps exceeding ``tol`` (empty when the IFS is linear).
    """
    a = fixed_point(maps[0])
    b = fixed_point(maps[-1])
    gaps = [abs(apply(maps[k + 1], a) - apply(maps[k], b)) for k in range(len(maps) - 1)]
    return [x for x in gaps if x > tol]


# ---------------------------------------------------------------------------
# linearity probe


@dataclass(frozen=True)
class SeparatedPair:
    vertex: str
    left: tuple[int, ...]
    right: tuple[int, ...]
    distance: float


@dataclass
class ProbeReport:
    k: int
    sample_depth: int
    threshold: float
    pairs_checked: int = 0
    separated: list[SeparatedPair] = field(default_factory=list)
    max_distance: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.separated


def linearity_probe(g: OrderedGifs, k: int, sample_depth: int, eps: float = 0.0,
                    cap: int | None = None) -> ProbeReport:
    """Look for dictionary-adjacent depth-``k`` cylinders that do not meet.

    For each adjacent pair the minimum distance between their head anchors at
    ``sample_depth`` further levels is compared with
    ``eps + 2 D r_max^sample_depth``; larger distances are reported.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    d_bound = diameter_bound(g)
    threshold = eps + 2.0 * d_bound * g.r_max ** sample_depth
    ht = heads_tails(g)
    report = ProbeReport(k, sample_depth, threshold)
    sub_counts = np.array([int(c) for c in g.path_counts(sample_depth)])
    cap = path_cap(cap)
    for v in g.vertices:
        if int(g.path_counts(k + sample_depth)[g.index(v)]) > cap:
            raise EnumerationCapError("linearity probe exceeds the enumeration cap")
        outer = enumerate_cylinders(g, v, k, cap=cap, keep_words=True)
        _, anchors = _anchor_points(g, ht, v, k + sample_depth, cap=cap)
        bounds = np.concatenate([[0], np.cumsum(sub_counts[outer.target])])
        xy = np.column_stack([anchors.real, anchors.imag])
        for j in range(len(outer) - 1):
            a = xy[bounds[j]:bounds[j + 1]]
            b = xy[bounds[j + 1]:bounds[j + 2]]
            dist = float(cKDTree(b).query(a, k=1)[0].min())
            report.pairs_checked += 1
            report.max_distance = max(report.max_distance, dist)
            if dist > threshold:
                report.separated.append(SeparatedPair(
                    v, tuple(int(x) for x in outer.words[j]),
                    tuple(int(x) for x in outer.words[j + 1]), dist))
    return report


def log_ratio(g: OrderedGifs, w: PathWord) -> float:
    """``sum(log r_e)`` over the edges of ``w``."""
    return sum(math.log(m.ratio()) for m in g.edge_maps(w))
