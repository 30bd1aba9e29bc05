"""Ordered graph-directed IFS, symbolic paths and cylinder enumeration."""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from functools import cached_property, total_ordering
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import EnumerationCapError, InvalidPathError, InvalidSystemError
from .similitude import Similitude, compose

DEFAULT_PATH_CAP = 2_000_000
CAP_ENV_VAR = "LINGIFS_MAX_PATHS"


def path_cap(cap: int | None = None) -> int:
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV_VAR)
    return int(env) if env else DEFAULT_PATH_CAP


@dataclass(frozen=True)
class Edge:
    target: str
    map: Similitude


@dataclass(frozen=True)
class OrderedGifs:
    """Directed multigraph with one similitude per edge.

    ``edges[k]`` lists the out-edges of ``vertices[k]``; the list position is
    the order of the edge among its siblings.
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        vertices = tuple(str(v) for v in self.vertices)
        edges = tuple(tuple(row) for row in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if not vertices:
            raise InvalidSystemError("a system needs at least one vertex")
        if len(set(vertices)) != len(vertices):
            raise InvalidSystemError("duplicate vertex labels")
        if len(edges) != len(vertices):
            raise InvalidSystemError("one edge list per vertex is required")
        known = set(vertices)
        for v, row in zip(vertices, edges):
            if not row:
                raise InvalidSystemError(f"vertex {v!r} has no out-edges")
            for e in row:
                if e.target not in known:
                    raise InvalidSystemError(f"edge {v!r} -> {e.target!r}: unknown target")
                if not e.map.is_contraction:
                    raise InvalidSystemError(
                        f"edge {v!r} -> {e.target!r}: ratio {e.map.ratio()!r} not in (0, 1)")

    @classmethod
    def from_lists(cls, rows: dict) -> "OrderedGifs":
        """Build from ``{vertex: [(target, Similitude), ...]}`` (insertion order)."""
        vertices = tuple(rows)
        edges = tuple(tuple(Edge(str(t), m) for t, m in rows[v]) for v in vertices)
        return cls(vertices, edges)

    @classmethod
    def ifs(cls, maps: Sequence[Similitude], label: str = "1") -> "OrderedGifs":
        """Single-vertex ordered IFS with the natural order of ``maps``."""
        return cls((label,), (tuple(Edge(label, m) for m in maps),))

    @cached_property
    def _index(self) -> dict:
        return {v: k for k, v in enumerate(self.vertices)}

    def index(self, vertex: str) -> int:
        try:
            return self._index[str(vertex)]
        except KeyError:
            raise InvalidPathError(f"unknown vertex {vertex!r}") from None

    def out(self, vertex: str) -> tuple[Edge, ...]:
        return self.edges[self.index(vertex)]

    def __len__(self):
        return len(self.vertices)

    @property
    def all_edges(self) -> Iterator[tuple[str, int, Edge]]:
        for v, row in zip(self.vertices, self.edges):
            for k, e in enumerate(row):
                yield v, k, e

    @cached_property
    def r_max(self) -> float:
        return max(e.map.ratio() for _, _, e in self.all_edges)

    @cached_property
    def r_min(self) -> float:
        return min(e.map.ratio() for _, _, e in self.all_edges)

    def count_matrix(self) -> np.ndarray:
        n = len(self.vertices)
        a = np.zeros((n, n))
        for v, _, e in self.all_edges:
            a[self.index(v), self.index(e.target)] += 1
        return a

    def is_strongly_connected(self) -> bool:
        ncomp, _ = connected_components(csr_matrix(self.count_matrix()), directed=True,
                                        connection="strong")
        return ncomp == 1

    def warn_if_degenerate(self):
        if not self.is_strongly_connected():
            warnings.warn("graph is not strongly connected; measure ratios may be degenerate",
                          stacklevel=3)

    def transformed(self, s: Similitude) -> "OrderedGifs":
        """Conjugate every map by ``s`` (the invariant sets become ``s(E_i)``)."""
        inv = inverse(s)
        return OrderedGifs(self.vertices, tuple(
            tuple(Edge(e.target, compose(s, compose(e.map, inv))) for e in row)
            for row in self.edges))

    def with_order(self, vertex: str, order: Sequence[int]) -> "OrderedGifs":
        """Copy with the out-edges of ``vertex`` permuted to ``order``."""
        k = self.index(vertex)
        row = self.edges[k]
        if sorted(order) != list(range(len(row))):
            raise ValueError("order must be a permutation of the edge indices")
        edges = list(self.edges)
        edges[k] = tuple(row[j] for j in order)
        return OrderedGifs(self.vertices, tuple(edges))

    # paths

    def terminal(self, word: "PathWord") -> str:
        v = str(word.start)
        for k in word.edges:
            row = self.out(v)
            if not 0 <= k < len(row):
                raise InvalidPathError(f"edge index {k} out of range at vertex {v!r}")
            v = row[k].target
        return v

    def edge_maps(self, word: "PathWord") -> list[Similitude]:
        v = str(word.start)
        maps = []
        for k in word.edges:
            row = self.out(v)
            if not 0 <= k < len(row):
                raise InvalidPathError(f"edge index {k} out of range at vertex {v!r}")
            maps.append(row[k].map)
            v = row[k].target
        return maps

    def paths(self, start: str, length: int) -> Iterator["PathWord"]:
        """All paths of ``length`` from ``start`` in dictionary order."""
        def rec(v, prefix):
            if len(prefix) == length:
                yield PathWord(start, tuple(prefix))
                return
            for k, e in enumerate(self.out(v)):
                prefix.append(k)
                yield from rec(e.target, prefix)
                prefix.pop()
        self.index(start)
        yield from rec(start, [])

    def path_counts(self, length: int) -> np.ndarray:
        """Number of paths of ``length`` from each vertex (exact integers)."""
        a = self.count_matrix().astype(object)
        counts = np.ones(len(self.vertices), dtype=object)
        for _ in range(length):
            counts = a.dot(counts)
        return counts


def inverse(s: Similitude) -> Similitude:
    a, b = s.alpha, s.beta
    if s.conj:
        # w = a*conj(z) + b  =>  z = conj((w - b)/a)
        ia = (1.0 / a).conjugate()
        return Similitude(ia, -(b / a).conjugate(), True)
    return Similitude(1.0 / a, -b / a, False)


@total_ordering
@dataclass(frozen=True)
class PathWord:
    """Finite path: start vertex plus per-vertex (0-based) edge indices."""

    start: str
    edges: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", str(self.start))
        object.__setattr__(self, "edges", tuple(int(k) for k in self.edges))

    def __len__(self):
        return len(self.edges)

    def _check_comparable(self, other):
        if not isinstance(other, PathWord):
            return NotImplemented
        if other.start != self.start or len(other) != len(self):
            raise TypeError("dictionary order only compares paths with equal start and length")
        return True

    def __lt__(self, other):
        ok = self._check_comparable(other)
        if ok is NotImplemented:
            return ok
        return self.edges < other.edges

    def extend(self, more: Sequence[int]) -> "PathWord":
        return PathWord(self.start, self.edges + tuple(more))

    def prefix(self, n: int) -> "PathWord":
        return PathWord(self.start, self.edges[:n])


# ---------------------------------------------------------------------------
# vectorised enumeration of cylinder maps


@dataclass
class CylinderTable:
    """All depth-``depth`` cylinders from ``start``, in dictionary order.

    Row ``k`` holds the composed map ``alpha[k] * z + beta[k]`` (``z`` conjugated
    when ``conj[k]``) and the terminal vertex index ``target[k]``.
    """

    start: str
    depth: int
    alpha: np.ndarray
    beta: np.ndarray
    conj: np.ndarray
    target: np.ndarray
    words: np.ndarray | None = None

    def __len__(self):
        return len(self.alpha)

    @property
    def ratio(self) -> np.ndarray:
        return np.abs(self.alpha)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Apply row ``k``'s map to ``points[k]``."""
        z = np.where(self.conj, np.conj(points), points)
        return self.alpha * z + self.beta


class _EdgeArrays:
    def __init__(self, g: OrderedGifs):
        outdeg = np.array([len(row) for row in g.edges], dtype=np.int64)
        self.outdeg = outdeg
        self.offset = np.concatenate([[0], np.cumsum(outdeg)[:-1]])
        flat = [e for row in g.edges for e in row]
        self.alpha = np.array([e.map.alpha for e in flat], dtype=complex)
        self.beta = np.array([e.map.beta for e in flat], dtype=complex)
        self.conj = np.array([e.map.conj for e in flat], dtype=bool)
        self.target = np.array([g.index(e.target) for e in flat], dtype=np.int64)


def enumerate_cylinders(g: OrderedGifs, start: str, depth: int, cap: int | None = None,
                        keep_words: bool = False, prefix: PathWord | None = None) -> CylinderTable:
    """Compose the maps of every path of ``depth`` edges from ``start``.

    With ``prefix`` the enumeration starts from the cylinder of that path and
    the table lists its depth-``depth`` extensions.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    cap = path_cap(cap)
    ea = _EdgeArrays(g)
    if prefix is not None and len(prefix):
        from .similitude import compose_all
        m = compose_all(g.edge_maps(prefix))
        alpha = np.array([m.alpha]); beta = np.array([m.beta]); conj = np.array([m.conj])
        target = np.array([g.index(g.terminal(prefix))])
        start = prefix.start
    else:
        alpha = np.array([1.0 + 0j]); beta = np.array([0j]); conj = np.array([False])
        target = np.array([g.index(start)])
    words = np.zeros((1, 0), dtype=np.int32)
    for _ in range(depth):
        nchild = ea.outdeg[target]
        total = int(nchild.sum())
        if total > cap:
            raise EnumerationCapError(f"enumeration of {total} paths exceeds cap {cap}")
        parent = np.repeat(np.arange(len(target)), nchild)
        first = np.cumsum(nchild) - nchild
        rank = np.arange(total) - np.repeat(first, nchild)
        eid = ea.offset[target[parent]] + rank
        pa, pb, pc = alpha[parent], beta[parent], conj[parent]
        ea_, eb_ = ea.alpha[eid], ea.beta[eid]
        ea_ = np.where(pc, np.conj(ea_), ea_)
        eb_ = np.where(pc, np.conj(eb_), eb_)
        alpha = pa * ea_
        beta = pa * eb_ + pb
        conj = pc ^ ea.conj[eid]
        target = ea.target[eid]
        if keep_words:
            words = np.concatenate([words[parent], rank[:, None].astype(np.int32)], axis=1)
    return CylinderTable(start, depth, alpha, beta, conj, target,
                         words if keep_words else None)
