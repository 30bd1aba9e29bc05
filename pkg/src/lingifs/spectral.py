"""Similarity dimension, Perron measure vector and Markov weights."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import AmbiguityError, GifsError
from .system import OrderedGifs

RHO_RTOL = 1e-12
MAX_SQUARINGS = 200


@dataclass(frozen=True)
class SpectralData:
    delta: float
    h: tuple[float, ...]
    p: tuple[tuple[float, ...], ...]

    def h_of(self, g: OrderedGifs, vertex: str) -> float:
        return self.h[g.index(vertex)]


def build_matrix(g: OrderedGifs, t: float) -> np.ndarray:
    """``M(t)[i, j] = sum of r_e**t over edges i -> j``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    n = len(g.vertices)
    m = np.zeros((n, n))
    for v, _, e in g.all_edges:
        m[g.index(v), g.index(e.target)] += e.map.ratio() ** t
    return m


def _blocks(m: np.ndarray) -> list[np.ndarray]:
    ncomp, labels = connected_components(csr_matrix(m > 0), directed=True, connection="strong")
    return [np.flatnonzero(labels == c) for c in range(ncomp)]


def _perron_irreducible(b: np.ndarray) -> tuple[float, np.ndarray]:
    """Perron root and positive eigenvector of an irreducible block.

    Power iteration on ``I + B`` (primitive), accelerated by repeated squaring;
    the Collatz-Wielandt quotients ``(Bx)_i / x_i`` bracket the root.
    """
    n = len(b)
    if n == 1:
        return float(b[0, 0]), np.ones(1)
    p = np.eye(n) + b
    p /= p.max()
    x = np.ones(n)
    lo = hi = 0.0
    for _ in range(MAX_SQUARINGS):
        y = p @ x
        x = y / y.max()
        q = (b @ x) / x
        lo, hi = float(q.min()), float(q.max())
        if hi - lo <= RHO_RTOL * max(hi, 1e-300):
            break
        p = p @ p
        p /= p.max()
    return 0.5 * (lo + hi), x


def spectral_radius(m, blocks=None) -> float:
    """Spectral radius of a square non-negative matrix.

    ``blocks`` may pass in the strongly connected components of the support
    when the caller already knows them.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("square matrix required")
    if (m < 0).any():
        raise ValueError("matrix must be non-negative")
    if not m.any():
        return 0.0
    best = 0.0
    for idx in blocks if blocks is not None else _blocks(m):
        block = m[np.ix_(idx, idx)]
        if len(idx) == 1 and block[0, 0] == 0:
            continue
        best = max(best, _perron_irreducible(block)[0])
    return best


def solve_dimension(g: OrderedGifs) -> float:
    """Unique ``t`` with ``rho(M(t)) = 1`` (bisection; rho is decreasing in t)."""
    blocks = _blocks(build_matrix(g, 0.0))

    def f(t):
        return spectral_radius(build_matrix(g, t), blocks) - 1.0

    lo, hi = 0.0, 1.0
    if f(lo) < 0:
        raise GifsError("rho(M(0)) < 1: some vertex has no out-edge")
    while f(hi) > 0:
        lo, hi = hi, 2 * hi
    f_lo, f_hi = f(lo), f(hi)
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if abs(val) <= 1e-15:
            return mid
        if val > 0:
            lo, f_lo = mid, val
        else:
            hi, f_hi = mid, val
    # rho is smooth in t, so a final secant step recovers the last few bits
    if f_lo >= 0 >= f_hi and f_lo > f_hi:
        return lo + (hi - lo) * f_lo / (f_lo - f_hi)
    return 0.5 * (lo + hi)


def perron_vector(g: OrderedGifs, delta: float) -> np.ndarray:
    """Positive ``h`` with ``M(delta) h = h``, normalised to ``max h = 1``."""
    m = build_matrix(g, delta)
    rho = spectral_radius(m)
    if abs(rho - 1.0) > 1e-9:
        raise GifsError(f"rho(M(delta)) = {rho!r} is not 1")
    blocks = _blocks(m)
    critical = [idx for idx in blocks
                if not (len(idx) == 1 and m[idx[0], idx[0]] == 0)
                and abs(_perron_irreducible(m[np.ix_(idx, idx)])[0] - 1.0) <= 1e-9]
    if len(critical) != 1:
        raise AmbiguityError(f"{len(critical)} strongly connected blocks have Perron root 1")
    if len(blocks) == 1:
        h = _perron_irreducible(m)[1]
    else:
        # I + M has the simple dominant eigenvalue 2; squaring projects onto it.
        p = np.eye(len(m)) + m
        h = np.ones(len(m))
        for _ in range(MAX_SQUARINGS):
            p = p @ p
            p /= p.max()
            new = p.sum(axis=1)
            new /= new.max()
            converged = np.abs(new - h).max() <= 1e-15
            h = new
            if converged:
                break
    h = h / h.max()
    if np.abs(m @ h - h).max() > 1e-9:
        raise AmbiguityError("power iteration did not converge to an eigenvector")
    return h


def markov_weights(g: OrderedGifs, delta: float, h) -> tuple[tuple[float, ...], ...]:
    """``p_e = h[t(e)] * r_e**delta / h[src(e)]`` per edge, grouped by source vertex."""
    h = np.asarray(h, dtype=float)
    if (h <= 0).any():
        raise GifsError("measure vector must be positive")
    rows = []
    for v, row in zip(g.vertices, g.edges):
        hi = h[g.index(v)]
        rows.append(tuple(float(h[g.index(e.target)] * e.map.ratio() ** delta / hi) for e in row))
    return tuple(rows)


def spectral_data(g: OrderedGifs) -> SpectralData:
    g.warn_if_degenerate()
    delta = solve_dimension(g)
    h = perron_vector(g, delta)
    return SpectralData(delta, tuple(float(x) for x in h), markov_weights(g, delta, h))


def cylinder_mass(g: OrderedGifs, sd: SpectralData, start: str, edges) -> float:
    """``h_start * p_{w_1} ... p_{w_n}`` for the path ``edges`` from ``start``."""
    v = start
    mass = sd.h[g.index(v)]
    for k in edges:
        mass *= sd.p[g.index(v)][k]
        v = g.out(v)[k].target
    return mass


def barycenters(g: OrderedGifs, sd: SpectralData) -> np.ndarray:
    """Centre of mass of the invariant measure on each ``E_i``.

    Solves ``c_i = sum_e p_e g_e(c_t(e))`` as a real linear system.
    """
    n = len(g.vertices)
    a = np.eye(2 * n)
    rhs = np.zeros(2 * n)
    for i, row in enumerate(g.edges):
        for k, e in enumerate(row):
            t = g.index(e.target)
            w = sd.p[i][k]
            al, be = e.map.alpha, e.map.beta
            # real 2x2 form of z -> al*z (conj flips the sign of the y column)
            m = np.array([[al.real, -al.imag], [al.imag, al.real]])
            if e.map.conj:
                m[:, 1] *= -1
            a[2 * i:2 * i + 2, 2 * t:2 * t + 2] -= w * m
            rhs[2 * i] += w * be.real
            rhs[2 * i + 1] += w * be.imag
    xy = np.linalg.solve(a, rhs)
    return xy[0::2] + 1j * xy[1::2]


def closed_form_dimension(n_maps: int, ratio: float) -> float:
    return math.log(n_maps) / math.log(1.0 / ratio)
