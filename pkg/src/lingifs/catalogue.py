"""Built-in space-filling curves and self-similar tiles."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .chain import chain_check
from .errors import GifsError
from .lattice import MarkedLatticePath, build_gifs
from .similitude import Similitude
from .spectral import solve_dimension
from .system import OrderedGifs


@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    system: OrderedGifs
    delta: float
    description: str
    reconstructed: bool = False
    path: MarkedLatticePath | None = None
    point_pattern: complex | None = None  # single-point initial pattern, if the curve has a natural one


W6 = cmath.exp(1j * math.pi / 3)


def _heighway():
    return MarkedLatticePath("square", (0j, 1 + 0j, 1 + 1j), (1, -1))


def _hilbert():
    return MarkedLatticePath("square", (0j, 1j, 1 + 1j, 2 + 1j, 2 + 0j), (-1, 1, 1, -1))


# Nine-step walks from 0 to 3 with every mark +1 whose attractor is the square
# with diagonal [0, 3]; lexicographic order, the first is the default.
PEANO_PATHS = (
    (0j, 1 + 0j, 1 - 1j, 2 - 1j, 2 + 0j, 1 + 0j, 1 + 1j, 2 + 1j, 2 + 0j, 3 + 0j),
    (0j, 1 + 0j, 1 - 1j, 2 - 1j, 2 + 0j, 2 + 1j, 1 + 1j, 1 + 0j, 2 + 0j, 3 + 0j),
    (0j, 1 + 0j, 1 + 1j, 2 + 1j, 2 + 0j, 1 + 0j, 1 - 1j, 2 - 1j, 2 + 0j, 3 + 0j),
    (0j, 1 + 0j, 1 + 1j, 2 + 1j, 2 + 0j, 2 - 1j, 1 - 1j, 1 + 0j, 2 + 0j, 3 + 0j),
    (0j, 1 + 0j, 2 + 0j, 2 - 1j, 1 - 1j, 1 + 0j, 1 + 1j, 2 + 1j, 2 + 0j, 3 + 0j),
    (0j, 1 + 0j, 2 + 0j, 2 + 1j, 1 + 1j, 1 + 0j, 1 - 1j, 2 - 1j, 2 + 0j, 3 + 0j),
)


def _peano():
    return MarkedLatticePath("square", PEANO_PATHS[0], (1,) * 9)


def _gosper_trace():
    # steps 1, w, -1, w^2, 1, 1, conj(w) with w = e^{i pi/3}; ends at 2 + w
    steps = (1, W6, -1, W6 ** 2, 1, 1, W6.conjugate())
    pts = [0j]
    for s in steps:
        pts.append(pts[-1] + s)
    return MarkedLatticePath("triangle", tuple(pts))


def _gosper():
    return _gosper_trace().with_marks((1, -1, -1, 1, 1, 1, -1))


def _anti_gosper():
    return _gosper_trace().with_marks((1, 1, -1, -1, 1, -1, -1))


def _sierpinski() -> OrderedGifs:
    # T1..T4: bottom, right, top, left quarter-triangles of the unit square.
    # T1 pieces as (b, target) for the map (z + b) / 2; the quarter turn
    # z -> iz + 1 carries T_m onto T_{m+1} and (z + b)/2 -> T_m onto (z + 1 + ib)/2 -> T_{m+1}.
    rows = {1: [(0j, 1), (0j, 2), (1 + 0j, 4), (1 + 0j, 1)]}
    for m in (2, 3, 4):
        rows[m] = [(1 + 1j * b, t % 4 + 1) for b, t in rows[m - 1]]
    return OrderedGifs.from_lists({
        f"T{m}": [(f"T{t}", Similitude(0.5, b / 2)) for b, t in rows[m]] for m in (1, 2, 3, 4)})


def _koch() -> OrderedGifs:
    maps = [
        Similitude(1 / 3),
        Similitude(W6 / 3, 1 / 3),
        Similitude(W6.conjugate() / 3, 0.5 + 1j * math.sqrt(3) / 6),
        Similitude(1 / 3, 2 / 3),
    ]
    return OrderedGifs.ifs(maps)


def _four_star() -> OrderedGifs:
    s = {
        1: Similitude(-0.5),
        2: Similitude(-0.5, -1j),
        3: Similitude(-0.5, cmath.exp(5j * math.pi / 6)),
        4: Similitude(-0.5, cmath.exp(1j * math.pi / 6)),
    }
    rule = {
        "X": [(3, "U"), (3, "V"), (3, "W"), (1, "U")],
        "Y": [(1, "V"), (4, "Z"), (4, "U"), (4, "V")],
        "Z": [(4, "W"), (4, "X"), (4, "Y"), (1, "W")],
        "U": [(1, "X"), (2, "V"), (2, "W"), (2, "X")],
        "V": [(2, "Y"), (2, "Z"), (2, "U"), (1, "Y")],
        "W": [(1, "Z"), (3, "X"), (3, "Y"), (3, "Z")],
    }
    return OrderedGifs.from_lists({v: [(t, s[j]) for j, t in row] for v, row in rule.items()})


def _entries():
    log43 = math.log(4) / math.log(3)
    made = []
    for name, path, desc, recon, point in [
        ("heighway", _heighway(), "Heighway dragon, two-segment square-lattice path", False, (1 + 1j) / 2),
        ("hilbert", _hilbert(), "Hilbert curve filling the square [0, 2]^2", True, 1 + 1j),
        ("peano", _peano(), "Peano curve filling the square with diagonal [0, 3]", True, 1.5 + 0j),
        ("gosper", _gosper(), "Gosper curve filling the Gosper island", False, None),
        ("anti-gosper", _anti_gosper(), "anti-Gosper curve on the Gosper trace", False, None),
    ]:
        made.append(CatalogueEntry(name, build_gifs(path), 2.0, desc, recon, path, point))
    made.append(CatalogueEntry("sierpinski-curve", _sierpinski(), 2.0,
                               "Sierpinski curve through four quarter-triangles of the unit square"))
    made.append(CatalogueEntry("koch", _koch(), log43, "von Koch curve"))
    made.append(CatalogueEntry("four-star", _four_star(), 2.0,
                               "six-state system filling the four-star tile"))
    return made


@lru_cache(maxsize=1)
def _load() -> dict:
    out = {}
    for entry in _entries():
        if not chain_check(entry.system).passed:
            raise GifsError(f"catalogue entry {entry.name!r} fails the chain check")
        delta = solve_dimension(entry.system)
        if abs(delta - entry.delta) > 1e-9:
            raise GifsError(f"catalogue entry {entry.name!r}: dimension {delta!r} != {entry.delta!r}")
        out[entry.name] = entry
    return out


def names() -> list[str]:
    return list(_load())


def get(name: str) -> CatalogueEntry:
    try:
        return _load()[name]
    except KeyError:
        raise GifsError(f"unknown curve {name!r}; choose from {', '.join(names())}") from None
