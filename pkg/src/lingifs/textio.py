"""Plain-text formats for systems, lattice paths and initial patterns.

System file::

    vertex 1
    vertex -1
    edge 1 -> 1  alpha=0.5,0.5  beta=0,0
    edge 1 -> -1  alpha=-0.5,0.5  beta=1,1  conj

Path file::

    lattice square
    pt 0,0
    pt 1,0
    pt 1,1
    marks +1,-1

Pattern file: ``vertex <label>`` followed by ``pt <re>,<im>`` lines.
"""

from __future__ import annotations

import re
from typing import Iterable

from .errors import GifsError, ParseError
from .lattice import MarkedLatticePath
from .similitude import Similitude
from .system import Edge, OrderedGifs

_EDGE = re.compile(
    r"^edge\s+(\S+)\s*->\s*(\S+)\s+alpha=(\S+?),(\S+)\s+beta=(\S+?),(\S+?)(\s+conj)?$")


def _lines(text: str) -> Iterable[tuple[int, list[str], str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split(), line


def _real(s: str, lineno: int) -> float:
    try:
        return float(s)
    except ValueError:
        raise ParseError(f"bad number {s!r}", lineno) from None


def _complex(s: str, lineno: int) -> complex:
    parts = s.split(",")
    if len(parts) != 2:
        raise ParseError(f"expected <re>,<im>, got {s!r}", lineno)
    return complex(_real(parts[0], lineno), _real(parts[1], lineno))


def parse_gifs(text: str) -> OrderedGifs:
    vertices: list[str] = []
    rows: dict[str, list[Edge]] = {}
    for lineno, words, line in _lines(text):
        if words[0] == "vertex":
            if len(words) != 2:
                raise ParseError("expected 'vertex <label>'", lineno)
            if words[1] in rows:
                raise ParseError(f"vertex {words[1]!r} declared twice", lineno)
            vertices.append(words[1])
            rows[words[1]] = []
        elif words[0] == "edge":
            m = _EDGE.match(" ".join(words))
            if not m:
                raise ParseError("expected 'edge <src> -> <dst> alpha=<re>,<im> beta=<re>,<im> [conj]'",
                                 lineno)
            src, dst = m.group(1), m.group(2)
            if src not in rows:
                raise ParseError(f"edge from undeclared vertex {src!r}", lineno)
            alpha = complex(_real(m.group(3), lineno), _real(m.group(4), lineno))
            beta = complex(_real(m.group(5), lineno), _real(m.group(6), lineno))
            rows[src].append(Edge(dst, Similitude(alpha, beta, bool(m.group(7)))))
        else:
            raise ParseError(f"unknown directive {words[0]!r}", lineno)
    if not vertices:
        raise ParseError("no vertices declared", 0)
    return OrderedGifs(tuple(vertices), tuple(tuple(rows[v]) for v in vertices))


def _num(x: float) -> str:
    # repr round-trips exactly; normalise -0.0 so output is stable
    return repr(float(x) + 0.0)


def _pair(z: complex) -> str:
    return f"{_num(z.real)},{_num(z.imag)}"


def format_gifs(g: OrderedGifs, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.extend(f"vertex {v}" for v in g.vertices)
    for v, row in zip(g.vertices, g.edges):
        for e in row:
            line = f"edge {v} -> {e.target}  alpha={_pair(e.map.alpha)}  beta={_pair(e.map.beta)}"
            out.append(line + ("  conj" if e.map.conj else ""))
    return "\n".join(out) + "\n"


def parse_path(text: str) -> MarkedLatticePath:
    lattice = None
    pts: list[complex] = []
    marks: tuple[int, ...] = ()
    refl: tuple[bool, ...] = ()
    for lineno, words, line in _lines(text):
        key, rest = words[0], "".join(words[1:])
        if key == "lattice":
            lattice = rest
        elif key == "pt":
            pts.append(_complex(rest, lineno))
        elif key == "marks":
            try:
                marks = tuple(int(x) for x in rest.split(","))
            except ValueError:
                raise ParseError(f"bad marks {rest!r}", lineno) from None
        elif key == "refl":
            try:
                refl = tuple(bool(int(x)) for x in rest.split(","))
            except ValueError:
                raise ParseError(f"bad refl flags {rest!r}", lineno) from None
        else:
            raise ParseError(f"unknown directive {key!r}", lineno)
    if lattice is None:
        raise ParseError("missing 'lattice square|triangle' line", 0)
    return MarkedLatticePath(lattice, tuple(pts), marks, refl)


def format_path(p: MarkedLatticePath) -> str:
    out = [f"lattice {p.lattice}"]
    out.extend(f"pt {_pair(z)}" for z in p.points)
    out.append("marks " + ",".join(f"{x:+d}" for x in p.v))
    if not p.reflection_free:
        out.append("refl " + ",".join(str(int(x)) for x in p.refl))
    return "\n".join(out) + "\n"


def parse_pattern(text: str) -> dict[str, list[complex]]:
    pattern: dict[str, list[complex]] = {}
    current = None
    for lineno, words, line in _lines(text):
        if words[0] == "vertex" and len(words) == 2:
            current = words[1]
            pattern.setdefault(current, [])
        elif words[0] == "pt":
            if current is None:
                raise ParseError("point before any 'vertex' line", lineno)
            pattern[current].append(_complex("".join(words[1:]), lineno))
        else:
            raise ParseError(f"unknown directive {words[0]!r}", lineno)
    for v, pts in pattern.items():
        if not pts:
            raise GifsError(f"pattern for vertex {v!r} has no points")
    return pattern


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise GifsError(f"cannot read {path}: {exc.strerror}") from None
