"""Planar similitudes z -> a*z + b and z -> a*conj(z) + b."""

from __future__ import annotations

import cmath
from dataclasses import dataclass


@dataclass(frozen=True)
class Similitude:
    alpha: complex
    beta: complex = 0j
    conj: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "conj", bool(self.conj))

    def __call__(self, z: complex) -> complex:
        return apply(self, z)

    def ratio(self) -> float:
        return abs(self.alpha)

    @property
    def is_contraction(self) -> bool:
        return 0.0 < abs(self.alpha) < 1.0

    def rotation(self) -> float:
        return cmath.phase(self.alpha)


def apply(s: Similitude, z: complex) -> complex:
    if s.conj:
        return s.alpha * complex(z).conjugate() + s.beta
    return s.alpha * z + s.beta


def compose(outer: Similitude, inner: Similitude) -> Similitude:
    """Return the similitude ``outer o inner``."""
    a1, b1 = outer.alpha, outer.beta
    a2, b2 = inner.alpha, inner.beta
    if outer.conj:
        return Similitude(a1 * a2.conjugate(), a1 * b2.conjugate() + b1, not inner.conj)
    return Similitude(a1 * a2, a1 * b2 + b1, inner.conj)


def compose_all(maps) -> Similitude:
    """Left-to-right composition ``maps[0] o maps[1] o ... o maps[-1]``."""
    maps = list(maps)
    if not maps:
        raise ValueError("compose_all needs at least one map")
    result = maps[0]
    for m in maps[1:]:
        result = compose(result, m)
    return result


def fixed_point(s: Similitude) -> complex:
    """Unique fixed point of a contracting similitude."""
    a, b = s.alpha, s.beta
    if not abs(a) < 1.0:
        raise ValueError(f"fixed_point needs a contraction, |alpha| = {abs(a)!r}")
    if s.conj:
        # z = a*conj(z) + b  =>  conj(z) = conj(a)*z + conj(b)
        return (a * b.conjugate() + b) / (1.0 - abs(a) ** 2)
    return b / (1.0 - a)
