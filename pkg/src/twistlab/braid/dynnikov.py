"""Dynnikov coordinates and their piecewise-linear braid action.

B_n acts on the disk D_{n+2} whose first and last punctures are dummies, so
every Artin generator uses the interior update rule.  Coordinates are
``(a_1..a_n, b_1..b_n)``; a_p compares crossings below and above puncture p
and b_p compares crossings of the vertical lines on either side of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .word import BraidWord


def _pos(t: int) -> int:
    return t if t > 0 else 0


def _neg(t: int) -> int:
    return t if t < 0 else 0


def _plus(x1: int, y1: int, x2: int, y2: int) -> tuple[int, int, int, int]:
    z = x1 - _neg(y1) - x2 + _pos(y2)
    return (
        x1 + _pos(y1) + _pos(_pos(y2) - z),
        y2 - _pos(z),
        x2 + _neg(y2) + _neg(_neg(y1) + z),
        y1 + _pos(z),
    )


def _minus(x1: int, y1: int, x2: int, y2: int) -> tuple[int, int, int, int]:
    z = x1 + _neg(y1) - x2 - _pos(y2)
    return (
        x1 - _pos(y1) - _pos(_pos(y2) + z),
        y2 + _neg(z),
        x2 - _neg(y2) - _neg(_neg(y1) - z),
        y1 - _neg(z),
    )


@dataclass(frozen=True)
class LaminationCoords:
    n: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        if len(vals) != 2 * self.n:
            raise ValueError(f"expected {2 * self.n} coordinates, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @property
    def a(self) -> tuple[int, ...]:
        return self.values[: self.n]

    @property
    def b(self) -> tuple[int, ...]:
        return self.values[self.n :]

    @classmethod
    def faithful(cls, n: int) -> "LaminationCoords":
        """Nested curves around the left dummy and P_1..P_k; stabilizer is trivial."""
        return cls(n, (0,) * n + (1,) * n)

    def is_empty(self) -> bool:
        return not any(self.values)


def act_generator(c: list[int], n: int, g: int) -> None:
    i = abs(g) - 1
    a, b = c, c
    x1, y1, x2, y2 = a[i], b[n + i], a[i + 1], b[n + i + 1]
    f = _plus if g > 0 else _minus
    x1, y1, x2, y2 = f(x1, y1, x2, y2)
    c[i], c[n + i], c[i + 1], c[n + i + 1] = x1, y1, x2, y2


def act(w: BraidWord, c: LaminationCoords) -> LaminationCoords:
    """Image of the lamination under w, generators applied left to right."""
    if w.n != c.n:
        raise ValueError(f"strand counts differ: {w.n} vs {c.n}")
    vals = list(c.values)
    for g in w.letters:
        act_generator(vals, c.n, g)
    return LaminationCoords(c.n, tuple(vals))


def act_values(letters: Sequence[int], n: int, values: Sequence[int]) -> tuple[int, ...]:
    vals = list(values)
    for g in letters:
        act_generator(vals, n, g)
    return tuple(vals)


def is_trivial(w: BraidWord) -> bool:
    base = LaminationCoords.faithful(w.n)
    return act(w, base) == base


def equal(u: BraidWord, v: BraidWord) -> bool:
    base = LaminationCoords.faithful(u.n)
    return act(u, base) == act(v, base)
