"""Braid words in Artin generators.

A word is a tuple of nonzero signed integers: ``+i`` is sigma_i and ``-i`` is
its inverse.  Products are read left to right, so ``u * v`` applies ``u``
first.  sigma_i is the counterclockwise exchange of the points in positions
i and i+1: the left point passes below to the right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"strand count must be positive, got {self.n}")
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if x == 0 or abs(x) >= self.n:
                raise ValueError(f"generator {x} out of range for B_{self.n}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, n: int) -> "BraidWord":
        return cls(n, ())

    @classmethod
    def sigma(cls, n: int, i: int, e: int = 1) -> "BraidWord":
        return cls(n, (i if e > 0 else -i,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.n != self.n:
            raise ValueError(f"strand counts differ: {self.n} vs {other.n}")
        return BraidWord(self.n, self.letters + other.letters)

    def __pow__(self, k: int) -> "BraidWord":
        if k < 0:
            return self.inverse() ** (-k)
        return BraidWord(self.n, self.letters * k)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(-x for x in reversed(self.letters)))

    def conj(self, g: "BraidWord") -> "BraidWord":
        """g self g^-1."""
        return g * self * g.inverse()

    def reduced(self) -> "BraidWord":
        return BraidWord(self.n, free_reduce(self.letters))

    def shifted(self, offset: int, n: int | None = None) -> "BraidWord":
        """Relabel sigma_i as sigma_{i+offset} inside B_n."""
        m = self.n + offset if n is None else n
        return BraidWord(m, tuple(x + offset if x > 0 else x - offset for x in self.letters))

    def permutation(self) -> tuple[int, ...]:
        """perm[k] = final position (0-based) of the strand starting at k."""
        pos = list(range(self.n))
        where = list(range(self.n))  # where[p] = strand at position p
        for x in self.letters:
            i = abs(x) - 1
            a, b = where[i], where[i + 1]
            where[i], where[i + 1] = b, a
            pos[a], pos[b] = i + 1, i
        return tuple(pos)

    def exponent_sum(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def to_list(self) -> list[int]:
        return list(self.letters)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def delta(n: int, lo: int = 1, hi: int | None = None, total: int | None = None) -> BraidWord:
    """Half twist on the block of positions lo..hi (1-based, inclusive)."""
    hi = n if hi is None else hi
    m = n if total is None else total
    letters: list[int] = []
    for top in range(lo, hi):
        letters.extend(range(top, lo - 1, -1))
    return BraidWord(m, tuple(letters))


def full_twist(n: int, lo: int = 1, hi: int | None = None) -> BraidWord:
    d = delta(n, lo, hi)
    return d * d
