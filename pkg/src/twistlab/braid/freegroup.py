"""Free group words and the Artin action.

Generators x_1..x_n are loops based far to the left of the punctures: x_p
travels above punctures 1..p-1 and then encircles puncture p
counterclockwise.  Under sigma_i the induced substitution is
x_i -> x_i x_{i+1} x_i^-1 and x_{i+1} -> x_i.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .word import BraidWord, free_reduce

Word = tuple[int, ...]


def inv(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        lo += 1
        hi -= 1
    return tuple(w[lo:hi])


def cyclic_canonical(w: Sequence[int]) -> Word:
    """Least rotation of a cyclically reduced word (conjugacy class key)."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    return min(w[k:] + w[:k] for k in range(len(w)))


def _sigma_images(i: int, e: int) -> dict[int, Word]:
    if e > 0:
        return {i: (i, i + 1, -i), i + 1: (i,)}
    return {i: (i + 1,), i + 1: (-(i + 1), i, i + 1)}


def substitute(w: Sequence[int], images: dict[int, Word]) -> Word:
    out: list[int] = []
    for x in w:
        img = images.get(abs(x))
        if img is None:
            out.append(x)
        elif x > 0:
            out.extend(img)
        else:
            out.extend(inv(img))
    return free_reduce(out)


def act_word(b: BraidWord | Iterable[int], w: Sequence[int]) -> Word:
    """Image of the free group element w under the braid, applied left to right."""
    letters = b.letters if isinstance(b, BraidWord) else tuple(b)
    cur = free_reduce(w)
    for x in letters:
        cur = substitute(cur, _sigma_images(abs(x), 1 if x > 0 else -1))
    return cur


def automorphism(b: BraidWord) -> dict[int, Word]:
    return {p: act_word(b, (p,)) for p in range(1, b.n + 1)}


def is_inner(images: dict[int, Word]) -> bool:
    """Decide whether x_p -> images[p] is conjugation by one element g."""
    gens = sorted(images)
    if not gens:
        return True
    first = gens[0]
    g0 = _conjugator_to(images[first], first)
    if g0 is None:
        return False
    # every conjugator of x_first onto images[first] is g0 x_first^k
    rest = gens[1:]
    if not rest:
        return True
    second = rest[0]
    v = free_reduce(inv(g0) + images[second] + g0)
    k = _power_conjugation(v, first, second)
    if k is None:
        return False
    g = free_reduce(g0 + (first,) * k if k >= 0 else g0 + (-first,) * (-k))
    for p in gens:
        if free_reduce(g + (p,) + inv(g)) != free_reduce(images[p]):
            return False
    return True


def _conjugator_to(w: Word, x: int) -> Word | None:
    """Some g with w == g x g^-1, or None."""
    w = free_reduce(w)
    n = len(w)
    if n % 2 == 0:
        return None
    m = n // 2
    if w[m] != x:
        return None
    u = w[:m]
    if free_reduce(u + (x,) + inv(u)) != w:
        return None
    return u


def _power_conjugation(v: Word, a: int, b: int) -> int | None:
    """k with v == a^k b a^-k, or None."""
    v = free_reduce(v)
    n = len(v)
    if n % 2 == 0:
        return None
    m = n // 2
    if v[m] != b:
        return None
    pre = v[:m]
    if pre and any(y != pre[0] for y in pre):
        return None
    if pre and abs(pre[0]) != a:
        return None
    k = (len(pre) if not pre or pre[0] > 0 else -len(pre))
    expect = ((a,) * k if k >= 0 else (-a,) * (-k)) + (b,) + ((-a,) * k if k >= 0 else (a,) * (-k))
    return k if free_reduce(expect) == v else None
