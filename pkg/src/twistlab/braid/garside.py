"""Left greedy normal form in B_n via permutation braids.

A simple braid is stored as the tuple ``pi`` with ``pi[x]`` the final
position of the strand starting at x (0-based).  Every braid is written
uniquely as Delta^k A_1 ... A_r with each pair (A_j, A_{j+1}) left weighted
and A_1 != Delta, A_r != 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .word import BraidWord, delta

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def half_twist(n: int) -> Perm:
    return tuple(n - 1 - x for x in range(n))


def _inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def starting_set(p: Perm) -> set[int]:
    """Generators i (0-based) with sigma_i a prefix of the simple braid."""
    return {i for i in range(len(p) - 1) if p[i] > p[i + 1]}


def finishing_set(p: Perm) -> set[int]:
    q = _inverse(p)
    return {i for i in range(len(p) - 1) if q[i] > q[i + 1]}


def _append(p: Perm, i: int) -> Perm:
    """p followed by sigma_i: positions i and i+1 swap at the end."""
    return tuple(i + 1 if y == i else i if y == i + 1 else y for y in p)


def _strip(p: Perm, i: int) -> Perm:
    """sigma_i^-1 followed by p (requires i in the starting set)."""
    lst = list(p)
    lst[i], lst[i + 1] = lst[i + 1], lst[i]
    return tuple(lst)


def flip(p: Perm) -> Perm:
    """Delta^-1 p Delta."""
    n = len(p)
    return tuple(n - 1 - p[n - 1 - x] for x in range(n))


def meet(p: Perm, q: Perm) -> Perm:
    """Greatest common prefix of two simple braids.

    Bottom-up merge sort on strands: a strand from the right block may
    overtake the remaining left strands only if it crosses every one of
    them in both braids.
    """
    n = len(p)
    runs = [[x] for x in range(n)]
    while len(runs) > 1:
        merged = []
        for r in range(0, len(runs) - 1, 2):
            left, right = runs[r], runs[r + 1]
            k = len(left)
            minp = [n] * (k + 1)
            minq = [n] * (k + 1)
            for t in range(k - 1, -1, -1):
                x = left[t]
                minp[t] = minp[t + 1] if minp[t + 1] < p[x] else p[x]
                minq[t] = minq[t + 1] if minq[t + 1] < q[x] else q[x]
            out: list[int] = []
            i = j = 0
            m = len(right)
            while i < k and j < m:
                y = right[j]
                if p[y] < minp[i] and q[y] < minq[i]:
                    out.append(y)
                    j += 1
                else:
                    out.append(left[i])
                    i += 1
            out.extend(left[i:])
            out.extend(right[j:])
            merged.append(out)
        if len(runs) % 2:
            merged.append(runs[-1])
        runs = merged
    c = [0] * n
    for k, x in enumerate(runs[0] if runs else []):
        c[x] = k
    return tuple(c)


def _left_weight(a: Perm, b: Perm) -> tuple[Perm, Perm]:
    """Move the longest possible prefix of b onto the end of a."""
    n = len(a)
    ainv = _inverse(a)
    if not any(b[i] > b[i + 1] and ainv[i] < ainv[i + 1] for i in range(n - 1)):
        return a, b
    comp = tuple(n - 1 - ainv[x] for x in range(n))
    c = meet(b, comp)
    cinv = _inverse(c)
    return tuple(c[y] for y in a), tuple(b[cinv[x]] for x in range(n))


@dataclass(frozen=True)
class NormalForm:
    n: int
    power: int
    factors: tuple[Perm, ...]

    def is_identity(self) -> bool:
        return self.power == 0 and not self.factors

    def to_word(self) -> BraidWord:
        letters: list[int] = []
        d = delta(self.n)
        if self.power >= 0:
            letters.extend(d.letters * self.power)
        else:
            letters.extend(d.inverse().letters * (-self.power))
        for f in self.factors:
            letters.extend(simple_word(f))
        return BraidWord(self.n, tuple(letters))

    def key(self) -> tuple:
        return (self.n, self.power, self.factors)


def simple_word(p: Perm) -> tuple[int, ...]:
    """Positive Artin word of a permutation braid."""
    letters: list[int] = []
    cur = list(p)
    # peel generators from the front: sigma_i prefix iff cur[i] > cur[i+1]
    while True:
        for i in range(len(cur) - 1):
            if cur[i] > cur[i + 1]:
                letters.append(i + 1)
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                break
        else:
            return tuple(letters)


def _push(n: int, factors: list[Perm], s: Perm) -> None:
    """Right-multiply a left-weighted list by a simple element in place."""
    factors.append(s)
    for j in range(len(factors) - 2, -1, -1):
        a, b = _left_weight(factors[j], factors[j + 1])
        if a == factors[j]:
            break
        factors[j], factors[j + 1] = a, b


def normal_form(w: BraidWord) -> NormalForm:
    n = w.n
    full = half_twist(n)
    ident = identity(n)
    power = 0
    factors: list[Perm] = []
    for g in w.letters:
        i = abs(g) - 1
        if g > 0:
            s = _append(ident, i)
        else:
            # sigma_i^-1 = Delta^-1 X with X = Delta sigma_i^-1
            s = _append(full, i)
            power -= 1
            factors = [flip(f) for f in factors]
        _push(n, factors, s)
        while factors and factors[0] == full:
            factors.pop(0)
            power += 1
        while factors and factors[-1] == ident:
            factors.pop()
    return NormalForm(n, power, tuple(factors))


def equal(u: BraidWord, v: BraidWord) -> bool:
    return normal_form(u).key() == normal_form(v).key()


def is_trivial(w: BraidWord) -> bool:
    return normal_form(w).is_identity()
