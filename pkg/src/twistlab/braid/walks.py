"""Closed walks in the strip graph of an n-punctured disk.

Punctures sit on the real axis at positions 1..n.  The vertical ray above
puncture p is U_p (side "A"), the one below is L_p (side "B").  The rays cut
the disk into strips S_0..S_n, S_p lying between punctures p and p+1.  A
curve is recorded by the cyclic sequence of ray crossings; each crossing is
an edge ``(p, side, d)`` with ``d = +1`` when moving from S_{p-1} to S_p and
``d = -1`` for the reverse.  Cyclically reduced walks are in bijection with
free homotopy classes of loops, hence with isotopy classes of essential
simple closed curves.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import freegroup
from .word import BraidWord

Edge = tuple[int, str, int]
Walk = tuple[Edge, ...]


def flip(e: Edge) -> Edge:
    return (e[0], e[1], -e[2])


def reverse(w: Sequence[Edge]) -> Walk:
    return tuple(flip(e) for e in reversed(w))


def reduce_path(w: Iterable[Edge]) -> Walk:
    out: list[Edge] = []
    for e in w:
        if out and out[-1] == flip(e):
            out.pop()
        else:
            out.append(e)
    return tuple(out)


def reduce_closed(w: Iterable[Edge]) -> Walk:
    w = reduce_path(w)
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == flip(w[hi - 1]):
        lo += 1
        hi -= 1
    return tuple(w[lo:hi])


def check_path(w: Sequence[Edge], start: int | None = None) -> int:
    """Validate consecutive edges share a strip; return the final strip."""
    strip = start
    for p, side, d in w:
        if side not in ("A", "B") or d not in (1, -1):
            raise ValueError(f"malformed edge {(p, side, d)}")
        before = p - 1 if d > 0 else p
        if strip is not None and strip != before:
            raise ValueError(f"edge {(p, side, d)} does not leave strip {strip}")
        strip = p if d > 0 else p - 1
    return -1 if strip is None else strip


def start_strip(w: Sequence[Edge]) -> int:
    p, _, d = w[0]
    return p - 1 if d > 0 else p


def canonical_closed(w: Sequence[Edge]) -> Walk:
    """Orientation-free rotation-free key of a cyclically reduced walk."""
    w = reduce_closed(w)
    if not w:
        return ()
    cands = []
    for v in (tuple(w), reverse(w)):
        cands.extend(v[k:] + v[:k] for k in range(len(v)))
    return min(cands)


def to_free(w: Sequence[Edge]) -> tuple[int, ...]:
    return tuple(p * d for p, side, d in w if side == "B")


def generator_path(p: int, e: int) -> Walk:
    up = tuple((k, "A", 1) for k in range(1, p))
    loop = ((p, "B", 1), (p, "A", -1)) if e > 0 else ((p, "A", 1), (p, "B", -1))
    return up + loop + reverse(up)


def from_free(word: Iterable[int]) -> Walk:
    edges: list[Edge] = []
    for x in word:
        edges.extend(generator_path(abs(x), 1 if x > 0 else -1))
    return reduce_closed(edges)


def act_closed(b: BraidWord, w: Sequence[Edge]) -> Walk:
    """Image of a closed walk under a braid, through the Artin action."""
    return from_free(freegroup.act_word(b, to_free(w)))


def crossing_counts(w: Sequence[Edge], n: int) -> tuple[list[int], list[int], list[int]]:
    """(u, d, beta): crossings of U_p, L_p and through-segments of S_p."""
    u = [0] * (n + 1)
    dn = [0] * (n + 1)
    beta = [0] * (n + 1)
    for p, side, _ in w:
        if side == "A":
            u[p] += 1
        else:
            dn[p] += 1
    m = len(w)
    for k in range(m):
        p1, _, d1 = w[k]
        p2, _, d2 = w[(k + 1) % m]
        if d1 == d2 and p2 == p1 + d1:
            strip = p1 if d1 > 0 else p2
            beta[strip] += 1
    return u, dn, beta


def coords_from_walks(walks: Iterable[Sequence[Edge]], n: int) -> tuple[int, ...]:
    """Dynnikov coordinates (a_1..a_n, b_1..b_n) of a multicurve in D_n.

    Coordinates are taken in the disk with two extra dummy punctures at the
    ends, so a curve inside D_n never meets the outer lines.
    """
    u = [0] * (n + 1)
    dn = [0] * (n + 1)
    beta = [0] * (n + 1)
    for w in walks:
        cu, cd, cb = crossing_counts(reduce_closed(w), n)
        for p in range(n + 1):
            u[p] += cu[p]
            dn[p] += cd[p]
            beta[p] += cb[p]
    a = []
    b = []
    for p in range(1, n + 1):
        if (dn[p] - u[p]) % 2 or (beta[p - 1] - beta[p]) % 2:
            raise ValueError("odd crossing parity: not a closed multicurve")
        a.append((dn[p] - u[p]) // 2)
        b.append((beta[p - 1] - beta[p]) // 2)
    return tuple(a + b)


def walks_from_coords(c: Sequence[int], n: int) -> list[Walk]:
    """Rebuild the components of a multicurve inside D_n from coordinates."""
    a = list(c[:n])
    b = list(c[n:])
    beta = [0] * (n + 1)
    for p in range(1, n + 1):
        beta[p] = beta[p - 1] - 2 * b[p - 1]
    if beta[n] != 0 or any(x < 0 for x in beta):
        raise ValueError("coordinates leave D_n or are inadmissible")
    ucount = [0] * (n + 2)
    dcount = [0] * (n + 2)
    lturn = [0] * (n + 2)
    rturn = [0] * (n + 2)
    for p in range(1, n + 1):
        m = max(beta[p - 1], beta[p])
        ucount[p] = m // 2 - a[p - 1]
        dcount[p] = m // 2 + a[p - 1]
        if m % 2 or ucount[p] < 0 or dcount[p] < 0:
            raise ValueError("inadmissible coordinates")
        lturn[p] = (m - beta[p - 1]) // 2
        rturn[p] = (m - beta[p]) // 2
    # node (p, side, k): k-th crossing of the ray counted outward from P_p
    # link[node][0] = partner through strip p-1, link[node][1] = through strip p
    link: dict[tuple[int, str, int], list] = {}
    for p in range(1, n + 1):
        for k in range(1, ucount[p] + 1):
            link[(p, "A", k)] = [None, None]
        for k in range(1, dcount[p] + 1):
            link[(p, "B", k)] = [None, None]

    def edge_nodes(p: int, skip: int) -> list[tuple[int, str, int]]:
        top = [(p, "A", k) for k in range(ucount[p], skip, -1)]
        bot = [(p, "B", k) for k in range(skip + 1, dcount[p] + 1)]
        return top + bot

    for p in range(1, n + 1):
        for k in range(1, lturn[p] + 1):
            link[(p, "A", k)][0] = (p, "B", k)
            link[(p, "B", k)][0] = (p, "A", k)
        for k in range(1, rturn[p] + 1):
            link[(p, "A", k)][1] = (p, "B", k)
            link[(p, "B", k)][1] = (p, "A", k)
    for s in range(1, n):
        left = edge_nodes(s, rturn[s])
        right = edge_nodes(s + 1, lturn[s + 1])
        if len(left) != len(right) or len(left) != beta[s]:
            raise ValueError("inconsistent strip pairing")
        for x, y in zip(left, right):
            link[x][1] = y
            link[y][0] = x
    seen: set = set()
    out: list[Walk] = []
    for node in sorted(link):
        if node in seen:
            continue
        edges: list[Edge] = []
        cur, d = node, 1
        while True:
            seen.add(cur)
            p, side, _ = cur
            edges.append((p, side, d))
            strip = p if d > 0 else p - 1
            nxt = link[cur][1] if d > 0 else link[cur][0]
            if nxt is None:
                raise ValueError("dangling strand")
            d = 1 if nxt[0] == strip + 1 else -1
            cur = nxt
            if cur == node:
                if d != 1:
                    raise ValueError("strand closes with reversed direction")
                break
            if cur in seen:
                raise ValueError("strand revisits a crossing")
        out.append(reduce_closed(edges))
    return out
