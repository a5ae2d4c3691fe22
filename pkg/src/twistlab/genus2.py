"""Genus-2 checks: the 6-punctured sphere, Sp(4,Z) and permutation images.

Words in tau_1..tau_5 are signed integer tuples, exactly like braid words.
tau_i lifts the half-twist sigma_i on six branch points, so a word is trivial
in Map_2 iff its braid is trivial on the sphere and its symplectic image is
the identity (the hyperelliptic involution is sphere-trivial with image -I).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import intlinalg as la
from .braid import freegroup
from .braid.word import BraidWord
from .cover import genus2_model, matrix_product


def _as_braid(w: BraidWord | Sequence[int], n: int = 6) -> BraidWord:
    return w if isinstance(w, BraidWord) else BraidWord(n, tuple(w))


def sphere_trivial(w: BraidWord | Sequence[int]) -> bool:
    """Trivial in the mapping class group of the 6-punctured sphere.

    The braid acts on pi_1 of the disk minus six points; on the sphere the
    boundary loop x1...x6 dies, so x6 = (x1...x5)^-1 and the action is an
    automorphism of F_5.  The class is trivial iff that automorphism is inner.
    """
    b = _as_braid(w)
    if any(i != p for i, p in enumerate(b.permutation())):
        raise ValueError("sphere_trivial needs a pure braid")
    n = b.n
    last = tuple(-x for x in range(n - 1, 0, -1))
    images = {}
    for p in range(1, n):
        img = freegroup.act_word(b, (p,))
        images[p] = freegroup.substitute(img, {n: last})
    return freegroup.is_inner(images)


def sp4_image(w: BraidWord | Sequence[int]) -> la.Matrix:
    model = genus2_model()
    b = _as_braid(w)
    mats = []
    cache: dict[int, la.Matrix] = {}
    for g in b.letters:
        if g not in cache:
            t = model.transvection(model.lift_arc(model.segment_arc(abs(g) - 1)))
            cache[g] = t if g > 0 else la.inverse_unimodular(t)
        mats.append(cache[g])
    return matrix_product(mats, model.rank)


def map2_is_identity(w: BraidWord | Sequence[int]) -> bool:
    b = _as_braid(w)
    try:
        sphere = sphere_trivial(b)
    except ValueError:
        return False
    return sphere and la.is_identity(sp4_image(b))


def transposition_image(g: int, n: int = 6) -> tuple[int, ...]:
    """tau_i -> (i, i+1) as a 0-based permutation tuple."""
    p = list(range(n))
    i = abs(g) - 1
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Apply p first, then q."""
    return tuple(q[x] for x in p)


def generated_group(gens: Iterable[tuple[int, ...]], n: int) -> set[tuple[int, ...]]:
    ident = tuple(range(n))
    gens = [g for g in set(gens) if g != ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def perm_image(factors: Iterable[BraidWord | Sequence[int]], n: int = 6) -> dict:
    """Permutation images of factors and the subgroup they generate."""
    images = []
    for f in factors:
        b = _as_braid(f, n)
        images.append(b.permutation())
    group = generated_group(images, n)
    orbits = []
    seen: set[int] = set()
    for x in range(n):
        if x in seen:
            continue
        orb = sorted({g[x] for g in group})
        seen.update(orb)
        orbits.append([y + 1 for y in orb])
    return {
        "images": images,
        "order": len(group),
        "orbits": orbits,
        "fixed_points": [o[0] for o in orbits if len(o) == 1],
    }
