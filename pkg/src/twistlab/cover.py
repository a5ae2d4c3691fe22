"""Double cover of the marked disk branched at the branch points.

Slits are straight segments of the real axis joining consecutive branch
points (b1,b2), (b3,b4), ...; sheet 1 is the upper half-plane region of the
first copy.  A slit that runs through a hole is harmless after capping: the
loop around that hole meets the slit twice, so the hole lifts to two discs.

Homology of the capped cover uses the lifts e_j of the axis segments between
consecutive branch points (j = 1..2g+1); the first 2g form a basis.  A class
is read off by counting signed crossings with those segments while tracking
the current sheet.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from . import intlinalg as la
from .braid import walks as wk
from .surface import ArcPath, DiskModel, MarkedDisk, PassageWord, boundary_walk, default_model

Vector = tuple[int, ...]


@dataclass(frozen=True)
class LiftedCurve:
    components: int
    classes: tuple[Vector, ...]
    base: PassageWord | None = None

    @property
    def plus(self) -> Vector:
        return self.classes[0]

    @property
    def minus(self) -> Vector:
        return self.classes[-1]

    def component(self, sign: int) -> Vector:
        return self.plus if sign > 0 else self.minus


class SlitModel:
    def __init__(self, model: DiskModel | None = None) -> None:
        self.model = model or default_model()
        disk = self.model.disk
        self.n = disk.n
        b = disk.branch_positions
        if len(b) % 2 or len(b) < 2:
            raise ValueError("need a positive even number of branch points")
        self.branch = b
        self.slits = tuple((b[2 * k], b[2 * k + 1]) for k in range(len(b) // 2))
        self.genus = len(b) // 2 - 1
        self.rank = 2 * self.genus
        self.in_slit = [False] * (self.n + 1)
        for x, y in self.slits:
            for s in range(x, y):
                self.in_slit[s] = True
        self.segment: list[int | None] = [None] * (self.n + 1)
        for j in range(len(b) - 1):
            for s in range(b[j], b[j + 1]):
                self.segment[s] = j
        self._build_form()
        self.sign = self._calibrate_sign()

    # ------------------------------------------------------------ homology

    def segment_arc(self, j: int) -> ArcPath:
        """The axis segment from b_j to b_{j+1}, passing above any holes."""
        lo, hi = self.branch[j], self.branch[j + 1]
        return ArcPath(lo, hi, tuple((p, "A", 1) for p in range(lo + 1, hi)))

    def _trace(self, walk: wk.Walk, sheet: int, rounds: int) -> tuple[list[int], int]:
        v = [0] * (len(self.branch) - 1)
        m = len(walk)
        for _ in range(rounds):
            for k in range(m):
                p, side, d = walk[k]
                side2 = walk[(k + 1) % m][1]
                if side == side2:
                    continue
                strip = p if d > 0 else p - 1
                down = side == "A"
                after = 3 - sheet if self.in_slit[strip] else sheet
                above = sheet if down else after
                j = self.segment[strip]
                if j is not None:
                    v[j] += (1 if down else -1) * (1 if above == 1 else -1)
                sheet = after
        return v, sheet

    def _raw_components(self, walk: wk.Walk) -> list[list[int]]:
        walk = anchored(walk, self.n)
        _, end = self._trace(walk, 1, 1)
        if end == 1:
            return [self._trace(walk, 1, 1)[0], self._trace(walk, 2, 1)[0]]
        return [self._trace(walk, 1, 2)[0]]

    def _build_form(self) -> None:
        raws = [self._raw_components(boundary_walk(self.segment_arc(j)))[0] for j in range(len(self.branch) - 1)]
        r = self.rank
        # column m holds the crossing vector of e_m against every segment
        self.form_full = [[raws[m][j] for m in range(r)] for j in range(len(self.branch) - 1)]
        self.form = [row[:] for row in self.form_full[:r]]
        self.form_inv = la.inverse_unimodular(self.form)

    def class_of(self, raw: list[int]) -> Vector:
        r = self.rank
        c = la.matvec(self.form_inv, raw[:r])
        if la.matvec(self.form_full, c) != raw:
            raise RuntimeError("crossing vector is inconsistent with the segment relation")
        return tuple(c)

    def lift_walk(self, walk: wk.Walk) -> LiftedCurve:
        raws = self._raw_components(walk)
        return LiftedCurve(len(raws), tuple(self.class_of(v) for v in raws))

    def lift(self, w: PassageWord) -> LiftedCurve:
        walk = self.model.walk(w)
        if w.kind == "arc":
            comps = self._raw_components(walk)
            if len(comps) != 2:
                raise RuntimeError("arc boundary lifted to a single component")
            return LiftedCurve(1, (self.class_of(comps[0]),), w)
        lc = self.lift_walk(walk)
        return LiftedCurve(lc.components, lc.classes, w)

    def lift_arc(self, a: ArcPath) -> Vector:
        comps = self._raw_components(boundary_walk(a))
        if len(comps) != 2:
            raise RuntimeError("arc boundary lifted to a single component")
        return self.class_of(comps[0])

    def pairing(self, x: Vector, y: Vector) -> int:
        return sum(xi * v for xi, v in zip(x, la.matvec(self.form, y)))

    def transvection(self, c: Vector) -> la.Matrix:
        """x -> x + s <x, c> c with the calibrated sign s; <x, c> = x^T J c."""
        jc = la.matvec(self.form, c)
        r = self.rank
        return [[(1 if i == k else 0) + self.sign * c[i] * jc[k] for k in range(r)] for i in range(r)]

    def _calibrate_sign(self) -> int:
        """Pick the transvection sign that makes lifting natural."""
        verdicts = set()
        for j in range(min(len(self.branch) - 2, 3)):
            arc = self.segment_arc(j)
            target = boundary_walk(self.segment_arc(j + 1))
            img = self.model.act_walk(self.model.halftwist_word(arc), target)
            before = self.lift_walk(target).classes
            after = self.lift_walk(img).classes
            c = self.lift_arc(arc)
            ok = []
            for s in (1, -1):
                self.sign = s
                t = self.transvection(c)
                imgs = {tuple(la.matvec(t, x)) for x in before}
                ok.append(all(x in imgs or tuple(-y for y in x) in imgs for x in after))
            verdicts.add(tuple(ok))
        if verdicts == {(True, False)}:
            return 1
        if verdicts == {(False, True)}:
            return -1
        raise RuntimeError(f"transvection sign calibration is ambiguous: {verdicts}")

    # ------------------------------------------------------------ cell structure

    @cached_property
    def cells(self) -> dict:
        """Cell counts and Betti numbers of the capped cover and of the base."""
        n = self.n
        branch = set(self.branch)
        holes = [p for p in range(1, n + 1) if p not in branch] + [n + 1]

        def vtx(p: int, sheet: int) -> tuple:
            return (p, 0) if p in branch else (p, sheet)

        def point(s: int, right: bool) -> int:
            if not right:
                return n + 1 if s == 0 else s
            return n + 1 if s == n else s + 1

        verts = sorted({vtx(p, t) for p in list(range(1, n + 1)) + [n + 1] for t in (1, 2)})
        edges = [(s, t) for s in range(n + 1) for t in (1, 2)]
        vi = {v: k for k, v in enumerate(verts)}
        ei = {e: k for k, e in enumerate(edges)}
        d1 = [[0] * len(edges) for _ in verts]
        for (s, t), k in ei.items():
            d1[vi[vtx(point(s, False), t)]][k] -= 1
            d1[vi[vtx(point(s, True), t)]][k] += 1
        faces = []
        for t in (1, 2):
            col = [0] * len(edges)
            for s in range(n + 1):
                col[ei[(s, t)]] += 1
            faces.append(col)
            col = [0] * len(edges)
            for s in range(n + 1):
                col[ei[(s, 3 - t if self.in_slit[s] else t)]] -= 1
            faces.append(col)
        d2 = la.transpose(faces)
        if any(any(x for x in row) for row in la.matmul(d1, d2)):
            raise RuntimeError("lifted cell structure is not a chain complex")
        r1, r2 = la.rank(d1), la.rank(d2)
        hole_lifts = {vi[vtx(p, t)] for p in holes for t in (1, 2)}
        d1_rel = [row for k, row in enumerate(d1) if k not in hole_lifts]
        r1_rel = la.rank(d1_rel)
        v, e, f = len(verts), len(edges), len(faces)
        return {
            "base": {"V": n + 1, "E": n + 1, "F": 2, "euler": 2},
            "cover": {"V": v, "E": e, "F": f, "euler": v - e + f},
            "h1_capped": e - r1 - r2,
            "h1_relative": e - r1_rel - r2,
            "boundary_lifts": len(hole_lifts),
            "euler_with_boundary": v - e + f - len(hole_lifts),
        }

    def document(self) -> dict:
        lab = self.model.disk.label
        basis = []
        for j in range(self.rank):
            lo, hi = self.branch[j], self.branch[j + 1]
            basis.append(
                {
                    "index": j + 1,
                    "recipe": "lift of the axis segment between consecutive branch points",
                    "from": lab(lo),
                    "to": lab(hi),
                    "through": [lab(p) for p in range(lo + 1, hi)],
                    "slit": self.in_slit[lo],
                }
            )
        return {
            "schema": "twistlab.slitmodel/1",
            "slits": [
                {"ends": [lab(x), lab(y)], "routing": "straight", "holes_on_slit": [lab(p) for p in range(x + 1, y)]}
                for x, y in self.slits
            ],
            "sheet_convention": "sheet 1 is the upper half-plane of the first copy",
            "transvection_sign": self.sign,
            "basis": basis,
            "intersection_form": self.form,
            "cells": self.cells,
        }


def anchored(walk: wk.Walk, n: int) -> wk.Walk:
    """The curve re-traced from its coordinates, starting at its lowest-indexed crossing."""
    walk = wk.reduce_closed(walk)
    if len(walk) == 2:
        # a curve around a single point carries no coordinates
        p = walk[0][0]
        return ((p, "A", 1), (p, "B", -1))
    comps = wk.walks_from_coords(wk.coords_from_walks([walk], n), n)
    if len(comps) != 1:
        raise ValueError("expected a single curve")
    return comps[0]


@lru_cache(maxsize=1)
def build_cover() -> SlitModel:
    return SlitModel(default_model())


@lru_cache(maxsize=1)
def genus2_model() -> SlitModel:
    labels = tuple(f"p{k}" for k in range(1, 7))
    return SlitModel(DiskModel(MarkedDisk(labels, (), labels)))


def matrix_product(mats: list[la.Matrix], r: int) -> la.Matrix:
    """Matrix of applying mats[0] first, then mats[1], ..."""
    out = la.identity(r)
    for m in mats:
        out = la.matmul(m, out)
    return out
