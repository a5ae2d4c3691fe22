"""Planar model of the reference fiber and passage-word encodings.

The 43 interior marked points sit on the real axis in a fixed order; the
eighth hole z8 is the outer boundary.  Arcs and curves are recorded by the
order in which they cross the vertical line through each marked point and on
which side ("A" above, "B" below).  Isotopy is decided through Dynnikov
coordinates of the curve (for arcs: of the boundary of a thin neighbourhood).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .braid import dynnikov
from .braid import walks as wk
from .braid.word import BraidWord, full_twist

FIXTURE_SCHEMA = "twistlab.fixture/1"
OUTER = "z8"

Passage = tuple[str, str]


def _canonical_labels() -> tuple[tuple[str, ...], tuple[str, ...], tuple[str, ...]]:
    order = ["alpha"] + [f"alpha~{j}" for j in range(5, 0, -1)]
    branch = list(order)
    holes = []
    for i in range(1, 7):
        block = [f"q~{i},{j}" for j in range(1, 6)]
        branch.extend(block)
        order.extend(block)
        if i <= 5:
            order.append(f"z{i}")
            holes.append(f"z{i}")
    order.extend(["z6", "z7"])
    holes.extend(["z6", "z7"])
    return tuple(branch), tuple(holes), tuple(order)


@dataclass(frozen=True)
class MarkedDisk:
    branch_points: tuple[str, ...]
    hole_points: tuple[str, ...]
    real_order: tuple[str, ...]
    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(set(self.real_order)) != len(self.real_order):
            raise ValueError("labels must be unique")
        if set(self.real_order) != set(self.branch_points) | set(self.hole_points):
            raise ValueError("real_order must list exactly the branch and hole labels")
        if set(self.branch_points) & set(self.hole_points):
            raise ValueError("a label cannot be both branch and hole")
        object.__setattr__(self, "_pos", {lab: k + 1 for k, lab in enumerate(self.real_order)})

    @property
    def n(self) -> int:
        return len(self.real_order)

    def index(self, label: str) -> int:
        """0-based place in the real order."""
        return self._pos[label] - 1

    def pos(self, label: str) -> int:
        """1-based position used by the braid engine."""
        try:
            return self._pos[label]
        except KeyError:
            raise ValueError(f"unknown label {label!r}") from None

    def label(self, pos: int) -> str:
        return self.real_order[pos - 1]

    def is_branch(self, pos: int) -> bool:
        return self.real_order[pos - 1] in self._branch_set

    @cached_property
    def _branch_set(self) -> frozenset[str]:
        return frozenset(self.branch_points)

    @cached_property
    def branch_positions(self) -> tuple[int, ...]:
        return tuple(p for p in range(1, self.n + 1) if self.is_branch(p))

    @property
    def s0(self) -> tuple[str, ...]:
        """All interior labels plus the outer boundary."""
        return self.real_order + (OUTER,)


@lru_cache(maxsize=1)
def canonical_configuration() -> MarkedDisk:
    branch, holes, order = _canonical_labels()
    return MarkedDisk(branch, holes, order)


# ---------------------------------------------------------------- passage words


@dataclass(frozen=True)
class PassageWord:
    kind: str
    passages: tuple[Passage, ...]
    endpoints: tuple[str, str] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("arc", "curve"):
            raise ValueError(f"kind must be 'arc' or 'curve', got {self.kind!r}")
        ps = tuple((str(lab), str(side)) for lab, side in self.passages)
        for _, side in ps:
            if side not in ("A", "B"):
                raise ValueError(f"side must be 'A' or 'B', got {side!r}")
        object.__setattr__(self, "passages", ps)
        if self.kind == "arc":
            if self.endpoints is None or len(self.endpoints) != 2:
                raise ValueError("an arc needs two endpoints")
            object.__setattr__(self, "endpoints", (str(self.endpoints[0]), str(self.endpoints[1])))
        elif self.endpoints is not None:
            raise ValueError("a curve has no endpoints")

    def to_record(self, name: str | None = None) -> dict:
        rec: dict = {"schema": FIXTURE_SCHEMA}
        if name is not None:
            rec["name"] = name
        rec["kind"] = self.kind
        if self.endpoints is not None:
            rec["endpoints"] = list(self.endpoints)
        rec["passages"] = [list(p) for p in self.passages]
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "PassageWord":
        if rec.get("schema") != FIXTURE_SCHEMA:
            raise ValueError(f"unsupported fixture schema {rec.get('schema')!r}")
        ends = rec.get("endpoints")
        return cls(rec["kind"], tuple(tuple(p) for p in rec["passages"]), tuple(ends) if ends else None)


@dataclass(frozen=True)
class ArcPath:
    """An arc in position form: endpoints and crossing edges in order."""

    e1: int
    e2: int
    edges: wk.Walk


def _turn(e: int, strip: int) -> list[wk.Edge]:
    """Clockwise turn around point e, entered from the given strip."""
    if strip == e - 1:
        return [(e, "A", 1), (e, "B", -1)]
    if strip == e:
        return [(e, "B", -1), (e, "A", 1)]
    raise ValueError(f"strip {strip} is not adjacent to point {e}")


def _edges_from_lines(lines: Sequence[tuple[int, str]], strip: int) -> tuple[wk.Walk, int]:
    edges = []
    for p, side in lines:
        if p == strip + 1:
            edges.append((p, side, 1))
            strip = p
        elif p == strip:
            edges.append((p, side, -1))
            strip = p - 1
        else:
            raise ValueError(f"passage at position {p} is not reachable from strip {strip}")
    return tuple(edges), strip


def _strip_ends(e1: int, e2: int, lines: list[tuple[int, str]]) -> list[tuple[int, str]]:
    lo, hi = 0, len(lines)
    while lo < hi and lines[lo][0] == e1:
        lo += 1
    while hi > lo and lines[hi - 1][0] == e2:
        hi -= 1
    return lines[lo:hi]


def arc_path(e1: int, e2: int, lines: Sequence[tuple[int, str]]) -> ArcPath:
    """Normalize an arc given by (position, side) passages."""
    if e1 == e2:
        raise ValueError("arc endpoints must differ")
    cur = list(lines)
    while True:
        cur = _strip_ends(e1, e2, cur)
        red: list[tuple[int, str]] = []
        for x in cur:
            if red and red[-1] == x:
                red.pop()
            else:
                red.append(x)
        if red == cur:
            break
        cur = red
    if cur:
        first = cur[0][0]
        if first == e1 + 1:
            start = e1
        elif first == e1 - 1:
            start = e1 - 1
        else:
            raise ValueError(f"first passage at {first} is not next to endpoint {e1}")
    else:
        start = min(e1, e2)
    edges, end = _edges_from_lines(cur, start)
    if end not in (e2 - 1, e2):
        raise ValueError(f"arc does not arrive next to endpoint {e2}")
    if not cur and abs(e1 - e2) != 1:
        raise ValueError("an arc without passages must join adjacent points")
    return ArcPath(e1, e2, edges)


def _start_strip(a: ArcPath) -> int:
    return wk.start_strip(a.edges) if a.edges else min(a.e1, a.e2)


def _end_strip(a: ArcPath) -> int:
    return wk.check_path(a.edges) if a.edges else min(a.e1, a.e2)


def boundary_walk(a: ArcPath) -> wk.Walk:
    """Clockwise boundary of a thin neighbourhood of the arc."""
    edges = list(a.edges)
    walk = edges + _turn(a.e2, _end_strip(a)) + list(wk.reverse(edges)) + _turn(a.e1, _start_strip(a))
    return wk.reduce_closed(walk)


def _turn_points(w: wk.Walk) -> list[tuple[int, int]]:
    """(index, point) for each clockwise turn around a point."""
    out = []
    m = len(w)
    for k in range(m):
        p1, s1, d1 = w[k]
        p2, s2, d2 = w[(k + 1) % m]
        if p1 == p2 and (s1, d1, s2, d2) in (("A", 1, "B", -1), ("B", -1, "A", 1)):
            out.append((k, p1))
    return out


def arc_from_boundary(w: wk.Walk) -> ArcPath:
    """Recover the arc whose neighbourhood boundary is w (either orientation)."""
    winding: dict[int, int] = {}
    for x in wk.to_free(w):
        winding[abs(x)] = winding.get(abs(x), 0) + (1 if x > 0 else -1)
    ends = sorted(p for p, e in winding.items() if e)
    if len(ends) != 2:
        raise ValueError("curve does not enclose exactly two points")
    target = wk.canonical_closed(w)
    for cand in (tuple(w), wk.reverse(w)):
        m = len(cand)
        turns = [t for t in _turn_points(cand) if t[1] in ends]
        for k1, e1 in turns:
            for k2, e2 in turns:
                if e1 == e2:
                    continue
                body = [cand[(k1 + 2 + t) % m] for t in range((k2 - k1 - 2) % m)]
                try:
                    arc = arc_path(e1, e2, [(p, s) for p, s, _ in body])
                except ValueError:
                    continue
                if wk.canonical_closed(boundary_walk(arc)) == target:
                    return arc
    raise ValueError("curve is not the boundary of an arc between two points")


def envelope_walk(members: Iterable[int], upper: bool = True) -> wk.Walk:
    """Boundary of a disc holding the members, joined above (or below) the axis."""
    ms = sorted(set(members))
    if not ms:
        raise ValueError("empty member set")
    first, last = ms[0], ms[-1]
    if first == last:
        return ((first, "A", 1), (first, "B", -1))
    inside = set(ms)
    if upper:
        top = [(p, "A", 1) for p in range(first + 1, last)]
        bottom = [(p, "B" if p in inside else "A", -1) for p in range(last - 1, first, -1)]
    else:
        top = [(p, "A" if p in inside else "B", 1) for p in range(first + 1, last)]
        bottom = [(p, "B", -1) for p in range(last - 1, first, -1)]
    walk = top + _turn(last, last - 1) + bottom + _turn(first, first)
    return wk.reduce_closed(walk)


# ---------------------------------------------------------------- disk model


class DiskModel:
    """Conversions between label passage words and position walks."""

    def __init__(self, disk: MarkedDisk | None = None) -> None:
        self.disk = disk or canonical_configuration()
        self.n = self.disk.n

    # conversions
    def arc(self, w: PassageWord) -> ArcPath:
        if w.kind != "arc":
            raise ValueError("expected an arc")
        e1, e2 = (self.disk.pos(x) for x in w.endpoints)
        for x in (e1, e2):
            if not self.disk.is_branch(x):
                raise ValueError(f"arc endpoint {self.disk.label(x)} is not a branch label")
        return arc_path(e1, e2, [(self.disk.pos(lab), s) for lab, s in w.passages])

    def curve(self, w: PassageWord) -> wk.Walk:
        if w.kind != "curve":
            raise ValueError("expected a curve")
        lines = [(self.disk.pos(lab), s) for lab, s in w.passages]
        if not lines:
            raise ValueError("empty curve")
        for d0 in (1, -1):
            strip = lines[0][0] - 1 if d0 > 0 else lines[0][0]
            try:
                edges, end = _edges_from_lines(lines, strip)
            except ValueError:
                continue
            if end == strip:
                walk = wk.reduce_closed(edges)
                if not walk:
                    raise ValueError("curve is null-homotopic")
                return walk
        raise ValueError("passages do not close up")

    def walk(self, w: PassageWord) -> wk.Walk:
        return boundary_walk(self.arc(w)) if w.kind == "arc" else self.curve(w)

    def word_from_arc(self, a: ArcPath) -> PassageWord:
        lab = self.disk.label
        return PassageWord("arc", tuple((lab(p), s) for p, s, _ in a.edges), (lab(a.e1), lab(a.e2)))

    def word_from_walk(self, w: wk.Walk) -> PassageWord:
        w = wk.canonical_closed(w)
        return PassageWord("curve", tuple((self.disk.label(p), s) for p, s, _ in w))

    # invariants
    def coords(self, w: PassageWord | wk.Walk | ArcPath) -> tuple[int, ...]:
        if isinstance(w, PassageWord):
            w = self.walk(w)
        elif isinstance(w, ArcPath):
            w = boundary_walk(w)
        return wk.coords_from_walks([w], self.n)

    def reduce(self, w: PassageWord) -> PassageWord:
        if w.kind == "arc":
            return self.word_from_arc(self.arc(w))
        return self.word_from_walk(self.curve(w))

    def isotopic(self, a: PassageWord, b: PassageWord) -> bool:
        if a.kind != b.kind:
            raise ValueError("cannot compare an arc with a curve")
        if a.kind == "arc" and set(a.endpoints) != set(b.endpoints):
            return False
        return self.coords(a) == self.coords(b)

    def enclosed(self, w: PassageWord | wk.Walk) -> frozenset[int]:
        """Positions with nonzero winding of the curve (or arc boundary)."""
        walk = self.walk(w) if isinstance(w, PassageWord) else w
        word = wk.to_free(walk)
        total: dict[int, int] = {}
        for x in word:
            total[abs(x)] = total.get(abs(x), 0) + (1 if x > 0 else -1)
        return frozenset(p for p, e in total.items() if e)

    def branch_winding_parity(self, w: PassageWord | wk.Walk) -> int:
        walk = self.walk(w) if isinstance(w, PassageWord) else w
        odd = 0
        for x in wk.to_free(walk):
            if self.disk.is_branch(abs(x)):
                odd ^= 1
        return odd

    # braid action
    def act_walk(self, b: BraidWord, w: wk.Walk) -> wk.Walk:
        w = wk.reduce_closed(w)
        if len(w) == 2:
            # peripheral curves are invisible to coordinates; follow the point
            q = b.permutation()[w[0][0] - 1] + 1
            return ((q, "A", 1), (q, "B", -1))
        c = dynnikov.act_values(b.letters, self.n, wk.coords_from_walks([w], self.n))
        comps = wk.walks_from_coords(c, self.n)
        if len(comps) != 1:
            raise ValueError("image is not a single curve")
        return comps[0]

    def act(self, b: BraidWord, w: PassageWord) -> PassageWord:
        img = self.act_walk(b, self.walk(w))
        if w.kind == "arc":
            return self.word_from_arc(arc_from_boundary(img))
        return self.word_from_walk(img)

    def act_arc(self, b: BraidWord, a: ArcPath) -> ArcPath:
        return arc_from_boundary(self.act_walk(b, boundary_walk(a)))

    # envelopes
    def envelope(self, members: Iterable[str]) -> PassageWord:
        return self.word_from_walk(self.envelope_walk(members))

    def envelope_walk(self, members: Iterable[str]) -> wk.Walk:
        s = set(members)
        universe = set(self.disk.s0)
        if not s or s == universe or not s <= universe:
            raise ValueError("envelope set must be a nonempty proper subset of S0")
        if OUTER in s:
            return envelope_walk([self.disk.pos(x) for x in universe - s], upper=False)
        return envelope_walk([self.disk.pos(x) for x in s], upper=True)

    # twist compilation
    def halftwist_conjugator(self, a: ArcPath) -> tuple[BraidWord, int]:
        """(Phi, k) with Phi carrying the arc onto the segment [k, k+1]."""
        letters: list[int] = []
        cur = a
        while cur.edges:
            near = {min(cur.edges[-1][0], cur.e2), min(cur.edges[0][0], cur.e1)}
            best = None
            for g in self._letters_near(near):
                img = self.act_arc(BraidWord(self.n, (g,)), cur)
                if len(img.edges) < len(cur.edges) and (best is None or len(img.edges) < len(best[1].edges)):
                    best = (g, img)
            if best is None:
                for g in self._letters_near(range(1, self.n)):
                    img = self.act_arc(BraidWord(self.n, (g,)), cur)
                    if len(img.edges) < len(cur.edges):
                        best = (g, img)
                        break
            if best is None:
                raise RuntimeError("arc straightening made no progress")
            letters.append(best[0])
            cur = best[1]
        phi = BraidWord(self.n, tuple(letters))
        k = min(cur.e1, cur.e2)
        if self.coords(self.act_arc(phi, a)) != self.coords(ArcPath(k, k + 1, ())):
            raise RuntimeError("straightening braid failed verification")
        return phi, k

    @staticmethod
    def _letters_near(gens: Iterable[int]) -> list[int]:
        out = []
        for i in sorted(gens):
            out.extend((i, -i))
        return out

    def halftwist_word(self, a: ArcPath | PassageWord, direction: int = 1) -> BraidWord:
        if isinstance(a, PassageWord):
            a = self.arc(a)
        phi, k = self.halftwist_conjugator(a)
        return phi * BraidWord(self.n, (k if direction > 0 else -k,)) * phi.inverse()

    def curvetwist_conjugator(self, w: wk.Walk) -> tuple[BraidWord, int, int]:
        """(Phi, lo, hi) with Phi carrying the curve to the round curve about lo..hi."""
        target_members = sorted(self.enclosed(w))
        for upper, sign in ((True, 1), (False, -1)):
            if wk.canonical_closed(envelope_walk(target_members, upper)) != wk.canonical_closed(w):
                continue
            first = target_members[0]
            letters = []
            for j, m in enumerate(target_members[1:], start=1):
                for x in range(m, first + j, -1):
                    letters.append(sign * (x - 1))
            phi = BraidWord(self.n, tuple(letters))
            lo, hi = first, first + len(target_members) - 1
            if wk.coords_from_walks([self.act_walk(phi, w)], self.n) == wk.coords_from_walks(
                [envelope_walk(range(lo, hi + 1))], self.n
            ):
                return phi, lo, hi
        return self._greedy_curve(w)

    def _greedy_curve(self, w: wk.Walk) -> tuple[BraidWord, int, int]:
        letters: list[int] = []
        cur = w
        k = len(self.enclosed(w))
        while True:
            ms = sorted(self.enclosed(cur))
            if ms[-1] - ms[0] + 1 == k and wk.canonical_closed(cur) == wk.canonical_closed(envelope_walk(ms)):
                phi = BraidWord(self.n, tuple(letters))
                return phi, ms[0], ms[-1]
            best = None
            for i in range(1, self.n):
                for g in (i, -i):
                    img = self.act_walk(BraidWord(self.n, (g,)), cur)
                    if len(img) < len(cur) and (best is None or len(img) < len(best[1])):
                        best = (g, img)
            if best is None:
                raise RuntimeError("curve simplification made no progress")
            letters.append(best[0])
            cur = best[1]

    def curvetwist_word(self, w: PassageWord | wk.Walk, direction: int = 1) -> BraidWord:
        walk = self.walk(w) if isinstance(w, PassageWord) else w
        phi, lo, hi = self.curvetwist_conjugator(walk)
        t = full_twist(self.n, lo, hi) if lo < hi else BraidWord.identity(self.n)
        if direction < 0:
            t = t.inverse()
        return phi * t * phi.inverse()

    def apply_halftwist(self, support: PassageWord, direction: int, target: PassageWord) -> PassageWord:
        return self.act(self.halftwist_word(support, direction), target)

    def apply_curvetwist(self, support: PassageWord, direction: int, target: PassageWord) -> PassageWord:
        return self.act(self.curvetwist_word(support, direction), target)


@lru_cache(maxsize=1)
def default_model() -> DiskModel:
    return DiskModel(canonical_configuration())


def upper_envelope(members: Iterable[str], model: DiskModel | None = None) -> PassageWord:
    return (model or default_model()).envelope(members)


def reduce(w: PassageWord, model: DiskModel | None = None) -> PassageWord:
    return (model or default_model()).reduce(w)


def isotopic(a: PassageWord, b: PassageWord, model: DiskModel | None = None) -> bool:
    return (model or default_model()).isotopic(a, b)


# ---------------------------------------------------------------- fixtures


def fixture_path(directory: str | Path | None = None) -> Path:
    if directory is not None:
        return Path(directory) / "fixtures.jsonl"
    return Path(str(resources.files("twistlab") / "data" / "fixtures.jsonl"))


def load_fixtures(directory: str | Path | None = None) -> dict[str, PassageWord]:
    out: dict[str, PassageWord] = {}
    with open(fixture_path(directory), encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            name = rec["name"]
            if name in out:
                raise ValueError(f"duplicate fixture {name!r}")
            out[name] = PassageWord.from_record(rec)
    return out


def figure_fixtures(directory: str | Path | None = None) -> dict[str, PassageWord]:
    return load_fixtures(directory)
