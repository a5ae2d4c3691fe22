"""Certificates that phi lies in the subgroups generated by x1 and x2.

A certificate is a word in the factors of a tuple (signed 1-based indices)
together with a derivation tree that rebuilds the word.  Every tree node
makes a claim about the base surface and about capped homology, and both are
checked exactly when the node is built and again on replay:

* generator and chain nodes: the base braid of the word equals the claimed
  half-twist (word problem in B43);
* permutation nodes: the chain braid carries c(S) onto c(S') step by step
  (lamination coordinates);
* sum nodes: the side conditions hold and the loops of c(S) and c(S') cut at
  s multiply to the loop of c(S-bar) (free group of the sphere);
* every node: the homology matrix of its word equals the transvection along
  the lift of its claimed curve.

Single lifts of envelope twists are not lifts of base mapping classes, so a
word containing them has no base image of its own; the base level is the
chain of node claims above, closed by the identity T_{c(S_phi)} = H_phi^2.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from . import intlinalg as la
from .braid import dynnikov
from .braid import freegroup as fg
from .braid.word import BraidWord, free_reduce
from .cover import matrix_product
from .factorization import (
    MAP_17_16,
    PHI,
    FactorTuple,
    TwistRef,
    arc,
    curve,
    resolver,
    partial_twist,
    structurally_equal,
    x1_canonical,
    x2_canonical,
)
from .surface import PassageWord

CERT_SCHEMA = "twistlab.certificate/1"
REPORT_SCHEMA = "twistlab.subgroup-report/1"
SCAN_SCHEMA = "twistlab.scan/1"
CLOSURE_SCHEMA = "twistlab.closure/1"

ALPHA = 1
Z_POS = (12, 18, 24, 30, 36, 42, 43, 44)
OUTER_POS = 44
D0 = tuple(p for p in range(2, 44) if p not in Z_POS)
SPLIT = 64

Word = tuple[int, ...]


class CertificateError(RuntimeError):
    """A derivation step failed one of its exact checks."""


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def conjugate(w: Sequence[int], g: Sequence[int], e: int = 1) -> Word:
    """g^e w g^-e as a letter sequence."""
    g = tuple(g) if e > 0 else inverse(g)
    return g + tuple(w) + inverse(g)


def _digest(obj: object) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Certificate:
    """target: {"kind": "arc", "name"} or {"kind": "envelope", "set": positions}."""

    target: dict
    word: Word
    derivation: dict = field(compare=False)
    checks: dict = field(default_factory=dict, compare=False)

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def members(self) -> tuple[int, ...]:
        if self.target.get("kind") != "envelope":
            raise ValueError("certificate target is not an envelope")
        return tuple(self.target["set"])

    def to_record(self) -> dict:
        return {
            "schema": CERT_SCHEMA,
            "target": self.target,
            "length": self.length,
            "word": list(self.word),
            "word_sha256": _digest(list(self.word)),
            "derivation": self.derivation,
            "checks": self.checks,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_record(cls, rec: dict) -> "Certificate":
        if rec.get("schema") != CERT_SCHEMA:
            raise ValueError(f"not a certificate record: {rec.get('schema')!r}")
        word = tuple(int(x) for x in rec["word"])
        if rec.get("length") != len(word):
            raise ValueError("recorded length does not match the word")
        return cls(rec["target"], word, rec["derivation"], rec.get("checks", {}))

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_record(json.loads(text))


# ---------------------------------------------------------------- engine


class Lab:
    """Exact evaluation of words in the factors of one tuple."""

    def __init__(self, t: FactorTuple | None = None, fixtures_dir: str | Path | None = None) -> None:
        self.tuple = t if t is not None else x2_canonical()
        if self.tuple.ambient != MAP_17_16:
            raise ValueError("certificates live in the Map17,16 tuples")
        self.res = resolver(MAP_17_16, None if fixtures_dir is None else str(fixtures_dir))
        self.model = self.res.model
        self.cover = self.res.cover
        self.disk = self.model.disk
        self.rank = self.cover.rank
        self._index: dict[TwistRef, int] = {}
        for k, ref in enumerate(self.tuple.factors, 1):
            self._index.setdefault(ref, k)
        self._braids: dict[int, BraidWord] = {}
        self._mats: dict[int, la.Matrix] = {}
        self._inv_mats: dict[int, la.Matrix] = {}
        self._envelope_mats: dict[tuple[int, ...], la.Matrix] = {}
        self._chain: dict[int, Word] = {}
        self._chain_mats: dict[int, la.Matrix] = {}
        self._chain_braids: dict[int, BraidWord] = {}

    # generators
    def index(self, ref: TwistRef) -> int:
        try:
            return self._index[ref]
        except KeyError:
            raise KeyError(f"{ref.label()} is not a factor of the tuple") from None

    def ref(self, k: int) -> TwistRef:
        if not 1 <= abs(k) <= len(self.tuple):
            raise IndexError(f"generator index {k} out of range")
        return self.tuple[abs(k) - 1]

    def letter_braid(self, k: int) -> BraidWord:
        i = abs(k)
        if i not in self._braids:
            ref = self.ref(i)
            if ref.variant != "arc":
                raise ValueError(f"{ref.label()} is not the lift of a base braid")
            self._braids[i] = self.res.base_word(ref)
        b = self._braids[i]
        return b if k > 0 else b.inverse()

    def letter_matrix(self, k: int) -> la.Matrix:
        i = abs(k)
        if i not in self._mats:
            self._mats[i] = self.res.matrix(self.ref(i))
            self._inv_mats[i] = la.inverse_unimodular(self._mats[i])
        return self._mats[i] if k > 0 else self._inv_mats[i]

    def braid(self, word: Iterable[int]) -> BraidWord:
        """Base braid of a word of arc lifts (the lifting map is a homomorphism there)."""
        out = BraidWord.identity(self.model.n)
        for k in word:
            out = out * self.letter_braid(k)
        return out

    def matrix(self, word: Sequence[int]) -> la.Matrix:
        return matrix_product([self.letter_matrix(k) for k in word], self.rank)

    def conj_matrix(self, inner: la.Matrix, g: la.Matrix, e: int = 1) -> la.Matrix:
        """Matrix of g^e w g^-e given the matrices of w and g."""
        gi = la.inverse_unimodular(g)
        first, last = (g, gi) if e > 0 else (gi, g)
        return matrix_product([first, inner, last], self.rank)

    # curves
    def labels(self, members: Iterable[int]) -> list[str]:
        return [self.disk.s0[p - 1] for p in sorted(members)]

    def envelope_walk(self, members: Iterable[int]):
        return self.model.envelope_walk(self.labels(members))

    def envelope_matrix(self, members: Iterable[int]) -> la.Matrix:
        key = tuple(sorted(members))
        if key not in self._envelope_mats:
            lc = self.cover.lift_walk(self.envelope_walk(key))
            if lc.components != 2:
                raise CertificateError(f"envelope {key} has a connected lift")
            self._envelope_mats[key] = self.cover.transvection(lc.plus)
        return self._envelope_mats[key]

    def envelope_coords(self, members: Iterable[int]) -> tuple[int, ...]:
        return self.model.coords(self.envelope_walk(members))

    # the D0 chain
    def chain_arc(self, m: int) -> PassageWord:
        """Arc from D0[m-1] to D0[m] through the upper half plane (m = 1..34)."""
        if not 1 <= m < len(D0):
            raise IndexError(f"chain generator {m} out of range")
        a, b = D0[m - 1], D0[m]
        above = tuple((self.disk.label(p), "A") for p in range(a + 1, b))
        return PassageWord("arc", above, (self.disk.label(a), self.disk.label(b)))

    def chain_braid(self, m: int) -> BraidWord:
        if m not in self._chain_braids:
            self._chain_braids[m] = self.model.halftwist_word(self.chain_arc(m))
        return self._chain_braids[m]

    def chain_word(self, m: int) -> Word:
        if m not in self._chain:
            self._chain[m] = _chain_lift(self, m)
        return self._chain[m]

    def chain_matrix(self, m: int) -> la.Matrix:
        if m not in self._chain_mats:
            self._chain_mats[m] = self.matrix(self.chain_word(m))
        return self._chain_mats[m]

    def halftwist_equal(self, word: Sequence[int], target: PassageWord) -> bool:
        return dynnikov.equal(self.braid(word), self.model.halftwist_word(target))


@lru_cache(maxsize=4)
def lab(fixtures_dir: str | None = None) -> Lab:
    return Lab(x2_canonical(), fixtures_dir)


def _tree_arc(lab_: Lab, i: int, j: int) -> PassageWord:
    """Arc from alpha~1 to q~i,j above every point between them."""
    end = lab_.disk.pos(f"q~{i},{j}")
    above = tuple((lab_.disk.label(p), "A") for p in range(lab_.disk.pos("alpha~1") + 1, end))
    return PassageWord("arc", above, ("alpha~1", f"q~{i},{j}"))


def _tree_word(lab_: Lab, i: int, j: int) -> tuple[Word, int]:
    """(word, exponent) with the zeta_i,j lift conjugated by taubar_{j-1}..taubar_1."""
    z = lab_.index(arc(f"zeta_{i},{j}"))
    g = tuple(lab_.index(arc(f"taubar_{k}")) for k in range(j - 1, 0, -1))
    target = _tree_arc(lab_, i, j)
    for e in (1, -1):
        w = conjugate((z,), g, e)
        if lab_.halftwist_equal(w, target):
            return w, e
    raise CertificateError(f"no taubar conjugate of zeta_{i},{j} lifts the tree arc")


def _chain_lift(lab_: Lab, m: int) -> Word:
    """Word in tree generators lifting the chain half-twist m, verified exactly."""
    a, b = D0[m - 1], D0[m]
    target = lab_.chain_arc(m)
    if b <= lab_.disk.pos("alpha~1"):
        k = int(lab_.disk.label(b).split("~")[1])
        w = (lab_.index(arc(f"taubar_{k}")),)
        cands = [w]
    else:
        qb = _qij(lab_, b)
        tb = _tree_word(lab_, *qb)[0]
        if a == lab_.disk.pos("alpha~1"):
            cands = [tb]
        else:
            ta = _tree_word(lab_, *_qij(lab_, a))[0]
            cands = [conjugate(tb, ta, e) for e in (1, -1)] + [conjugate(ta, tb, e) for e in (1, -1)]
    for w in cands:
        if lab_.halftwist_equal(w, target):
            return w
    raise CertificateError(f"chain generator {m} has no lift among the tree conjugates")


def _qij(lab_: Lab, p: int) -> tuple[int, int]:
    i, j = lab_.disk.label(p)[2:].split(",")
    return int(i), int(j)


# ---------------------------------------------------------------- sphere loops


def _boundary_inverse() -> Word:
    return inverse(tuple(range(1, OUTER_POS)))


def envelope_loop(members: Iterable[int]) -> Word:
    """Loop around S through the upper half plane, in the free group of the sphere."""
    out: list[int] = []
    for p in sorted(members):
        out.extend(_boundary_inverse() if p == OUTER_POS else (p,))
    return free_reduce(out)


def _cut_loop(members: Sequence[int], s: int) -> Word:
    """The loop of c(S) opened at s, with the s letter removed."""
    pts = sorted(members)
    k = pts.index(s)
    return envelope_loop(pts[k + 1 :]) + envelope_loop(pts[:k])


def _conjugate_words(u: Sequence[int], v: Sequence[int]) -> bool:
    return fg.cyclic_canonical(u) == fg.cyclic_canonical(v)


def loop_matches_model(lab_: Lab, members: Iterable[int]) -> bool:
    """The modelled curve c(S) is the upper-half-plane loop around S (up to orientation)."""
    from .braid import walks as wk

    w = wk.to_free(lab_.envelope_walk(members))
    x = envelope_loop(members)
    return _conjugate_words(w, x) or _conjugate_words(w, inverse(x))


def side_conditions(inner: Sequence[int], outer: Sequence[int], s: int) -> list[str]:
    """Violated side conditions of a sum of c(S') (inner) and c(S) (outer) at s."""
    bad = []
    sp, so = set(inner), set(outer)
    if sp & so != {s}:
        bad.append("S and S' must share exactly the point s")
    if s in Z_POS:
        bad.append("s must not be a z point")
    if s not in (min(sp), max(sp)):
        bad.append("s must be the least or the greatest point of S'")
    lo, hi = min(sp), max(sp)
    if any(lo <= p <= hi for p in so - {s}):
        bad.append("S must meet [min S', max S'] only in s")
    return bad


# ---------------------------------------------------------------- derivation nodes


@dataclass
class Built:
    word: Word
    matrix: la.Matrix
    members: tuple[int, ...] | None
    checks: list[dict]


def _default_set(i: int) -> tuple[int, ...]:
    return tuple(range(1, 7)) + (Z_POS[i - 1],)


def _claim(checks: list[dict], name: str, level: str, ok: bool) -> None:
    checks.append({"check": name, "level": level, "verdict": bool(ok)})
    if not ok:
        raise CertificateError(f"{name} failed at {level} level")


def _swap_target(cur: set[int], target: set[int]) -> int:
    """A chain generator m whose swap moves one member one step towards the target."""
    cur_d = [1 if p in cur else 0 for p in D0]
    tgt_d = [1 if p in target else 0 for p in D0]
    pc = pt = 0
    for k in range(len(D0) - 1):
        pc += cur_d[k]
        pt += tgt_d[k]
        if cur_d[k] != cur_d[k + 1]:
            # swapping k and k+1 lowers the prefix count at k iff a member sits at k
            if pc > pt and cur_d[k] == 1 or pc < pt and cur_d[k + 1] == 1:
                return k + 1
    raise ValueError("sets with equal D0 counts are already equal")


def gap_profile(members: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Fixed members (alpha, z points) and the D0 member count between consecutive ones.

    A braid supported in D0 fixes c(S) along the boundary of D0, so it keeps the
    number of D0 points in each region of D0 cut by c(S).  For upper envelopes
    those counts are the gap counts returned here; chain braids therefore only
    reach sets with the same profile.
    """
    ms = set(members)
    fixed = tuple(sorted(p for p in ms if p == ALPHA or p in Z_POS))
    bounds = (0, *fixed, OUTER_POS + 1)
    gaps = tuple(sum(1 for p in D0 if p in ms and lo < p < hi) for lo, hi in zip(bounds, bounds[1:]))
    return fixed, gaps


def route(lab_: Lab, source: Sequence[int], target: Sequence[int]) -> list[tuple[int, int]]:
    """Chain half-twists (m, e) carrying c(source) onto c(target), each step verified."""
    src, tgt = set(source), set(target)
    fixed = [ALPHA, *Z_POS]
    if len(src) != len(tgt) or any((p in src) != (p in tgt) for p in fixed):
        raise ValueError("the permutation must fix alpha and every z point")
    if not src <= set(range(1, OUTER_POS + 1)) or not tgt <= set(range(1, OUTER_POS + 1)):
        raise ValueError("sets must consist of positions 1..44")
    if gap_profile(src) != gap_profile(tgt):
        raise CertificateError(
            f"no D0 braid carries c(S) to c(S'): gap profiles {gap_profile(src)[1]} and "
            f"{gap_profile(tgt)[1]} differ, so D0 points would cross member z points")
    cur = set(src)
    coords = lab_.envelope_coords(cur)
    swaps: list[tuple[int, int]] = []
    while cur != tgt:
        m = _swap_target(cur, tgt)
        a, b = D0[m - 1], D0[m]
        nxt = cur ^ {a, b}
        want = lab_.envelope_coords(nxt)
        for e in (1, -1):
            bw = lab_.chain_braid(m) if e > 0 else lab_.chain_braid(m).inverse()
            if dynnikov.act_values(bw.letters, lab_.model.n, coords) == want:
                break
        else:
            raise CertificateError(f"chain generator {m} does not carry c(S) to the swapped envelope")
        swaps.append((m, e))
        cur, coords = nxt, want
    return swaps


def _chain_seq(lab_: Lab, swaps: Sequence[Sequence[int]]) -> tuple[Word, la.Matrix]:
    word: list[int] = []
    mats = []
    for m, e in swaps:
        w = lab_.chain_word(m)
        word.extend(w if e > 0 else inverse(w))
        cm = lab_.chain_matrix(m)
        mats.append(cm if e > 0 else la.inverse_unimodular(cm))
    return tuple(word), matrix_product(mats, lab_.rank)


def realize(lab_: Lab, node: dict, memo: dict[int, Built] | None = None) -> Built:
    """Rebuild and verify a derivation node (construction and replay share this)."""
    memo = {} if memo is None else memo
    if id(node) not in memo:
        memo[id(node)] = _realize(lab_, node, memo)
    return memo[id(node)]


def _realize(lab_: Lab, node: dict, memo: dict[int, Built]) -> Built:
    op = node.get("op")
    checks: list[dict] = []
    if op == "generator":
        k = int(node["index"])
        ref = lab_.ref(k)
        members = tuple(node["set"])
        if ref.variant != "curve" or ref.conjugators:
            raise CertificateError(f"{ref.label()} is not a bare envelope twist")
        _claim(checks, "fixture is the envelope curve", "base-exact",
               lab_.model.coords(lab_.res.fixture(ref.name)) == lab_.envelope_coords(members))
        m = lab_.letter_matrix(k)
        _claim(checks, "transvection of the envelope lift", "homology", m == lab_.envelope_matrix(members))
        return Built((k,), m, members, checks)
    if op == "tree":
        i, j = int(node["i"]), int(node["j"])
        w, _ = _tree_word(lab_, i, j)
        _claim(checks, "tree-arc half-twist", "base-exact", lab_.halftwist_equal(w, _tree_arc(lab_, i, j)))
        m = lab_.matrix(w)
        _claim(checks, "transvection of the arc lift", "homology",
               m == lab_.cover.transvection(lab_.cover.lift_arc(lab_.model.arc(_tree_arc(lab_, i, j)))))
        return Built(w, m, None, checks)
    if op == "taubar":
        k = int(node["k"])
        w = (lab_.index(arc(f"taubar_{k}")),)
        fx = PassageWord("arc", (), (f"alpha~{k + 1}", f"alpha~{k}"))
        _claim(checks, "tree-arc half-twist", "base-exact", lab_.halftwist_equal(w, fx))
        m = lab_.matrix(w)
        _claim(checks, "transvection of the arc lift", "homology",
               m == lab_.cover.transvection(lab_.cover.lift_arc(lab_.model.arc(fx))))
        return Built(w, m, None, checks)
    if op == "permute":
        child = realize(lab_, node["child"], memo)
        members = tuple(node["set"])
        swaps = [tuple(x) for x in node["swaps"]]
        coords = lab_.envelope_coords(child.members)
        for m, e in swaps:
            bw = lab_.chain_braid(m) if e > 0 else lab_.chain_braid(m).inverse()
            coords = dynnikov.act_values(bw.letters, lab_.model.n, coords)
        _claim(checks, "chain braid carries c(S) to c(S')", "base-exact", coords == lab_.envelope_coords(members))
        lw, lm = _chain_seq(lab_, swaps)
        word = conjugate(child.word, lw, -1)
        mat = lab_.conj_matrix(child.matrix, lm, -1)
        _claim(checks, "transvection of the envelope lift", "homology", mat == lab_.envelope_matrix(members))
        return Built(word, mat, members, checks)
    if op == "sum":
        inner, outer = realize(lab_, node["inner"], memo), realize(lab_, node["outer"], memo)
        s = int(node["s"])
        bad = side_conditions(inner.members, outer.members, s)
        _claim(checks, "side conditions", "base-exact", not bad)
        members = tuple(sorted((set(inner.members) | set(outer.members)) - {s}))
        if tuple(node["set"]) != members:
            raise CertificateError("recorded sum set does not match its inputs")
        a, b = _cut_loop(inner.members, s), _cut_loop(outer.members, s)
        x = envelope_loop(members)
        _claim(checks, "loops cut at s compose to c(S-bar)", "base-exact", _conjugate_words(a + b, x))
        _claim(checks, "modelled curves are the upper envelopes", "base-exact",
               all(loop_matches_model(lab_, S) for S in (inner.members, outer.members, members)))
        g, w = (inner, outer) if node["conjugator"] == "inner" else (outer, inner)
        e = int(node["exponent"])
        word = conjugate(w.word, g.word, e)
        mat = lab_.conj_matrix(w.matrix, g.matrix, e)
        _claim(checks, "transvection of the envelope lift", "homology", mat == lab_.envelope_matrix(members))
        return Built(word, mat, members, checks)
    if op == "closure":
        child = realize(lab_, node["child"], memo)
        members = tuple(sorted(set(range(1, OUTER_POS + 1)) - {ALPHA, 2}))
        if child.members != members:
            raise CertificateError("closure needs the envelope of S0 minus alpha and alpha~5")
        phi = lab_.res.fixture("phi")
        h = lab_.model.halftwist_word(phi)
        t = lab_.model.curvetwist_word(lab_.envelope_walk(members))
        _claim(checks, "twist along c(S_phi) is the square of the phi half-twist", "base-exact",
               dynnikov.equal(t, h * h))
        _claim(checks, "c(S_phi) bounds a neighbourhood of the phi arc", "base-exact",
               lab_.model.coords(phi) == lab_.envelope_coords(members))
        m = lab_.cover.transvection(lab_.cover.lift_arc(lab_.model.arc(phi)))
        _claim(checks, "transvection of the phi lift", "homology", child.matrix == m)
        return Built(child.word, child.matrix, None, checks)
    raise CertificateError(f"unknown derivation step {op!r}")


# ---------------------------------------------------------------- envelope operations


def generator_certificate(lab_: Lab, i: int, sign: int = 1) -> tuple[dict, Built]:
    node = {"op": "generator", "index": lab_.index(curve(f"delta_{i}", sign)), "set": list(_default_set(i))}
    return node, realize(lab_, node)


def tree_generators(t: FactorTuple | None = None, fixtures_dir: str | Path | None = None) -> list[Certificate]:
    """Certificates for the 34 tree-arc half-twist lifts generating the lifted D0 braids."""
    lab_ = _lab_for(t, fixtures_dir)
    out = []
    for k in range(1, 5):
        node = {"op": "taubar", "k": k}
        b = realize(lab_, node)
        out.append(Certificate({"kind": "arc", "ends": [f"alpha~{k + 1}", f"alpha~{k}"]}, b.word, node, _summary(b)))
    for i in range(1, 7):
        for j in range(1, 6):
            node = {"op": "tree", "i": i, "j": j}
            b = realize(lab_, node)
            out.append(Certificate({"kind": "arc", "ends": ["alpha~1", f"q~{i},{j}"]}, b.word, node, _summary(b)))
    return out


def _lab_for(t: FactorTuple | None, fixtures_dir: str | Path | None) -> Lab:
    if t is not None and t != x2_canonical():
        raise ValueError("the derivation engine runs on x2_canonical()")
    return lab(None if fixtures_dir is None else str(fixtures_dir))


def _summary(b: Built, memo: dict[int, Built] | None = None) -> dict:
    checks = list(b.checks)
    if memo:
        checks = [c for x in memo.values() for c in x.checks]
    levels: dict[str, bool] = {}
    for c in checks:
        levels[c["level"]] = levels.get(c["level"], True) and c["verdict"]
    return {"levels": levels, "node_checks": len(checks)}


def _envelope_cert(node: dict, b: Built, memo: dict[int, Built] | None = None) -> Certificate:
    return Certificate({"kind": "envelope", "set": list(b.members)}, b.word, node, _summary(b, memo))


def permuted_envelope(c: Certificate, target: Sequence[int], fixtures_dir: str | Path | None = None) -> Certificate:
    """Certificate for c(S') from one for c(S), S' the image of S under a D0 permutation."""
    lab_ = _lab_for(None, fixtures_dir)
    node, memo = _permute_node(lab_, c.derivation, c.members, target, {})
    b = realize(lab_, node, memo)
    return _envelope_cert(node, b)


def _permute_node(lab_: Lab, child: dict, members: Sequence[int], target: Sequence[int],
                  memo: dict[int, Built]) -> tuple[dict, dict[int, Built]]:
    if sorted(members) == sorted(target):
        return child, memo
    swaps = route(lab_, members, target)
    return {"op": "permute", "set": sorted(target), "swaps": [list(x) for x in swaps], "child": child}, memo


def _sum_node(lab_: Lab, inner: dict, outer: dict, s: int, memo: dict[int, Built]) -> dict:
    bi, bo = realize(lab_, inner, memo), realize(lab_, outer, memo)
    bad = side_conditions(bi.members, bo.members, s)
    if bad:
        raise ValueError("; ".join(bad))
    members = sorted((set(bi.members) | set(bo.members)) - {s})
    want = lab_.envelope_matrix(members)
    order = [("inner", bi, bo), ("outer", bo, bi)]
    order.sort(key=lambda x: len(x[1].word))
    for role, g, w in order:
        for e in (1, -1):
            if lab_.conj_matrix(w.matrix, g.matrix, e) == want:
                return {"op": "sum", "s": s, "set": members, "conjugator": role, "exponent": e,
                        "inner": inner, "outer": outer}
    raise CertificateError("no lift pairing of the summands gives the lift of c(S-bar)")


def sum_envelopes(c: Certificate, c2: Certificate, s: int | None = None,
                  fixtures_dir: str | Path | None = None) -> tuple[Certificate, ...]:
    """Certificates for c((S u S') minus s) from those for c(S') (c) and c(S) (c2).

    Returns one certificate per conjugation role (each input taken once as the
    conjugator) whose homology matches; the exponent is resolved per role.
    """
    lab_ = _lab_for(None, fixtures_dir)
    common = set(c.members) & set(c2.members)
    if s is None:
        if len(common) != 1:
            raise ValueError("S and S' must share exactly one point")
        s = next(iter(common))
    memo: dict[int, Built] = {}
    first = _sum_node(lab_, c.derivation, c2.derivation, s, memo)
    out = [first]
    other = "outer" if first["conjugator"] == "inner" else "inner"
    bi, bo = memo[id(c.derivation)], memo[id(c2.derivation)]
    g, w = (bi, bo) if other == "inner" else (bo, bi)
    want = lab_.envelope_matrix(first["set"])
    for e in (1, -1):
        if lab_.conj_matrix(w.matrix, g.matrix, e) == want:
            out.append(dict(first, conjugator=other, exponent=e))
            break
    return tuple(_envelope_cert(n, realize(lab_, n, memo)) for n in out)


# ---------------------------------------------------------------- closure engine


def closure_script_path() -> Path:
    return Path(str(resources.files("twistlab") / "data" / "closure_script.json"))


def load_closure_script(path: str | Path | None = None) -> dict:
    with open(path or closure_script_path(), encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("schema") != CLOSURE_SCHEMA:
        raise ValueError("not a closure script")
    return data


def _script_node(lab_: Lab, step: dict, memo: dict[int, Built], stages: list[dict]) -> dict:
    if step["op"] == "leaf":
        node, b = generator_certificate(lab_, int(step["z"]))
        memo[id(node)] = b
        stages.append(node)
        return node
    parts = []
    for key in ("inner", "outer"):
        child = _script_node(lab_, step[key], memo, stages)
        have = realize(lab_, child, memo).members
        try:
            node, _ = _permute_node(lab_, child, have, step[f"{key}_set"], memo)
        except CertificateError as exc:
            raise CertificateError(
                f"closure stage {len(step['set'])}: permuting the {len(have)}-point {key} set "
                f"{list(have)} onto {step[f'{key}_set']} fails: {exc}") from None
        parts.append(node)
    node = _sum_node(lab_, parts[0], parts[1], int(step["s"]), memo)
    if node["set"] != sorted(step["set"]):
        raise CertificateError("closure script set does not match the sum")
    b = realize(lab_, node, memo)
    _check_shape(b.members)
    stages.append(node)
    return node


SHAPES = (7, 12, 17, 22, 27, 32, 37, 42)


def _check_shape(members: Sequence[int]) -> None:
    k = sum(1 for p in members if p in Z_POS)
    alpha = ALPHA in members
    d0 = sum(1 for p in members if p in D0)
    if len(members) not in SHAPES or len(members) != 5 * k + 2 or alpha != (k % 2 == 1) or d0 != 4 * k + 2 - alpha:
        raise CertificateError(f"set of {len(members)} points is outside the closure shapes")


def closure_walk(fixtures_dir: str | Path | None = None, script: dict | None = None) -> list[Certificate]:
    """Certificates for every node of the scripted walk, in build order."""
    lab_ = _lab_for(None, fixtures_dir)
    script = script or load_closure_script()
    memo: dict[int, Built] = {}
    stages: list[dict] = []
    _script_node(lab_, script["walk"], memo, stages)
    return [_envelope_cert(node, realize(lab_, node, memo)) for node in stages]


def derive_phi(t: FactorTuple | None = None, fixtures_dir: str | Path | None = None,
               script: dict | None = None) -> Certificate:
    """Certificate for the lift of the (alpha, alpha~5) half-twist in the x2 factors."""
    lab_ = _lab_for(t, fixtures_dir)
    script = script or load_closure_script()
    memo: dict[int, Built] = {}
    stages: list[dict] = []
    top = _script_node(lab_, script["final"], memo, stages)
    b = realize(lab_, top, memo)
    s_phi = sorted(set(range(1, OUTER_POS + 1)) - {ALPHA, 2})
    node, _ = _permute_node(lab_, top, b.members, s_phi, memo)
    root = {"op": "closure", "arc": "phi", "child": node}
    built = realize(lab_, root, memo)
    checks = _summary(built, memo)
    checks["stage_sizes"] = sorted({len(realize(lab_, n, memo).members) for n in stages})
    return Certificate({"kind": "arc", "name": "phi"}, built.word, root, checks)


def replay(c: Certificate, fixtures_dir: str | Path | None = None) -> dict:
    """Rebuild the word from the derivation and rerun every node check."""
    lab_ = _lab_for(None, fixtures_dir)
    for k in c.word:
        lab_.ref(k)
    memo: dict[int, Built] = {}
    try:
        b = realize(lab_, c.derivation, memo)
    except CertificateError as exc:
        return {"verdict": False, "error": str(exc)}
    out = _summary(b, memo)
    out["word_matches"] = b.word == tuple(c.word)
    out["verdict"] = out["word_matches"] and all(out["levels"].values())
    return out


# ---------------------------------------------------------------- x1 side


def phi_in_g1(fixtures_dir: str | Path | None = None) -> Certificate:
    """phi = b a b^-1 in the x1 factors, a = phi(taubar_4) and b = taubar_4."""
    t = x1_canonical()
    lab_ = Lab(t, fixtures_dir)
    a = lab_.index(arc("taubar_4").conjugated(PHI))
    b = lab_.index(arc("taubar_4"))
    word = (b, a, -b)
    ba, bb = lab_.braid((a,)), lab_.braid((b,))
    target = lab_.model.halftwist_word(lab_.res.fixture("phi"))
    braid_rel = dynnikov.equal(bb * target * bb, target * bb * target)
    base = dynnikov.equal(lab_.braid(word), target)
    homology = lab_.matrix(word) == lab_.res.matrix(PHI)
    checks = {"levels": {"base": base and braid_rel, "homology": homology},
              "braid_relation": braid_rel, "a": lab_.ref(a).label(), "b": lab_.ref(b).label()}
    c = Certificate({"kind": "arc", "name": "phi"}, word,
                    {"op": "conjugate", "tuple": "x1", "inner": a, "by": b}, checks)
    if not (base and braid_rel and homology):
        raise CertificateError(f"phi_in_g1 failed its checks: {checks['levels']}")
    return c


def subgroup_equal_report(fixtures_dir: str | Path | None = None) -> dict:
    """G1 = G2 report: phi in G2 (derived), phi in G1, and x1 = phi-twist of x2 past the split."""
    x1, x2 = x1_canonical(), x2_canonical()
    twisted = partial_twist(x2, (1, SPLIT), PHI)
    g2 = derive_phi(x2, fixtures_dir)
    g1 = phi_in_g1(fixtures_dir)
    res = resolver(MAP_17_16, None if fixtures_dir is None else str(fixtures_dir))
    h1 = sorted({_digest(res.matrix(r)) for r in x1.factors})
    h2 = sorted({_digest(res.matrix(r)) for r in twisted.factors})
    rep = {
        "schema": REPORT_SCHEMA,
        "split": SPLIT,
        "phi_in_g2": {"word_sha256": _digest(list(g2.word)), "length": g2.length, "replay": replay(g2, fixtures_dir)},
        "phi_in_g1": {"word": list(g1.word), "levels": g1.checks["levels"]},
        "x1_is_twisted_x2": structurally_equal(x1, twisted, fixtures_dir),
        "homology_generators_equal": h1 == h2,
        "x1_sha256": _digest(x1.to_record()),
        "x2_sha256": _digest(x2.to_record()),
    }
    rep["verdict"] = (rep["phi_in_g2"]["replay"]["verdict"] and all(rep["phi_in_g1"]["levels"].values())
                      and rep["x1_is_twisted_x2"] and rep["homology_generators_equal"])
    return rep


# ---------------------------------------------------------------- matching paths


@dataclass(frozen=True)
class Candidate:
    element: Word
    ref: TwistRef
    moves: tuple[tuple[int, int], ...]
    position: int

    @property
    def direct(self) -> bool:
        return len(self.element) == 1


def _monodromy_key(res, ref: TwistRef) -> tuple:
    base = dynnikov.act(res.base_word(ref), dynnikov.LaminationCoords.faithful(res.model.n)).values
    return ref.variant, ref.bare.sign, tuple(base)


def _candidates(t: FactorTuple, budget: int) -> dict[Word, Candidate]:
    start = tuple((k,) for k in range(1, len(t) + 1))
    seen: dict[Word, Candidate] = {}
    for k, (w, r) in enumerate(zip(start, t.factors), 1):
        seen[w] = Candidate(w, r, (), k)
    layer = [(start, t.factors, ())]
    for _ in range(budget):
        nxt = []
        for elems, refs, moves in layer:
            for i in range(1, len(refs)):
                for d in (1, -1):
                    a, b = elems[i - 1], elems[i]
                    ra, rb = refs[i - 1], refs[i]
                    if d > 0:
                        na, nb, qa, qb = free_reduce(a + b + fg.inv(a)), a, rb.conjugated(ra, 1), ra
                    else:
                        na, nb, qa, qb = b, free_reduce(fg.inv(b) + a + b), rb, ra.conjugated(rb, -1)
                    e2 = elems[:i - 1] + (na, nb) + elems[i + 1:]
                    r2 = refs[:i - 1] + (qa, qb) + refs[i + 1:]
                    mv = moves + ((i, d),)
                    for pos, (w, r) in ((i, (na, qa)), (i + 1, (nb, qb))):
                        if w not in seen:
                            seen[w] = Candidate(w, r, mv, pos)
                    nxt.append((e2, r2, mv))
        layer = nxt
    return seen


def matching_path_scan(t: FactorTuple, budget: int = 0, fixtures_dir: str | Path | None = None) -> list[dict]:
    """Pairs of distinct conjugates of free generators, reachable in at most budget
    Hurwitz moves, whose factors have equal monodromy."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if len(t) == 0:
        return []
    res = resolver(t.ambient, None if fixtures_dir is None else str(fixtures_dir))
    groups: dict[tuple, list[Candidate]] = {}
    for c in _candidates(t, budget).values():
        groups.setdefault(_monodromy_key(res, c.ref), []).append(c)
    # a pair is a repeat (two factors), a transport (a moved copy of a factor's
    # monodromy) or a conjugate (a monodromy absent from the tuple)
    factor_keys = {k for k, cs in groups.items() if any(c.direct for c in cs)}
    out = []
    for key, cs in groups.items():
        cs.sort(key=lambda c: (len(c.element), c.element))
        for i, p in enumerate(cs):
            for q in cs[i + 1:]:
                kind = "repeat" if p.direct and q.direct else "transport" if key in factor_keys else "conjugate"
                out.append({
                    "kind": kind,
                    "monodromy": _digest(list(key))[:16],
                    "label": p.ref.bare.label(),
                    "sign": p.ref.bare.sign,
                    "pair": [_cand_record(p), _cand_record(q)],
                })
    out.sort(key=lambda r: (r["kind"], [x["element"] for x in r["pair"]]))
    return out


def _cand_record(c: Candidate) -> dict:
    return {"element": list(c.element), "factor": c.ref.label(), "moves": [list(m) for m in c.moves],
            "position": c.position, "direct": c.direct}
