"""Factor tuples of Dehn twists, Hurwitz calculus and product verification.

A factor is a TwistRef: a named arc lift, one lift of a named curve, or an
abstract genus-2 generator, possibly conjugated.  ``conjugators`` lists
(g, e) pairs outermost first, so ((g, 1),) means g t g^-1.  Products are
written left to right: in ``a . b`` the twist a is applied first.

Ambients:
  Map17,16  the genus-17 fiber; base level in B43, homology in Z^34.
  Map2      words in tau_1..tau_5; base level in B6, homology in Z^4.
  B5        half-twists in the 5-point disk (base level only).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from . import intlinalg as la
from .braid import dynnikov
from .braid.word import BraidWord, full_twist
from .cover import build_cover, genus2_model, matrix_product
from .surface import DiskModel, MarkedDisk, PassageWord, default_model, load_fixtures

TUPLE_SCHEMA = "twistlab.factors/1"
MOVES_SCHEMA = "twistlab.moves/1"

MAP_17_16 = "Map17,16"
MAP_2 = "Map2"
B5 = "B5"
AMBIENTS = (MAP_17_16, MAP_2, B5)


# ---------------------------------------------------------------- twist references


@dataclass(frozen=True)
class TwistRef:
    variant: str
    name: str
    sign: int = 0
    conjugators: tuple[tuple["TwistRef", int], ...] = ()

    def __post_init__(self) -> None:
        if self.variant not in ("arc", "curve", "gen"):
            raise ValueError(f"unknown twist variant {self.variant!r}")
        if self.variant == "curve" and self.sign not in (1, -1):
            raise ValueError("a curve lift needs sign +1 or -1")
        if self.variant != "curve" and self.sign != 0:
            raise ValueError("only curve lifts carry a sign")
        for _, e in self.conjugators:
            if e not in (1, -1):
                raise ValueError("conjugator exponents must be +1 or -1")

    @property
    def bare(self) -> "TwistRef":
        return replace(self, conjugators=())

    def conjugated(self, g: "TwistRef", e: int = 1) -> "TwistRef":
        """g^e . self . g^-e, cancelling against an opposite outermost conjugator."""
        if self.conjugators and self.conjugators[0] == (g, -e):
            return replace(self, conjugators=self.conjugators[1:])
        return replace(self, conjugators=((g, e),) + self.conjugators)

    def label(self) -> str:
        core = self.name + ({1: "+", -1: "-", 0: ""}[self.sign])
        for g, e in reversed(self.conjugators):
            core = f"{g.label()}{'' if e > 0 else '^-1'}({core})"
        return core

    def to_record(self) -> dict:
        rec: dict = {"variant": self.variant, "name": self.name}
        if self.sign:
            rec["sign"] = self.sign
        rec["conj"] = [{"by": g.to_record(), "exp": e} for g, e in self.conjugators]
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "TwistRef":
        conj = tuple((cls.from_record(c["by"]), int(c["exp"])) for c in rec.get("conj", ()))
        return cls(rec["variant"], rec["name"], int(rec.get("sign", 0)), conj)


def arc(name: str) -> TwistRef:
    return TwistRef("arc", name)


def curve(name: str, sign: int) -> TwistRef:
    return TwistRef("curve", name, sign)


def gen(k: int) -> TwistRef:
    return TwistRef("gen", f"tau_{k}")


PHI = arc("phi")


@dataclass(frozen=True)
class Block:
    name: str
    start: int
    stop: int

    def to_record(self) -> dict:
        return {"name": self.name, "first": self.start + 1, "last": self.stop}


@dataclass(frozen=True)
class FactorTuple:
    ambient: str
    factors: tuple[TwistRef, ...]
    blocks: tuple[Block, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.ambient not in AMBIENTS:
            raise ValueError(f"unknown ambient {self.ambient!r}")

    def __len__(self) -> int:
        return len(self.factors)

    def __getitem__(self, k: int) -> TwistRef:
        return self.factors[k]

    def block(self, name: str) -> "FactorTuple":
        b = next((b for b in self.blocks if b.name == name), None)
        if b is None:
            raise KeyError(f"no block named {name!r}")
        return FactorTuple(self.ambient, self.factors[b.start : b.stop])

    def to_record(self) -> dict:
        return {
            "schema": TUPLE_SCHEMA,
            "ambient": self.ambient,
            "length": len(self.factors),
            "blocks": [b.to_record() for b in self.blocks],
            "factors": [f.to_record() for f in self.factors],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_record(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_record(cls, rec: dict) -> "FactorTuple":
        if rec.get("schema") != TUPLE_SCHEMA:
            raise ValueError(f"unsupported tuple schema {rec.get('schema')!r}")
        factors = tuple(TwistRef.from_record(f) for f in rec["factors"])
        if "length" in rec and rec["length"] != len(factors):
            raise ValueError("recorded length does not match the factor list")
        blocks = tuple(Block(b["name"], b["first"] - 1, b["last"]) for b in rec.get("blocks", ()))
        return cls(rec["ambient"], factors, blocks)

    @classmethod
    def loads(cls, text: str) -> "FactorTuple":
        return cls.from_record(json.loads(text))


# ---------------------------------------------------------------- canonical tuples


def _taubar_run(last: TwistRef) -> list[TwistRef]:
    return [arc("taubar_1"), arc("taubar_2"), arc("taubar_3"), last] * 5


def _block_factors(i: int, primed: bool) -> tuple[list[TwistRef], list[Block]]:
    def p(t: TwistRef) -> TwistRef:
        return t.conjugated(PHI) if primed else t

    q = [p(arc(f"zeta_{i},{j}")) for j in range(1, 6)] + [p(arc(f"xi_{i},{j}")) for j in range(1, 6)]
    z = [curve(f"delta_{i}", 1), curve(f"delta_{i}", -1)]
    r = _taubar_run(p(arc("taubar_4")))
    return q + z + r, [Block(f"q{i}", 0, 10), Block(f"z{i}", 10, 12), Block(f"r{i}", 12, 32)]


def _assemble(primed_blocks: int) -> FactorTuple:
    factors: list[TwistRef] = []
    blocks: list[Block] = []
    for i in range(1, 7):
        fs, bs = _block_factors(i, i <= primed_blocks)
        off = len(factors)
        blocks.extend(Block(b.name, b.start + off, b.stop + off) for b in bs)
        factors.extend(fs)
    for i in (7, 8):
        blocks.append(Block(f"z{i}", len(factors), len(factors) + 2))
        factors.extend([curve(f"delta_{i}", 1), curve(f"delta_{i}", -1)])
    return FactorTuple(MAP_17_16, tuple(factors), tuple(blocks))


def x2_canonical() -> FactorTuple:
    return _assemble(0)


def x1_canonical() -> FactorTuple:
    """The x2 tuple with zeta, xi and taubar_4 primed in the first two blocks."""
    return _assemble(2)


def genus2_factorizations() -> tuple[FactorTuple, FactorTuple]:
    """(first, second): the 120-factor genus-2 tuples of X1 and X2."""
    first = [gen(k) for k in (1, 2, 3, 4, 5, 5, 4, 3, 2, 1)] * 12
    second = [gen(k) for k in (1, 2, 3, 4)] * 30
    return FactorTuple(MAP_2, tuple(first)), FactorTuple(MAP_2, tuple(second))


def x1_genus2_twisted() -> FactorTuple:
    tau_prime = gen(4).conjugated(gen(5))
    fs = [gen(1), gen(2), gen(3), tau_prime] * 10 + [gen(1), gen(2), gen(3), gen(4)] * 20
    return FactorTuple(MAP_2, tuple(fs))


def moishezon_tuples() -> tuple[FactorTuple, FactorTuple]:
    """(prod_{i<j} s_ij^2, (s12 s23 s34 s45)^5) in B5."""
    quad = [arc(f"sigma_{i},{j}") for i in range(1, 5) for j in range(i + 1, 6) for _ in range(2)]
    five = [arc(f"sigma_{i},{i + 1}") for i in range(1, 5)] * 5
    return FactorTuple(B5, tuple(quad)), FactorTuple(B5, tuple(five))


# ---------------------------------------------------------------- tuple calculus


def hurwitz_move(t: FactorTuple, i: int, direction: int = 1) -> FactorTuple:
    """Elementary move at 1-based index i.

    +1: (t_i, t_i+1) -> (t_i t_i+1 t_i^-1, t_i);  -1: (t_i, t_i+1) -> (t_i+1, t_i+1^-1 t_i t_i+1).
    """
    if not 1 <= i < len(t):
        raise IndexError(f"move index {i} out of range for a tuple of length {len(t)}")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    fs = list(t.factors)
    a, b = fs[i - 1], fs[i]
    if direction > 0:
        fs[i - 1], fs[i] = b.conjugated(a, 1), a
    else:
        fs[i - 1], fs[i] = b, a.conjugated(b, -1)
    return FactorTuple(t.ambient, tuple(fs), t.blocks)


def apply_moves(t: FactorTuple, moves: Iterable[tuple[int, int]]) -> FactorTuple:
    for i, d in moves:
        t = hurwitz_move(t, i, d)
    return t


def global_conjugate(t: FactorTuple, g: TwistRef | None, e: int = 1) -> FactorTuple:
    return partial_twist(t, (1, len(t)), g, e)


def partial_twist(t: FactorTuple, span: tuple[int, int] | None, g: TwistRef | None, e: int = 1) -> FactorTuple:
    """Conjugate factors first..last (1-based, inclusive) by g^e; None means the identity."""
    if span is None or g is None:
        return t
    first, last = span
    if first > last:
        return t
    if not (1 <= first and last <= len(t)):
        raise IndexError(f"span {span} is outside 1..{len(t)}")
    fs = [f.conjugated(g, e) if first - 1 <= k < last else f for k, f in enumerate(t.factors)]
    return FactorTuple(t.ambient, tuple(fs), t.blocks)


def read_moves(path: str | Path) -> list[tuple[int, int]]:
    moves = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != f"# {MOVES_SCHEMA}":
            raise ValueError(f"move script must start with '# {MOVES_SCHEMA}'")
        for n, line in enumerate(fh, start=2):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2 or parts[1] not in ("+1", "-1", "1"):
                raise ValueError(f"line {n}: expected '<index> <+1|-1>'")
            moves.append((int(parts[0]), int(parts[1])))
    return moves


def write_moves(moves: Sequence[tuple[int, int]]) -> str:
    return f"# {MOVES_SCHEMA}\n" + "".join(f"{i} {d:+d}\n" for i, d in moves)


def bundled_moves_path() -> Path:
    return Path(str(resources.files("twistlab") / "data" / "moishezon_moves.txt"))


# ---------------------------------------------------------------- resolution


@dataclass(frozen=True)
class BaseProduct:
    """A base mapping class, compared exactly by its faithful Dynnikov image."""

    word: BraidWord
    coords: tuple[int, ...]

    @classmethod
    def of(cls, w: BraidWord) -> "BaseProduct":
        c = dynnikov.act(w, dynnikov.LaminationCoords.faithful(w.n))
        return cls(w, tuple(c.values))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BaseProduct) and self.word.n == other.word.n and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.word.n, self.coords))


def _b5_model() -> DiskModel:
    labels = tuple(f"alpha~{k}" for k in range(5, 0, -1))
    return DiskModel(MarkedDisk(labels, (), labels))


def _b5_fixtures() -> dict[str, PassageWord]:
    """sigma_i,j joins alpha~i to alpha~j below the points between them."""
    out = {}
    for i in range(1, 5):
        for j in range(i + 1, 6):
            below = tuple((f"alpha~{k}", "B") for k in range(i + 1, j))
            out[f"sigma_{i},{j}"] = PassageWord("arc", below, (f"alpha~{i}", f"alpha~{j}"))
    return out


class Resolver:
    """Base words and homology matrices of twist references in one ambient."""

    def __init__(self, ambient: str, fixtures_dir: str | Path | None = None) -> None:
        self.ambient = ambient
        if ambient == MAP_17_16:
            self.model = default_model()
            self.fixtures = load_fixtures(fixtures_dir)
            self.cover = build_cover()
        elif ambient == B5:
            self.model = _b5_model()
            self.fixtures = _b5_fixtures()
            self.cover = None
        elif ambient == MAP_2:
            self.model = None
            self.fixtures = {}
            self.cover = genus2_model()
        else:
            raise ValueError(f"unknown ambient {ambient!r}")
        self.n = 6 if ambient == MAP_2 else self.model.n
        self._words: dict[tuple[TwistRef, str], BraidWord] = {}
        self._mats: dict[TwistRef, la.Matrix] = {}
        self._lifts: dict[str, object] = {}

    @property
    def rank(self) -> int:
        if self.cover is None:
            raise ValueError(f"no homology model for ambient {self.ambient}")
        return self.cover.rank

    @property
    def form(self) -> la.Matrix:
        if self.cover is None:
            raise ValueError(f"no homology model for ambient {self.ambient}")
        return self.cover.form

    def fixture(self, name: str) -> PassageWord:
        try:
            return self.fixtures[name]
        except KeyError:
            raise KeyError(f"unresolvable twist reference {name!r}") from None

    def _check(self, ref: TwistRef) -> None:
        want = "gen" if self.ambient == MAP_2 else None
        if want and ref.variant != want or not want and ref.variant == "gen":
            raise ValueError(f"{ref.variant} factor {ref.name!r} does not live in {self.ambient}")

    # base level
    def bare_word(self, ref: TwistRef, mode: str = "listed") -> BraidWord:
        self._check(ref)
        if ref.variant == "gen":
            k = int(ref.name.split("_")[1])
            if not 1 <= k <= 5:
                raise KeyError(f"unresolvable generator {ref.name!r}")
            return BraidWord.sigma(6, k)
        w = self.fixture(ref.name)
        if ref.variant == "arc":
            if w.kind != "arc":
                raise ValueError(f"{ref.name!r} is not an arc")
            return self.model.halftwist_word(w)
        if w.kind != "curve":
            raise ValueError(f"{ref.name!r} is not a curve")
        if mode == "vanishing" and ref.sign < 0:
            return BraidWord.identity(self.n)
        return self.model.curvetwist_word(w)

    def base_word(self, ref: TwistRef, mode: str = "listed") -> BraidWord:
        """Base braid of a factor.

        mode "listed": both lifts of a curve project to its twist.
        mode "vanishing": the + lift carries the twist and the - lift is trivial,
        so each vanishing cycle of the base fibration is counted once.
        """
        if mode not in ("listed", "vanishing"):
            raise ValueError(f"unknown base mode {mode!r}")
        key = (ref, mode)
        if key not in self._words:
            if not ref.conjugators:
                w = self.bare_word(ref, mode)
            else:
                (g, e), rest = ref.conjugators[0], replace(ref, conjugators=ref.conjugators[1:])
                gw = self.base_word(g, mode)
                if e < 0:
                    gw = gw.inverse()
                w = gw * self.base_word(rest, mode) * gw.inverse()
            self._words[key] = w
        return self._words[key]

    # homology level
    def lift_class(self, ref: TwistRef) -> tuple[int, ...]:
        bare = ref.bare
        if bare.variant == "gen":
            k = int(bare.name.split("_")[1])
            return self.cover.lift_arc(self.cover.segment_arc(k - 1))
        key = f"{bare.name}{bare.sign}"
        if key not in self._lifts:
            if self.cover is None:
                raise ValueError(f"no homology model for ambient {self.ambient}")
            lc = self.cover.lift(self.fixture(bare.name))
            if bare.variant == "curve" and lc.components != 2:
                raise ValueError(f"curve {bare.name!r} has a connected lift")
            self._lifts[key] = lc.component(bare.sign) if bare.variant == "curve" else lc.plus
        return self._lifts[key]

    def matrix(self, ref: TwistRef) -> la.Matrix:
        self._check(ref)
        if ref not in self._mats:
            if not ref.conjugators:
                m = self.cover.transvection(self.lift_class(ref))
            else:
                (g, e), rest = ref.conjugators[0], replace(ref, conjugators=ref.conjugators[1:])
                mg = self.matrix(g)
                mg_inv = la.inverse_unimodular(mg)
                first, last = (mg, mg_inv) if e > 0 else (mg_inv, mg)
                m = matrix_product([first, self.matrix(rest), last], self.rank)
            self._mats[ref] = m
        return self._mats[ref]

    # normalization
    def commute(self, a: TwistRef, b: TwistRef) -> bool:
        """Exact commutation of the base twists (equivalently, disjoint supports)."""
        wa, wb = self.base_word(a), self.base_word(b)
        return dynnikov.equal(wa * wb, wb * wa)

    def normalize(self, ref: TwistRef) -> TwistRef:
        """Drop conjugators that commute with what they conjugate.

        Twists along curves (or half-twists along arcs) commute exactly when
        their supports are disjoint, and then the lifts are disjoint as well,
        so the dropped conjugation is trivial in the fiber mapping class group.
        """
        out = ref.bare
        for g, e in reversed(ref.conjugators):
            g = self.normalize(g)
            if not self.commute(g, out):
                out = out.conjugated(g, e)
        return out


@lru_cache(maxsize=8)
def resolver(ambient: str, fixtures_dir: str | None = None) -> Resolver:
    return Resolver(ambient, fixtures_dir)


def _resolver(t: FactorTuple, fixtures_dir: str | Path | None) -> Resolver:
    return resolver(t.ambient, None if fixtures_dir is None else str(fixtures_dir))


# ---------------------------------------------------------------- products


def product_word(t: FactorTuple, mode: str = "listed", fixtures_dir: str | Path | None = None) -> BraidWord:
    r = _resolver(t, fixtures_dir)
    letters: list[int] = []
    for f in t.factors:
        letters.extend(r.base_word(f, mode).letters)
    return BraidWord(r.n, tuple(letters))


def product_base(t: FactorTuple, mode: str = "listed", fixtures_dir: str | Path | None = None) -> BaseProduct:
    return BaseProduct.of(product_word(t, mode, fixtures_dir))


def factor_matrices(t: FactorTuple, fixtures_dir: str | Path | None = None) -> list[la.Matrix]:
    r = _resolver(t, fixtures_dir)
    return [r.matrix(f) for f in t.factors]


def product_homology(t: FactorTuple, fixtures_dir: str | Path | None = None) -> la.Matrix:
    r = _resolver(t, fixtures_dir)
    return matrix_product(factor_matrices(t, fixtures_dir), r.rank)


def structurally_equal(a: FactorTuple, b: FactorTuple, fixtures_dir: str | Path | None = None) -> bool:
    """Factor-by-factor equality after conjugator normalization."""
    if a.ambient != b.ambient or len(a) != len(b):
        return False
    r = _resolver(a, fixtures_dir)
    return all(x == y or r.normalize(x) == r.normalize(y) for x, y in zip(a.factors, b.factors))


# ---------------------------------------------------------------- checks


def moishezon_check(script: str | Path | Sequence[tuple[int, int]] | None = None) -> dict:
    """Compare the two B5 tuples; replay an optional move script step by step."""
    quad, five = moishezon_tuples()
    r = resolver(B5)
    report: dict = {
        "lengths": [len(quad), len(five)],
        "products_equal": product_base(quad) == product_base(five),
        "product_is_full_twist": product_base(five) == BaseProduct.of(full_twist(5)),
    }
    if script is None:
        report["script"] = None
        report["verdict"] = report["products_equal"]
        return report
    moves = read_moves(script) if isinstance(script, (str, Path)) else list(script)
    cur = quad
    target = product_base(quad)
    for step, (i, d) in enumerate(moves, start=1):
        try:
            cur = hurwitz_move(cur, i, d)
        except (IndexError, ValueError) as exc:
            raise ValueError(f"script step {step} is invalid: {exc}") from None
        if product_base(cur) != target:
            raise ValueError(f"script step {step} changed the product")
    matches = [BaseProduct.of(r.base_word(x)) == BaseProduct.of(r.base_word(y)) for x, y in zip(cur.factors, five.factors)]
    report["script"] = {"moves": len(moves), "factors_matched": sum(matches), "reaches_target": all(matches)}
    report["verdict"] = report["products_equal"] and all(matches)
    return report


def disc_translation_braid(n: int = 43) -> BraidWord:
    """Disc D = {1..6} carried once counterclockwise around 7..11, with D
    turned clockwise by a full turn and the inner disc D' = {2..6} by another."""
    translate = full_twist(n, 1, 11) * full_twist(n, 1, 6).inverse() * full_twist(n, 7, 11).inverse()
    return translate * full_twist(n, 1, 6).inverse() * full_twist(n, 2, 6).inverse()


def q1_block_check(fixtures_dir: str | Path | None = None) -> bool:
    q1 = x2_canonical().block("q1")
    return product_base(q1, fixtures_dir=fixtures_dir) == BaseProduct.of(disc_translation_braid())


def euler_check(g: int, n_base: int, e_x: int) -> int:
    """Node count N from e(blown-up total space) = 4 - 4g + N."""
    if g < 1:
        raise ValueError("genus must be positive")
    return e_x + n_base - 4 + 4 * g
