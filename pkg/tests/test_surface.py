import pytest

from twistlab.braid import dynnikov
from twistlab.surface import PassageWord, canonical_configuration, default_model, figure_fixtures


@pytest.fixture(scope="module")
def model():
    return default_model()


def test_configuration_counts():
    d = canonical_configuration()
    assert d.n == 43
    assert len(d.branch_positions) == 36
    assert d.s0[0] == "alpha" and d.s0[11] == "z1"


def test_every_figure_name_resolves(model):
    f = figure_fixtures()
    assert len(f) == 73
    for name, w in f.items():
        assert model.coords(w), name


def test_fixture_records_round_trip():
    for name, w in figure_fixtures().items():
        assert PassageWord.from_record(w.to_record(name)) == w


def test_reduce_is_idempotent_and_isotopic(model):
    for w in list(figure_fixtures().values())[:20]:
        r = model.reduce(w)
        assert model.reduce(r) == r
        assert model.isotopic(r, w)


def test_halftwist_swaps_its_endpoints(model):
    w = figure_fixtures()["taubar_1"]
    b = model.halftwist_word(w)
    perm = b.permutation()
    i, j = model.disk.pos(w.endpoints[0]) - 1, model.disk.pos(w.endpoints[1]) - 1
    assert perm[i] == j and perm[j] == i


def test_halftwist_fixes_its_arc(model):
    w = figure_fixtures()["phi"]
    assert model.isotopic(model.act(model.halftwist_word(w), w), w)


def test_curve_twist_squares_halftwist_for_arc_boundary(model):
    # the twist about the boundary of a neighbourhood of an arc is the square of its half-twist
    w = figure_fixtures()["phi"]
    boundary = model.word_from_walk(model.walk(w))
    h = model.halftwist_word(w)
    assert dynnikov.equal(model.curvetwist_word(boundary), h * h)


def test_bad_passage_side_rejected():
    with pytest.raises(ValueError):
        PassageWord("curve", (("z1", "C"),))


def test_arc_requires_two_endpoints():
    with pytest.raises(ValueError):
        PassageWord("arc", (), ("alpha",))
