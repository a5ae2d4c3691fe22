import pytest

from twistlab import factorization as fz
from twistlab.factorization import PHI, FactorTuple, TwistRef, arc, curve, gen


def test_lengths(x1, x2):
    assert len(x1) == len(x2) == 196
    assert [len(t) for t in fz.genus2_factorizations()] == [120, 120]
    assert [len(t) for t in fz.moishezon_tuples()] == [20, 20]


def test_blocks_partition_x2(x2):
    assert sum(len(x2.block(b.name)) for b in x2.blocks) == 196


def test_x1_primes_exactly_first_64(x1, x2):
    primed = [k for k, (a, b) in enumerate(zip(x1.factors, x2.factors), 1) if a != b]
    assert primed and max(primed) <= 64
    assert all(x1[k - 1] == x2[k - 1].conjugated(PHI) for k in primed)


def test_twisted_genus2_factor_4():
    assert fz.x1_genus2_twisted()[3] == gen(4).conjugated(gen(5))


def test_ref_validation():
    with pytest.raises(ValueError):
        TwistRef("curve", "delta_1")
    with pytest.raises(ValueError):
        TwistRef("arc", "phi", 1)
    with pytest.raises(ValueError):
        TwistRef("knot", "x")


def test_conjugation_cancels_opposite_outermost():
    t = arc("taubar_1")
    assert t.conjugated(PHI).conjugated(PHI, -1) == t


def test_label_shows_conjugation():
    assert arc("taubar_4").conjugated(PHI).label() == "phi(taubar_4)"
    assert curve("delta_1", -1).label() == "delta_1-"


def test_tuple_record_round_trip(x1):
    assert FactorTuple.loads(x1.dumps()) == x1


def test_hurwitz_move_formulae():
    t = FactorTuple(fz.B5, (arc("sigma_1,2"), arc("sigma_2,3")))
    a, b = t.factors
    assert fz.hurwitz_move(t, 1, 1).factors == (b.conjugated(a), a)
    assert fz.hurwitz_move(t, 1, -1).factors == (b, a.conjugated(b, -1))


def test_hurwitz_move_range_and_direction():
    t = fz.moishezon_tuples()[1]
    with pytest.raises(IndexError):
        fz.hurwitz_move(t, 20)
    with pytest.raises(ValueError):
        fz.hurwitz_move(t, 1, 2)


def test_partial_twist_empty_span_and_identity(x2):
    assert fz.partial_twist(x2, None, PHI) == x2
    assert fz.partial_twist(x2, (5, 4), PHI) == x2
    with pytest.raises(IndexError):
        fz.partial_twist(x2, (0, 3), PHI)


def test_normalize_drops_commuting_conjugator():
    r = fz.resolver(fz.MAP_17_16)
    far = arc("zeta_6,5")
    assert r.normalize(far.conjugated(arc("taubar_1"))) == far


def test_unknown_name_rejected():
    with pytest.raises(KeyError):
        fz.resolver(fz.MAP_17_16).base_word(arc("nope"))


def test_wrong_variant_for_ambient():
    with pytest.raises(ValueError):
        fz.resolver(fz.MAP_2).base_word(arc("phi"))


def test_vanishing_mode_drops_minus_lifts():
    r = fz.resolver(fz.MAP_17_16)
    assert r.base_word(curve("delta_1", -1), "vanishing").letters == ()
    assert r.base_word(curve("delta_1", 1), "vanishing").letters


def test_euler_check_rejects_genus_zero():
    with pytest.raises(ValueError):
        fz.euler_check(0, 1, 1)


def test_moishezon_script_rejects_bad_step():
    with pytest.raises(ValueError):
        fz.moishezon_check([(25, 1)])


def test_moves_file_round_trip(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text(fz.write_moves([(1, 1), (3, -1)]))
    assert fz.read_moves(p) == [(1, 1), (3, -1)]
