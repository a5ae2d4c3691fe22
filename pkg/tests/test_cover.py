from twistlab import intlinalg as la
from twistlab.cover import build_cover, genus2_model
from twistlab.factorization import MAP_17_16, PHI, resolver
from twistlab.surface import figure_fixtures


def test_ranks():
    assert build_cover().rank == 34
    assert genus2_model().rank == 4


def test_form_is_unimodular_and_skew():
    j = build_cover().form
    assert la.transpose(j) == [[-x for x in r] for r in j]
    assert abs(la.determinant(j)) == 1


def test_segment_transvections_preserve_form():
    c = build_cover()
    for k in range(5):
        m = c.transvection(c.lift_arc(c.segment_arc(k)))
        assert la.preserves_form(m, c.form)


def test_adjacent_segment_twists_satisfy_braid_relation():
    c = build_cover()
    a = c.transvection(c.lift_arc(c.segment_arc(0)))
    b = c.transvection(c.lift_arc(c.segment_arc(1)))
    assert la.matmul(la.matmul(a, b), a) == la.matmul(la.matmul(b, a), b)


def test_delta_lifts_are_disjoint_and_commute():
    r = resolver(MAP_17_16)
    for i in range(1, 9):
        lc = r.cover.lift(figure_fixtures()[f"delta_{i}"])
        assert lc.components == 2
        assert r.cover.pairing(lc.plus, lc.minus) == 0
        mp = r.cover.transvection(lc.plus)
        mm = r.cover.transvection(lc.minus)
        assert la.matmul(mp, mm) == la.matmul(mm, mp)


def test_lifted_arc_class_is_nonzero():
    assert any(resolver(MAP_17_16).lift_class(PHI))
