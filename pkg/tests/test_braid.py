import pytest

from twistlab.braid import dynnikov, freegroup, garside
from twistlab.braid.word import BraidWord, delta, free_reduce, full_twist


def s(n, *letters):
    return BraidWord(n, letters)


def test_free_reduce_cancels_adjacent_inverses():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)


def test_braid_relation_in_both_engines():
    u, v = s(4, 1, 2, 1), s(4, 2, 1, 2)
    assert garside.equal(u, v)
    assert dynnikov.equal(u, v)


def test_far_commutation_and_its_failure():
    assert dynnikov.equal(s(5, 1, 3), s(5, 3, 1))
    assert not dynnikov.equal(s(5, 1, 2), s(5, 2, 1))
    assert not garside.equal(s(5, 1, 2), s(5, 2, 1))


def test_full_twist_is_fifth_power_of_the_cycle():
    cycle = s(5, 1, 2, 3, 4)
    power = BraidWord(5, cycle.letters * 5)
    assert garside.equal(power, full_twist(5))
    assert dynnikov.equal(power, full_twist(5))


def test_full_twist_is_delta_squared():
    assert garside.equal(full_twist(6), delta(6) * delta(6))


def test_full_twist_is_central():
    d2 = full_twist(4)
    for i in (1, 2, 3):
        g = BraidWord.sigma(4, i)
        assert dynnikov.equal(d2 * g, g * d2)


def test_sigma_is_not_trivial_and_product_with_inverse_is():
    g = BraidWord.sigma(3, 1)
    assert not dynnikov.is_trivial(g)
    assert garside.is_trivial(g * g.inverse())


def test_normal_form_round_trip():
    w = s(4, 1, -2, 3, 3, -1, 2)
    nf = garside.normal_form(w)
    assert garside.equal(nf.to_word(), w)


def test_permutation_of_a_generator():
    assert s(3, 1).permutation() == (1, 0, 2)


def test_freegroup_action_of_sigma_conjugates_the_product():
    # sigma_1 preserves x1 x2 and the boundary word
    b = s(3, 1)
    assert freegroup.act_word(b, (1, 2)) == (1, 2)
    assert freegroup.act_word(b, (1, 2, 3)) == (1, 2, 3)


def test_boundary_twist_acts_as_inner_automorphism():
    assert freegroup.is_inner(freegroup.automorphism(full_twist(4)))
    assert not freegroup.is_inner(freegroup.automorphism(BraidWord.sigma(4, 1)))


def test_sigma_out_of_range_rejected():
    with pytest.raises(ValueError):
        BraidWord.sigma(3, 3)
