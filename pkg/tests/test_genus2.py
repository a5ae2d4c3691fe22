from twistlab.genus2 import generated_group, map2_is_identity, perm_image, sp4_image, sphere_trivial, transposition_image
from twistlab import intlinalg as la


def test_chain_relation_holds_in_map2():
    assert map2_is_identity((1, 2, 3, 4, 5) * 6)


def test_hyperelliptic_involution_is_not_identity():
    hyp = (1, 2, 3, 4, 5, 5, 4, 3, 2, 1)
    assert sphere_trivial(hyp)
    assert sp4_image(hyp) == [[-1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert not map2_is_identity(hyp)


def test_single_twist_is_not_identity():
    assert not map2_is_identity((1, 1))


def test_sp4_image_is_symplectic_for_generators():
    for g in range(1, 6):
        m = sp4_image((g,))
        assert la.determinant(m) == 1


def test_transpositions_generate_s6_and_s5():
    assert len(generated_group([transposition_image(g) for g in range(1, 6)], 6)) == 720
    assert len(generated_group([transposition_image(g) for g in range(1, 5)], 6)) == 120


def test_perm_image_reports_fixed_point():
    rep = perm_image([(g,) for g in (1, 2, 3, 4)])
    assert rep["fixed_points"] == [6]
