import pytest

from twistlab import subgroup as sg
from twistlab.factorization import B5, FactorTuple, PHI, apply_moves, arc, moishezon_tuples


@pytest.fixture(scope="module")
def lab():
    return sg.lab()


def test_gap_profile():
    assert sg.gap_profile([1, 2, 3, 12, 13]) == ((1, 12), (0, 2, 1))
    assert sg.gap_profile(range(2, 7)) == ((), (5,))


def test_side_conditions_accept_and_name_each_violation():
    assert sg.side_conditions([3, 4, 5], [5, 6, 7], 5) == []
    assert len(sg.side_conditions([3, 4, 5], [4, 5, 6], 5)) >= 2
    assert "s must not be a z point" in sg.side_conditions([10, 11, 12], [12, 13], 12)


def test_default_envelopes_match_the_loop_model(lab):
    for i in range(1, 9):
        assert sg.loop_matches_model(lab, sg._default_set(i))


def test_route_within_a_gap(lab):
    swaps = sg.route(lab, [1, 2, 3, 4, 5, 6, 12], [1, 2, 3, 4, 5, 8, 12])
    assert swaps and all(e in (1, -1) for _, e in swaps)


def test_route_refuses_to_cross_a_member_z(lab):
    with pytest.raises(sg.CertificateError, match="gap profiles"):
        sg.route(lab, [1, 2, 3, 4, 5, 6, 12], [1, 2, 3, 4, 5, 12, 13])


def test_route_rejects_moving_fixed_points(lab):
    with pytest.raises(ValueError):
        sg.route(lab, [1, 2, 12], [1, 2, 18])


def test_tree_generators_all_verify():
    certs = sg.tree_generators()
    assert len(certs) == 34
    assert all(all(c.checks["levels"].values()) for c in certs)


def test_generator_certificates_verify(lab):
    for i in range(1, 9):
        node, b = sg.generator_certificate(lab, i)
        assert b.members == sg._default_set(i)
        assert all(c["verdict"] for c in b.checks)


def test_permuted_envelope_replays(lab):
    node, b = sg.generator_certificate(lab, 2)
    c = sg._envelope_cert(node, b)
    moved = sg.permuted_envelope(c, [1, 3, 4, 5, 6, 7, 18])
    assert moved.members == (1, 3, 4, 5, 6, 7, 18)
    assert sg.replay(moved)["verdict"]


def test_sum_envelopes_rejects_bad_side_conditions(lab):
    n1, b1 = sg.generator_certificate(lab, 1)
    n2, b2 = sg.generator_certificate(lab, 2)
    with pytest.raises(ValueError, match="share exactly the point s"):
        sg.sum_envelopes(sg._envelope_cert(n1, b1), sg._envelope_cert(n2, b2), 3)


def test_closure_walk_stage_sizes(walk_certs):
    sizes = sorted({len(c.members) for c in walk_certs})
    assert sizes == [7, 12, 17, 22, 27, 32, 37]


def test_closure_walk_certificates_replay(walk_certs):
    for c in walk_certs[-2:]:
        rep = sg.replay(c)
        assert rep["verdict"] and rep["word_matches"]


def test_certificate_round_trip(walk_certs):
    c = walk_certs[-1]
    back = sg.Certificate.loads(c.dumps())
    assert back == c and back.derivation == c.derivation


def test_certificate_rejects_length_mismatch(walk_certs):
    rec = walk_certs[0].to_record()
    rec["length"] += 1
    with pytest.raises(ValueError):
        sg.Certificate.from_record(rec)


def test_tampered_word_fails_replay(walk_certs):
    c = walk_certs[-1]
    bad = sg.Certificate(c.target, c.word[:-1], c.derivation, c.checks)
    assert not sg.replay(bad)["verdict"]


def test_tampered_derivation_fails_replay(walk_certs):
    import copy

    c = walk_certs[-1]
    d = copy.deepcopy(c.derivation)
    d["s"] = d["s"] + 1
    assert not sg.replay(sg.Certificate(c.target, c.word, d, c.checks))["verdict"]


def test_phi_in_g1_word(x1):
    c = sg.phi_in_g1()
    b, a, binv = c.word
    assert binv == -b
    assert x1[b - 1] == arc("taubar_4")
    assert x1[a - 1] == arc("taubar_4").conjugated(PHI)
    assert c.checks["braid_relation"] and all(c.checks["levels"].values())


def test_scan_empty_tuple():
    assert sg.matching_path_scan(FactorTuple(B5, ()), 2) == []


def test_scan_rejects_negative_budget():
    with pytest.raises(ValueError):
        sg.matching_path_scan(moishezon_tuples()[1], -1)


def test_scan_records_moves(scan1):
    moved = [p for r in scan1 for p in r["pair"] if not p["direct"]]
    assert moved and all(len(p["moves"]) == 1 for p in moved)


def test_scan_classes_survive_a_move():
    t = moishezon_tuples()[1]
    before = {r["monodromy"] for r in sg.matching_path_scan(t, 0)}
    for move in [(3, 1), (7, -1), (12, 1)]:
        after = {r["monodromy"] for r in sg.matching_path_scan(apply_moves(t, [move]), 1)}
        assert before <= after


def test_derive_phi_stops_at_the_profile_obstruction(phi_outcome):
    # the scripted closure needs a D0 permutation that moves points across member z's
    assert isinstance(phi_outcome, sg.CertificateError)
    msg = str(phi_outcome)
    assert msg.startswith("closure stage 22:") and "gap profiles (5, 5, 0) and (10, 0, 0)" in msg


def test_closure_identity_at_base_level(lab):
    # T_{c(S_phi)} = H_phi^2 and c(S_phi) is the boundary of a neighbourhood of the phi arc
    from twistlab.braid import dynnikov

    s_phi = sorted(set(range(1, 45)) - {1, 2})
    phi = lab.res.fixture("phi")
    h = lab.model.halftwist_word(phi)
    assert dynnikov.equal(lab.model.curvetwist_word(lab.envelope_walk(s_phi)), h * h)
    assert lab.model.coords(phi) == lab.envelope_coords(s_phi)
