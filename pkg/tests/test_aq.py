import numpy as np
import pytest

from aqhopf.aq import (
    aq,
    aq_h0,
    aq_h1,
    aq_hn,
    coker_beta_p0,
    coker_odd_to_even,
    h1_map,
    les_check,
    les_connecting,
    q_map,
)
from aqhopf.borel import EXT, TRUNC, AlgebraMap, BorelGenerator, BorelPresentation
from aqhopf.em import CYCLIC, INT, EMSpec, em_cohomology
from aqhopf.hopf import frobenius_image, hopf_quotient, indecomposables, trivial_subalgebra, whole_subalgebra
from aqhopf.scenarios import polynomial_pair
from aqhopf.steenrod import BETA

from random_pairs import random_pair


# -- H_0 and H_1 ---------------------------------------------------------------------------


def test_h0_is_indecomposables():
    B = em_cohomology(EMSpec(CYCLIC, 2, 3, 30))
    assert aq_h0(B).basis == indecomposables(B).basis


def test_h1_classes_and_degrees():
    A = BorelPresentation(2, 20, [
        BorelGenerator("x", 1, TRUNC, 2),
        BorelGenerator("y", 3),
        BorelGenerator("w", 3, TRUNC, 1),
        BorelGenerator("u", 6, TRUNC, 2),
    ], None)
    H = aq_h1(A)
    assert H.basis == {4: ["xi2_x"], 6: ["xi1_w"]}
    assert H.heights == {"xi2_x": 2, "xi1_w": 1}
    assert H.meta["tensor_labels"]["xi2_x"] == "x^(x)4"


def test_h1_vanishes_on_free_algebras():
    A = BorelPresentation(3, 30, [BorelGenerator("z", 1, EXT), BorelGenerator("y", 2)], None)
    assert aq_h1(A).is_zero()


def test_higher_homology_vanishes():
    A = BorelPresentation(2, 10, [BorelGenerator("x", 1, TRUNC, 1)], None)
    assert aq_hn(A, 2).is_zero() and aq_hn(A, 5).is_zero()
    assert aq_hn(A, 1).basis == aq_h1(A).basis
    with pytest.raises(ValueError):
        aq_hn(A, -1)


def test_h1_action_explicit():
    A = BorelPresentation(2, 12, [BorelGenerator("x", 2, TRUNC, 1), BorelGenerator("y", 3, TRUNC, 1)],
                          {("x", 1): {(0, 1): 1}, ("y", 2): {}})
    H = aq_h1(A)
    assert H.act_on_label((2,), "xi1_x").tolist() == [1]
    assert not H.act_on_label((1,), "xi1_x").any()


def _frobenius_quotient(group, n, p, cap):
    B = em_cohomology(EMSpec(group, n, p, cap))
    A, inc = frobenius_image(B)
    return hopf_quotient(B, A, inc)


@pytest.mark.parametrize("p,cap", [(2, 24), (3, 50)])
def test_h1_action_is_the_frobenius_twist(p, cap):
    """Every generator of B//xi B has height p, so H_1 is QC with P^{pm} acting as P^m."""
    C = _frobenius_quotient(CYCLIC, 2, p, cap).C
    Q, H = indecomposables(C), aq_h1(C)
    determinable = {g.label for g in C.generators if g.kind == TRUNC}
    for d in H.degrees():
        for lab in H.basis[d]:
            g = lab.split("_", 1)[1]
            for letter in range(0 if p != 2 else 1, cap - d + 1):
                if d + (letter if p == 2 else (1 if letter == BETA else 2 * letter * (p - 1))) > cap:
                    break
                img = H.act_on_label((letter,), lab)
                if letter == BETA and p != 2 or letter % p:
                    assert not img.any()
                    continue
                twisted = Q.act_on_label((letter // p,), g)
                t = Q.locate(g)[0] + (letter // p) * (1 if p == 2 else 2 * (p - 1))
                expected = [
                    int(twisted[i]) for i, lab2 in enumerate(Q.labels(t))
                    if lab2 in determinable
                ]
                assert img.tolist() == expected


def test_h1_module_satisfies_adem():
    C = _frobenius_quotient(CYCLIC, 2, 2, 24).C
    assert aq_h1(C).adem_violations(12) == []


def test_aq_result_dict():
    C = _frobenius_quotient(CYCLIC, 2, 3, 50).C
    d = aq(C).to_dict()
    assert d["hn_for_n_ge_2"] == 0
    assert d["h1"]["dims"] == {"6": 1, "24": 1}
    assert set(d["strata"]) == {"1"}


# -- maps and the long exact sequence --------------------------------------------------------------


def test_h1_map_of_identity_is_identity():
    B = BorelPresentation(2, 20, [BorelGenerator("x", 1, TRUNC, 2), BorelGenerator("y", 2, TRUNC, 1)], None)
    _, ident = whole_subalgebra(B)
    H = aq_h1(B)
    for d, M in h1_map(ident, H, H).items():
        assert np.array_equal(M, np.eye(H.dim(d), dtype=np.int64))


def test_q_map_of_projection_is_onto():
    seq = _frobenius_quotient(CYCLIC, 2, 2, 20)
    QB, QC = indecomposables(seq.B), indecomposables(seq.C)
    for d, M in q_map(seq.projection, QB, QC).items():
        assert np.linalg.matrix_rank(M) == QC.dim(d)


def test_connecting_map_polynomial_pair():
    seq = polynomial_pair(2, 2, 20)
    conn = les_connecting(seq)
    assert conn[4].tolist() == [[1]]


def test_connecting_map_independent_of_lift():
    B = BorelPresentation(2, 16, [BorelGenerator("x", 2), BorelGenerator("y", 2)], None)
    A = BorelPresentation(2, 16, [BorelGenerator("a", 4), BorelGenerator("b", 2)], None)
    inc = AlgebraMap(A, B, {"a": B.power(B.gen("x"), 2), "b": B.gen("y")})
    seq = hopf_quotient(B, A, inc)
    assert [(g.label, g.kind, g.height) for g in seq.C.generators] == [("x", TRUNC, 1)]
    default = les_connecting(seq)
    shifted = les_connecting(seq, {"x": B.add(B.gen("x"), B.gen("y"))})
    for d in default:
        assert np.array_equal(default[d], shifted[d])
    assert default[4].tolist() == [[1]]


@pytest.mark.parametrize("p,dy", [(2, 2), (2, 4), (2, 6), (3, 2), (3, 4), (3, 6)])
def test_les_polynomial_pairs(p, dy):
    rep = les_check(polynomial_pair(p, dy))
    assert rep.passed, rep.failures()


def test_les_trivial_and_whole_pairs():
    B = em_cohomology(EMSpec(INT, 3, 2, 24))
    for A, inc in (trivial_subalgebra(B), whole_subalgebra(B)):
        assert les_check(hopf_quotient(B, A, inc)).passed


def test_les_random_pairs():
    for seed in range(20, 40):
        B, A, inc = random_pair(seed)
        rep = les_check(hopf_quotient(B, A, inc))
        assert rep.passed, (seed, rep.failures())


def test_les_report_flags_broken_maps():
    seq = polynomial_pair(2, 2, 20)
    broken = AlgebraMap(seq.B, seq.C, {"y": {}})
    seq.projection = broken
    rep = les_check(seq)
    assert not rep.passed
    assert any("surjective" in f for fs in rep.failures().values() for f in fs)


# -- cokernel of the odd-to-even operation ------------------------------------------------------------


def test_coker_at_two_is_even_part():
    Q = indecomposables(em_cohomology(EMSpec(INT, 3, 2, 40)))
    c = coker_odd_to_even(Q)
    assert c.basis == {d: labs for d, labs in Q.basis.items() if d % 2 == 0}
    with pytest.raises(ValueError):
        coker_beta_p0(Q)


def test_coker_beta_p0_kills_bockstein_images():
    Q = indecomposables(em_cohomology(EMSpec(INT, 3, 3, 40)))
    # bP1 i3 and bP3P1 i3 are beta P_0 of i3 and P1 i3
    assert Q.basis[8] == ["bP1_i3"] and Q.basis[20] == ["bP3P1_i3"]
    assert coker_beta_p0(Q).is_zero()


def test_coker_keeps_unhit_classes():
    Q = indecomposables(em_cohomology(EMSpec(CYCLIC, 2, 3, 30)))
    c = coker_beta_p0(Q)
    assert c.basis.get(2) == ["i2"]
