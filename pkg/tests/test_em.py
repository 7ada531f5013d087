import pytest

from aqhopf.borel import EXT, POLY, PresentationError
from aqhopf.em import CYCLIC, INT, PRUFER, EMSpec, em_cohomology, group_text, loop_shift, parse_group
from aqhopf.hopf import indecomposables
from aqhopf.unstable import f_basis


def generator_table(B):
    return [(g.label, g.degree, g.kind) for g in B.generators]


def test_k_z_3_at_two():
    B = em_cohomology(EMSpec(INT, 3, 2, 12))
    assert generator_table(B) == [("i3", 3, POLY), ("Sq2_i3", 5, POLY), ("Sq4Sq2_i3", 9, POLY)]
    # F_2[x3, x5, x9] written out by hand through degree 12
    assert B.poincare_series() == [1, 0, 0, 1, 0, 1, 1, 0, 1, 2, 1, 1, 2]


def test_k_z3_2_generators():
    B = em_cohomology(EMSpec(CYCLIC, 2, 3, 50))
    assert generator_table(B) == [
        ("i2", 2, POLY),
        ("b_i2", 3, EXT),
        ("P1b_i2", 7, EXT),
        ("bP1b_i2", 8, POLY),
        ("P3P1b_i2", 19, EXT),
        ("bP3P1b_i2", 20, POLY),
    ]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_generator_count_matches_free_module(n):
    """At p = 2 the generators of K(Z/2, n) in degree d biject with F(n-1) in degree d-1."""
    cap = 30
    B = em_cohomology(EMSpec(CYCLIC, n, 2, cap))
    counts = [0] * (cap + 1)
    for g in B.generators:
        counts[g.degree] += 1
    assert counts[1:] == [len(f_basis(n - 1, d - 1, 2)) for d in range(1, cap + 1)]


def test_integral_drops_words_ending_in_bockstein():
    Zp = em_cohomology(EMSpec(CYCLIC, 3, 3, 40))
    Z = em_cohomology(EMSpec(INT, 3, 3, 40))
    expected = [g for g in generator_table(Zp) if not g[0].endswith("b_i3")]
    assert generator_table(Z) == expected


def test_higher_cyclic_has_two_fundamental_classes():
    B = em_cohomology(EMSpec(CYCLIC, 2, 3, 30, r=2))
    labels = [g.label for g in B.generators]
    assert "i2" in labels and "b2_i2" in labels
    assert B.generators[B.index["b2_i2"]].degree == 3
    assert "b_i2" not in labels


def test_prufer_shifts_to_integral():
    P = em_cohomology(EMSpec(PRUFER, 2, 2, 30))
    Z = em_cohomology(EMSpec(INT, 3, 2, 30))
    assert generator_table(P) == generator_table(Z)


@pytest.mark.parametrize("spec", [EMSpec(CYCLIC, 2, 3, 40), EMSpec(INT, 3, 2, 30), EMSpec(CYCLIC, 3, 2, 24)])
def test_action_is_unstable_and_satisfies_adem(spec):
    Q = indecomposables(em_cohomology(spec))
    assert Q.instability_violations() == []
    assert Q.adem_violations(16) == []


def test_loop_shift():
    spec = EMSpec(INT, 4, 3, 40)
    assert loop_shift(spec) == EMSpec(INT, 3, 3, 40)
    with pytest.raises(ValueError):
        loop_shift(EMSpec(INT, 2, 3, 40))


def test_spec_validation():
    with pytest.raises(ValueError):
        EMSpec(INT, 1, 2, 10)
    with pytest.raises(ValueError):
        EMSpec("Q", 2, 2, 10)
    with pytest.raises(ValueError):
        EMSpec(CYCLIC, 2, 4, 10)
    with pytest.raises(ValueError):
        EMSpec(CYCLIC, 2, 2, 10, r=0)
    with pytest.raises(PresentationError):
        em_cohomology(EMSpec(INT, 5, 2, 4))


def test_group_parsing():
    assert parse_group("Z") == (INT, 1)
    assert parse_group("Z/p") == (CYCLIC, 1)
    assert parse_group("Z/p^3") == (CYCLIC, 3)
    assert parse_group("Z/p^inf") == (PRUFER, 1)
    with pytest.raises(ValueError):
        parse_group("Q")
    assert group_text(EMSpec(CYCLIC, 2, 2, 10, r=2)) == "Z/p^2"
