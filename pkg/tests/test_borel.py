from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aqhopf.borel import (
    EXT,
    POLY,
    TRUNC,
    ActionTableIncomplete,
    AlgebraMap,
    BorelGenerator,
    BorelPresentation,
    PresentationError,
    cartan_action,
    tensor,
)
from aqhopf.em import CYCLIC, EMSpec, em_cohomology
from aqhopf.steenrod import BETA, adem_normalize


def series_product(*factors, cap):
    out = [1] + [0] * cap
    for f in factors:
        new = [0] * (cap + 1)
        for i, a in enumerate(out):
            for j, b in enumerate(f[: cap + 1 - i]):
                new[i + j] += a * b
        out = new
    return out


def piece(kind, deg, cap, p, height=None):
    """Poincare series of one monogenic piece, written out directly."""
    s = [0] * (cap + 1)
    top = {POLY: None, EXT: 1, TRUNC: None if height is None else p**height - 1}[kind]
    e = 0
    while e * deg <= cap and (top is None or e <= top):
        s[e * deg] = 1
        e += 1
    return s


def test_monomial_basis_and_series():
    gens = [BorelGenerator("z", 3, EXT), BorelGenerator("x", 2, TRUNC, 1), BorelGenerator("y", 4)]
    P = BorelPresentation(3, 20, gens, None)
    expected = series_product(piece(EXT, 3, 20, 3), piece(TRUNC, 2, 20, 3, 1), piece(POLY, 4, 20, 3), cap=20)
    assert P.poincare_series() == expected
    for d in range(21):
        assert len(P.monomial_basis(d)) == expected[d]
        assert all(P.mono_degree(m) == d for m in P.monomial_basis(d))


def test_exterior_at_two_is_height_one():
    P = BorelPresentation(2, 10, [BorelGenerator("e", 1, EXT)], None)
    assert P.generators[0].kind == TRUNC and P.generators[0].height == 1
    assert P.poincare_series()[:3] == [1, 1, 0]


def test_parity_rules():
    with pytest.raises(PresentationError):
        BorelPresentation(3, 10, [BorelGenerator("z", 2, EXT)], None)
    with pytest.raises(PresentationError):
        BorelPresentation(3, 10, [BorelGenerator("x", 3)], None)
    with pytest.raises(PresentationError):
        BorelPresentation(2, 10, [BorelGenerator("x", 1), BorelGenerator("x", 2)], None)


def test_graded_commutativity_signs():
    P = BorelPresentation(3, 10, [BorelGenerator("z", 1, EXT), BorelGenerator("w", 3, EXT)], None)
    z, w = P.gen("z"), P.gen("w")
    assert P.mul(z, w) == P.scale(P.mul(w, z), -1)
    assert P.mul(z, z) == {}


def test_truncation_and_powers():
    P = BorelPresentation(2, 20, [BorelGenerator("x", 1, TRUNC, 2)], None)
    x = P.gen("x")
    assert P.power(x, 3) == {(3,): 1}
    assert P.power(x, 4) == {}
    Q = BorelPresentation(3, 30, [BorelGenerator("y", 2)], None)
    assert Q.power(Q.gen("y"), 5) == {(5,): 1}


MONO = st.tuples(st.integers(0, 1), st.integers(0, 2), st.integers(0, 3))


@settings(max_examples=60, deadline=None)
@given(MONO, MONO, MONO)
def test_multiplication_associative(a, b, c):
    P = BorelPresentation(3, 60, [BorelGenerator("z", 1, EXT), BorelGenerator("x", 2, TRUNC, 1),
                                  BorelGenerator("y", 4)], None)
    xa, xb, xc = {a: 1}, {b: 2}, {c: 1}
    assert P.mul(P.mul(xa, xb), xc) == P.mul(xa, P.mul(xb, xc))


# -- Steenrod action -----------------------------------------------------------------------


def test_instability_entries_are_implicit():
    P = BorelPresentation(2, 12, [BorelGenerator("x", 1), BorelGenerator("y", 1)], {})
    x, y = P.gen("x"), P.gen("y")
    xy = P.mul(x, y)
    assert P.act((1,), xy) == P.add(P.mul(P.power(x, 2), y), P.mul(x, P.power(y, 2)))
    assert P.act((2,), xy) == P.mul(P.power(x, 2), P.power(y, 2))
    assert P.act((3,), xy) == {}
    Q = BorelPresentation(3, 30, [BorelGenerator("y", 2)], {("y", BETA): {}})
    assert Q.act((1,), Q.gen("y")) == Q.power(Q.gen("y"), 3)


def test_bockstein_is_a_derivation():
    B = BorelPresentation(3, 20, [BorelGenerator("z", 1, EXT), BorelGenerator("y", 2)],
                          {("z", BETA): {(0, 1): 1}, ("y", BETA): {}})
    z, y = B.gen("z"), B.gen("y")
    zy2 = B.mul(z, B.power(y, 2))
    assert B.act((BETA,), zy2) == B.power(y, 3)
    assert B.act((BETA, BETA), zy2) == {}


def test_missing_action_entries_raise():
    P = BorelPresentation(3, 20, [BorelGenerator("y", 4)], {})
    with pytest.raises(ActionTableIncomplete):
        P.act((1,), P.gen("y"))
    N = BorelPresentation(2, 20, [BorelGenerator("y", 4)], None)
    with pytest.raises(ActionTableIncomplete):
        N.act((1,), N.gen("y"))
    with pytest.raises(ActionTableIncomplete):
        N.act((30,), N.gen("y"))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=3).map(tuple), st.integers(0, 3), st.integers(0, 3))
def test_em_action_satisfies_adem(w, a, b):
    """Words and their normal forms act alike on K(Z/2, 2)."""
    B = _k22()
    m = (a, b, 0, 0)
    if B.mono_degree(m) + sum(w) > B.cap:
        return
    x = {m: 1}
    assert cartan_action(w, x, B) == cartan_action(adem_normalize(w, 2), x, B)


@lru_cache(maxsize=None)
def _k22():
    return em_cohomology(EMSpec(CYCLIC, 2, 2, 18))


# -- tensor products and maps ----------------------------------------------------------------


def test_tensor_series_and_action():
    A = BorelPresentation(2, 12, [BorelGenerator("x", 1)], {})
    B = BorelPresentation(2, 12, [BorelGenerator("y", 2, TRUNC, 1)], {("y", 1): {}})
    T = tensor(A, B)
    assert T.poincare_series() == series_product(A.poincare_series(), B.poincare_series(), cap=12)
    assert T.has_action
    with pytest.raises(PresentationError):
        tensor(A, A)


def test_algebra_map_is_multiplicative():
    A = BorelPresentation(2, 16, [BorelGenerator("u", 2)], None)
    B = BorelPresentation(2, 16, [BorelGenerator("x", 1)], None)
    f = AlgebraMap(A, B, {"u": B.power(B.gen("x"), 2)})
    assert f.apply(A.power(A.gen("u"), 3)) == B.power(B.gen("x"), 6)
    assert f.matrix(4).tolist() == [[1]]
    assert f.matrix(3).shape == (0, 1)


def test_vector_round_trip():
    P = BorelPresentation(3, 20, [BorelGenerator("z", 1, EXT), BorelGenerator("y", 2)], None)
    x = P.add(P.mul(P.gen("z"), P.power(P.gen("y"), 2)), P.scale(P.power(P.gen("y"), 2), 0))
    d = P.degree_of(x)
    assert P.from_vector(P.to_vector(x, d), d) == x
