from itertools import product

import pytest

from stable_pieces.errors import InvalidAutomorphism, MixedDatum, NonFiniteType, NotMinimalRep
from stable_pieces.weyl import CountPolynomial, build_weyl
from stable_pieces.weyl.base import parse_delta, parse_subset


@pytest.fixture(scope="module")
def a2():
    return build_weyl("A2")


def _element(datum, word: str):
    return datum.parse_word(word)


@pytest.mark.parametrize(
    "type_spec, order, nu",
    [("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("B2", 8, 4), ("B3", 48, 9), ("C3", 48, 9),
     ("G2", 12, 6), ("D4", 192, 12), ("F4", 1152, 24), ("A1xA1", 4, 2)],
)
def test_group_orders(type_spec: str, order: int, nu: int) -> None:
    datum = build_weyl(type_spec)
    assert len(datum.elements) == order
    assert datum.num_positive == nu
    assert datum.w0.length == nu


def test_build_from_coxeter_matrix() -> None:
    datum = build_weyl([[1, 3], [3, 1]])
    assert len(datum.elements) == 6
    with pytest.raises(NonFiniteType):
        build_weyl([[1, 3, 3], [3, 1, 3], [3, 3, 1]])


def test_delta_validation() -> None:
    assert build_weyl("A2", delta=[2, 1]).delta == {1: 2, 2: 1}
    assert build_weyl("A3", delta=[3, 2, 1]).delta_subset({1, 2}) == {3, 2}
    with pytest.raises(InvalidAutomorphism):
        build_weyl("B2", delta=[2, 1])
    with pytest.raises(InvalidAutomorphism):
        build_weyl("A2", delta=[1, 1])
    with pytest.raises(InvalidAutomorphism):
        build_weyl("A3", delta=[2, 1, 3])


def test_group_laws(a2) -> None:
    s1, s2 = a2.simple(1), a2.simple(2)
    assert s1 * s1 == a2.identity
    assert (s1 * s1).length == 0
    assert s1 * s2 * s1 == s2 * s1 * s2
    assert (s1 * s2 * s1).length == 3
    assert s1 * s2 * s1 == a2.w0
    assert build_weyl("B2").w0.length == 4


def test_mixed_datum(a2) -> None:
    other = build_weyl("A2")
    with pytest.raises(MixedDatum):
        a2.simple(1) * other.simple(1)


@pytest.mark.parametrize("type_spec", ["A3", "B3", "G2"])
def test_length_properties(type_spec: str) -> None:
    datum = build_weyl(type_spec)
    for w in datum.elements:
        assert w.length == w.inverse().length
        assert len(w.word) == w.length
        assert datum.element_from_word(w.word) == w
        for i in datum.nodes:
            assert abs((w * datum.simple(i)).length - w.length) == 1


def test_words_are_lex_least(a2) -> None:
    assert a2.w0.word == (1, 2, 1)
    assert repr(a2.parse_word("s2 s1 s2")) == "s1 s2 s1"
    assert repr(a2.identity) == "e"
    assert a2.parse_word("s1s2") == a2.parse_word("1 2") == a2.simple(1) * a2.simple(2)


def test_min_double_coset(a2) -> None:
    assert a2.min_double_coset({1, 2}, a2.identity, {1}) == a2.identity
    assert a2.min_double_coset({2}, _element(a2, "s2 s1"), {2}) == a2.simple(1)
    for w in a2.elements:
        assert a2.min_double_coset(set(), w, set()) == w


@pytest.mark.parametrize("type_spec", ["A2", "B2", "A3"])
def test_min_double_coset_is_the_minimum(type_spec: str) -> None:
    datum = build_weyl(type_spec)
    subsets = datum.subsets()
    for left, right in product(subsets, subsets):
        reps = set(datum.double_reps(left, right))
        w_left, w_right = datum.parabolic(left), datum.parabolic(right)
        for x in datum.elements:
            m = datum.min_double_coset(left, x, right)
            assert m in reps
            coset = {a * m * b for a in w_left for b in w_right}
            assert x in coset
            assert all(m.length <= z.length for z in coset)


def test_coset_reps(a2) -> None:
    assert a2.coset_reps(a2.nodes) == (a2.identity,)
    reps = a2.coset_reps({1})
    assert sorted(w.length for w in reps) == [0, 1, 2]
    assert set(a2.double_reps({2}, {2})) == {a2.identity, a2.simple(1)}
    assert len(a2.coset_reps({1}, side="left")) == 3


def test_ad_subset(a2) -> None:
    assert a2.ad_subset(a2.identity, {1, 2}) == ({1, 2}, True)
    assert a2.ad_subset(a2.simple(1), {1}) == ({1}, True)
    assert a2.ad_subset(a2.simple(1), {2}) == (frozenset(), False)


@pytest.mark.parametrize("type_spec", ["A1", "A2", "A3", "B3", "G2"])
def test_ad_of_longest_is_star(type_spec: str) -> None:
    datum = build_weyl(type_spec)
    for nodes in datum.subsets():
        assert datum.ad_subset(datum.w0, nodes) == (datum.star(nodes), True)
        assert datum.star(datum.star(nodes)) == nodes


def test_nu() -> None:
    a2, b2 = build_weyl("A2"), build_weyl("B2")
    assert a2.nu(set()) == 0
    assert a2.nu(a2.nodes) == 3
    assert b2.nu({1}) == 1


def test_longest_in_W_upper(a2) -> None:
    assert a2.longest_in_W_upper(a2.nodes) == a2.identity
    assert a2.longest_in_W_upper(set()) == a2.w0
    y = a2.longest_in_W_upper({1})
    assert y.length == 2
    assert y in a2.coset_reps({1})


def test_star() -> None:
    assert build_weyl("A1").star({1}) == {1}
    assert build_weyl("A2").star({1}) == {2}
    b2 = build_weyl("B2")
    assert b2.star({1}) == {1} and b2.star({2}) == {2}
    a3 = build_weyl("A3")
    assert [a3.opposition(i) for i in (1, 2, 3)] == [3, 2, 1]


def test_poincare_and_order() -> None:
    a1 = build_weyl("A1", torus_rank=1)
    assert a1.poincare(a1.coset_reps(a1.nodes)) == CountPolynomial.monomial(0)
    assert a1.order_poly().coeffs == (0, -1, 0, 1)
    assert a1.order_poly().factored() == "q*(q-1)*(1+q)"
    gl3 = build_weyl("A2", torus_rank=3)
    for q in (2, 3, 4, 5):
        assert gl3.order_poly().evaluate(q) == (q**3 - 1) * (q**3 - q) * (q**3 - q**2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_order_poly_classical_forms(q: int) -> None:
    # adjoint torus rank; the polynomial order is isogeny independent
    assert build_weyl("A3").order_poly().evaluate(q) == q**6 * (q**2 - 1) * (q**3 - 1) * (q**4 - 1)
    assert build_weyl("B2").order_poly().evaluate(q) == q**4 * (q**2 - 1) * (q**4 - 1)
    expected_rank3 = q**9 * (q**2 - 1) * (q**4 - 1) * (q**6 - 1)
    assert build_weyl("B3").order_poly().evaluate(q) == expected_rank3
    assert build_weyl("C3").order_poly().evaluate(q) == expected_rank3


@pytest.mark.parametrize("type_spec", ["A3", "B3", "G2"])
def test_poincare_factorization(type_spec: str) -> None:
    datum = build_weyl(type_spec)
    whole = datum.poincare(datum.elements)
    for nodes in datum.subsets():
        upper = datum.poincare(datum.coset_reps(nodes))
        assert upper * datum.poincare(datum.parabolic(nodes)) == whole
        assert len(datum.coset_reps(nodes)) * len(datum.parabolic(nodes)) == len(datum.elements)


def test_unipotent_codim(a2) -> None:
    assert a2.unipotent_codim(a2.nodes, a2.identity, a2.nodes) == 0
    for u in a2.elements:
        assert a2.unipotent_codim(set(), u, set()) == u.length
    assert a2.unipotent_codim({2}, a2.simple(1), {2}) == 2
    with pytest.raises(NotMinimalRep):
        a2.unipotent_codim({2}, a2.simple(2), {2})


@pytest.mark.parametrize(
    "J, word, K, expected",
    [
        (set(), (), {1, 2}, 3),
        ({1, 2}, (), set(), 0),
        ({1}, (), {1, 2}, 2),
        ({2}, (1,), set(), 1),
        (set(), (1,), {2}, 2),
    ],
)
def test_unipotent_codim_mixed_types(a2, J: set, word: tuple, K: set, expected: int) -> None:
    assert a2.unipotent_codim(J, a2.element_from_word(word), K) == expected


def test_parsers() -> None:
    assert parse_delta("2,1") == [2, 1]
    assert parse_delta("") is None
    assert parse_subset("") == frozenset()
    assert parse_subset("1,3") == {1, 3}
    assert parse_subset("13") == {1, 3}
    assert parse_subset("2") == {2}
    assert parse_subset("{1 2}") == {1, 2}
    assert parse_subset("12", rank=3) == {1, 2}
    assert parse_subset("1,12", rank=12) == {1, 12}
    with pytest.raises(ValueError, match="ambiguous"):
        parse_subset("12", rank=12)
