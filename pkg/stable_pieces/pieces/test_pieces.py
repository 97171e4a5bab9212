import pytest

from stable_pieces.config import GuardConfig
from stable_pieces.errors import InadmissibleChoice, InvalidTwistedPair, NoStabilization
from stable_pieces.pieces import PieceEnumerator, PieceState, TwistedPair
from stable_pieces.weyl import CountPolynomial, build_weyl


@pytest.fixture(scope="module")
def a2():
    return build_weyl("A2")


@pytest.fixture(scope="module")
def a2_pieces(a2):
    return PieceEnumerator(a2)


def test_twisted_pair_validation(a2) -> None:
    tp = TwistedPair.create(a2, frozenset({1}), a2.parse_word("s1 s2"))
    assert tp.Jp == {2}
    with pytest.raises(InvalidTwistedPair):
        TwistedPair.create(a2, frozenset({1}), a2.parse_word("s1"))
    with pytest.raises(InvalidTwistedPair):
        TwistedPair.create(a2, frozenset({1}), a2.parse_word("s2 s1"))
    with pytest.raises(InvalidTwistedPair):
        TwistedPair.create(a2, frozenset({3}))


def test_step_whole_group(a2, a2_pieces) -> None:
    state = a2_pieces.initial_state(TwistedPair.create(a2, a2.nodes))
    successor = a2_pieces.step(state, a2.identity)
    assert successor.same_data(state)
    assert (successor.J, successor.Jp, successor.y) == (a2.nodes, a2.nodes, a2.identity)


def test_step_empties_on_non_simple_conjugate(a2, a2_pieces) -> None:
    state = a2_pieces.initial_state(TwistedPair.create(a2, frozenset({2})))
    successor = a2_pieces.step(state, a2.simple(1))
    assert successor.J == frozenset()
    assert successor.Jp == frozenset()
    assert successor.y == a2.simple(1)
    assert successor.prevJ == {2}


def test_step_from_empty_subset(a2, a2_pieces) -> None:
    y = a2.simple(2)
    state = a2_pieces.initial_state(TwistedPair.create(a2, frozenset(), y))
    for u in a2_pieces.admissible_choices(state):
        successor = a2_pieces.step(state, u)
        assert successor.J == successor.Jp == frozenset()
        assert successor.y == u.inverse() * y


def test_step_rejects_inadmissible(a2, a2_pieces) -> None:
    state = a2_pieces.initial_state(TwistedPair.create(a2, frozenset({2})))
    with pytest.raises(InadmissibleChoice):
        a2_pieces.step(state, a2.simple(2))


def test_admissible_choices(a2, a2_pieces) -> None:
    whole = a2_pieces.initial_state(TwistedPair.create(a2, a2.nodes))
    assert a2_pieces.admissible_choices(whole) == (a2.identity,)
    inner = PieceState(n=1, J=frozenset(), Jp=frozenset(), y=a2.simple(1), prevJ=frozenset({2}))
    assert set(a2_pieces.admissible_choices(inner)) == {a2.identity, a2.simple(2)}
    tail = PieceState(n=3, J=frozenset(), Jp=frozenset(), y=a2.w0, prevJ=frozenset())
    assert a2_pieces.admissible_choices(tail) == (a2.identity,)


def test_enumerate_a1_empty() -> None:
    a1 = build_weyl("A1", torus_rank=1)
    pieces = PieceEnumerator(a1).enumerate(TwistedPair.create(a1, frozenset()))
    assert [sigma.w.length for sigma in pieces] == [0, 1]
    assert [sigma.exponent for sigma in pieces] == [-1, 0]
    assert pieces[0].count == CountPolynomial.from_coeffs([-1, 0, 1])


def test_enumerate_a2_hand_example(a2, a2_pieces) -> None:
    pieces = a2_pieces.enumerate(TwistedPair.create(a2, frozenset({2})))
    assert [repr(sigma.w) for sigma in pieces] == ["e", "s1", "s1 s2"]
    assert [sigma.r for sigma in pieces] == [0, 1, 2]
    last = pieces[-1]
    assert [repr(u) for u in last.us] == ["s1", "s2", "e"]
    assert a2_pieces.orbit_data(last) == (frozenset(), a2.parse_word("s2 s1"))
    assert a2_pieces.orbit_data(pieces[0]) == ({2}, a2.identity)


def test_enumerate_whole_group(a2, a2_pieces) -> None:
    (sigma,) = a2_pieces.enumerate(TwistedPair.create(a2, a2.nodes))
    assert sigma.w == a2.identity
    assert sigma.count == a2.order_poly()
    assert sigma.dim == 8
    assert a2_pieces.orbit_data(sigma) == (a2.nodes, a2.identity)


def test_orbit_data_single_update(a2, a2_pieces) -> None:
    y = a2.simple(1)
    for sigma in a2_pieces.enumerate(TwistedPair.create(a2, frozenset(), y)):
        assert sigma.us[0] == sigma.w
        assert a2_pieces.orbit_data(sigma) == (frozenset(), sigma.w.inverse() * y)


def test_piece_count_quotient() -> None:
    a1 = build_weyl("A1", torus_rank=1)
    enumerator = PieceEnumerator(a1)
    trivial, reflection = enumerator.enumerate(TwistedPair.create(a1, frozenset()))
    assert enumerator.piece_count(reflection, quotient_by_delta=True).coeffs == (0, 1, 1)
    assert enumerator.piece_count(trivial, quotient_by_delta=True).coeffs == (1, 1)
    (whole,) = enumerator.enumerate(TwistedPair.create(a1, a1.nodes))
    assert enumerator.piece_count(whole) == a1.order_poly()
    assert enumerator.piece_count(whole, quotient_by_delta=True) == a1.order_poly()


@pytest.mark.parametrize(
    "type_spec, J, expected",
    [("A1", frozenset(), (1, 1)), ("A2", frozenset({2}), (1, 1, 1)), ("A2", frozenset({1, 2}), (1,))],
)
def test_verify_sum_examples(type_spec: str, J, expected) -> None:
    datum = build_weyl(type_spec)
    check = PieceEnumerator(datum).verify_sum(TwistedPair.create(datum, J))
    assert check.holds
    assert check.lhs.coeffs == expected
    assert check.rhs.coeffs == expected


@pytest.mark.parametrize(
    "type_spec, delta",
    [("A1", None), ("A2", None), ("A2", [2, 1]), ("A3", None), ("A3", [3, 2, 1]),
     ("B2", None), ("B3", None), ("G2", None)],
)
def test_sweep_invariants(type_spec: str, delta) -> None:
    datum = build_weyl(type_spec, delta=delta)
    enumerator = PieceEnumerator(datum)
    pairs = enumerator.valid_pairs()
    assert pairs
    for tp in pairs:
        check = enumerator.verify_sum(tp)
        assert check.holds, check.to_json()
        for sigma in enumerator.enumerate(tp):
            fibres = enumerator.fibre_dims(sigma)
            assert all(f >= 0 for f in fibres)
            assert sum(fibres) == sigma.w.length + datum.nu(tp.J) - datum.nu(sigma.J_inf)
            assert sigma.exponent >= -datum.num_positive
            assert sigma.steps[0].u in datum.double_reps(tp.Jp, tp.J)
            for prev, current in zip(sigma.steps, sigma.steps[1:]):
                assert current.J <= prev.J and current.Jp <= prev.J
                assert current.u in datum.parabolic(prev.J)
            assert sigma.steps[-1].u.is_identity()
            assert sigma.J_inf == sigma.steps[-1].Jp


@pytest.mark.parametrize("type_spec", ["A2", "A3", "B3"])
def test_partial_products_are_injective(type_spec: str) -> None:
    datum = build_weyl(type_spec)
    enumerator = PieceEnumerator(datum)
    for tp in enumerator.valid_pairs():
        pieces = enumerator.enumerate(tp)
        assert len({sigma.partial_products() for sigma in pieces}) == len(pieces)
        assert len({sigma.w for sigma in pieces}) == len(pieces)


def test_enumeration_is_deterministic(a2, a2_pieces) -> None:
    tp = TwistedPair.create(a2, frozenset())
    first = [a2_pieces.descriptor_json(sigma) for sigma in a2_pieces.enumerate(tp)]
    second = [a2_pieces.descriptor_json(sigma) for sigma in a2_pieces.enumerate(tp)]
    assert first == second
    keys = [sigma.sort_key() for sigma in a2_pieces.enumerate(tp)]
    assert keys == sorted(keys)


def test_descriptor_json_schema(a2, a2_pieces) -> None:
    sigma = a2_pieces.enumerate(TwistedPair.create(a2, frozenset({2})))[-1]
    payload = a2_pieces.descriptor_json(sigma)
    assert set(payload) == {"J", "Jprime", "y", "steps", "w", "Jinf", "twist", "exponent", "count", "dim"}
    assert payload["w"] == [1, 2]
    assert payload["twist"] == [2, 1]
    assert payload["steps"][1] == {"Jn": [], "Jpn": [], "un": [2]}
    assert payload["exponent"] == 2 + 1 - 3


def test_guard_fires(a2) -> None:
    enumerator = PieceEnumerator(a2, GuardConfig(iteration_slack=-8))
    with pytest.raises(NoStabilization):
        enumerator.enumerate(TwistedPair.create(a2, frozenset({2})))


def test_uncancelled_identity_values(a2, a2_pieces) -> None:
    check = a2_pieces.verify_sum(TwistedPair.create(a2, frozenset({2})))
    total, expected = check.uncancelled[2]
    assert total == expected == 7 * 7 * 6
