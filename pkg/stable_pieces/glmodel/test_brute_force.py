from itertools import combinations

import pytest
from pydantic import ValidationError

from stable_pieces.config import GuardConfig
from stable_pieces.errors import TooLarge
from stable_pieces.glmodel.brute_force import (
    ModelConfig,
    all_flags,
    brute_force_partition,
    measure_unipotent_quotient,
    model_twisted_pair,
    unipotent_radical,
    verify_double_coset,
)
from stable_pieces.glmodel.filtration import gl_datum


def test_model_config_blocks() -> None:
    config = ModelConfig(mode="hyperplane_dual", d=3, q=2)
    assert config.blocks == [1, 2]
    assert config.blocks_p == [2, 1]
    assert config.dims() == [0, 1, 3]
    assert config.dims_p() == [0, 2, 3]
    assert config.size() == 294
    with pytest.raises(ValidationError):
        ModelConfig(mode="full", d=3, blocks=[2, 2])
    with pytest.raises(ValidationError):
        ModelConfig(mode="full", d=3, blocks=[1, 2], sigma=[1, 1])
    with pytest.raises(ValidationError):
        ModelConfig(d=2, q=4)


def test_all_flags_count() -> None:
    assert len(list(all_flags([0, 1, 2, 3], 3, 2))) == 21
    assert len(list(all_flags([0, 2, 3], 3, 3))) == 13


def test_model_twisted_pair() -> None:
    s3 = gl_datum(3)
    tp = model_twisted_pair(ModelConfig(mode="hyperplane_dual", d=3), s3)
    assert tp.J == {2}
    assert tp.Jp == {1}
    assert tp.y.length == 2
    assert model_twisted_pair(ModelConfig(mode="two_step_1dim", d=3), s3).y.is_identity()


def test_partition_d2_two_step() -> None:
    result = brute_force_partition(ModelConfig(mode="two_step_1dim", d=2, q=2))
    assert result.total == 9
    assert sorted(b.size for b in result.buckets) == [3, 6]
    assert all(b.size == b.predicted for b in result.buckets)
    assert result.classifier_agrees
    assert result.partial_positions_hold
    assert result.verdict


def test_partition_orientation_anchor() -> None:
    result = brute_force_partition(ModelConfig(mode="two_step_1dim", d=2, q=2))
    by_size = {b.size: b for b in result.buckets}
    assert by_size[3].signature[0]["u"] == []
    assert by_size[6].signature[0]["u"] == [1]
    assert by_size[3].labels == [1]
    assert by_size[6].labels == [2]


def test_partition_d2_hyperplane() -> None:
    result = brute_force_partition(ModelConfig(mode="hyperplane_dual", d=2, q=2))
    assert sorted(b.size for b in result.buckets) == [3, 6]
    assert result.verdict


def test_partition_d3_two_step() -> None:
    result = brute_force_partition(ModelConfig(mode="two_step_1dim", d=3, q=2))
    assert result.total == 294
    assert sorted(b.size for b in result.buckets) == [42, 84, 168]
    assert result.verdict
    payload = result.to_json()
    assert payload["verdict"] is True
    assert set(payload["buckets"][0]) >= {"signature", "size", "matched_sigma", "predicted"}


def test_partition_d3_hyperplane() -> None:
    result = brute_force_partition(ModelConfig(mode="hyperplane_dual", d=3, q=2))
    assert result.total == 294
    assert len(result.buckets) == 3
    assert result.classifier_agrees
    assert result.verdict


def test_partition_d3_complete_flags() -> None:
    result = brute_force_partition(ModelConfig(mode="full", d=3, q=2))
    assert result.total == 21 * 21
    assert result.unmatched_descriptors == 0
    assert result.verdict


@pytest.mark.slow
def test_partition_d2_q3() -> None:
    result = brute_force_partition(ModelConfig(mode="two_step_1dim", d=2, q=3))
    assert result.total == 64
    assert sorted(b.size for b in result.buckets) == [16, 48]
    assert result.verdict


@pytest.mark.slow
def test_partition_d3_q3_hyperplane() -> None:
    result = brute_force_partition(ModelConfig(mode="hyperplane_dual", d=3, q=3))
    assert len(result.buckets) == 3
    assert result.verdict


def test_partition_guard() -> None:
    with pytest.raises(TooLarge):
        brute_force_partition(ModelConfig(mode="full", d=4, q=3))
    with pytest.raises(TooLarge):
        brute_force_partition(ModelConfig(mode="two_step_1dim", d=2, q=2), GuardConfig(max_quadruples=8))


@pytest.mark.parametrize(
    "d,J,Jp,word,gamma",
    [
        (2, set(), set(), (), 1),
        (2, set(), set(), (1,), 1),
        (3, {2}, {2}, (), 6),
        (3, {2}, {1}, (2, 1), 6),
    ],
)
def test_verify_double_coset(d: int, J: set, Jp: set, word: tuple, gamma: int) -> None:
    datum = gl_datum(d)
    check = verify_double_coset(d, 2, frozenset(J), frozenset(Jp), datum.element_from_word(word))
    assert check.single_double_coset
    assert check.gamma_count == check.levi_order == gamma
    assert check.holds


def test_verify_double_coset_guard() -> None:
    datum = gl_datum(3)
    with pytest.raises(TooLarge):
        verify_double_coset(3, 2, frozenset(), frozenset(), datum.identity, GuardConfig(max_group_order=100))


def test_unipotent_radical_size() -> None:
    assert len(unipotent_radical([0, 1, 2, 3], 3, 2)) == 8
    assert len(unipotent_radical([0, 1, 3], 3, 3)) == 9
    assert len(unipotent_radical([0, 3], 3, 2)) == 1


def test_measure_unipotent_quotient() -> None:
    s3 = gl_datum(3)
    subsets = [frozenset(c) for k in range(3) for c in combinations((1, 2), k)]
    for J in subsets:
        for K in subsets:
            for u in s3.double_reps(J, K):
                expected = 2 ** s3.unipotent_codim(J, u, K)
                assert measure_unipotent_quotient(3, 2, J, u, K) == expected


def test_verdict_needs_every_quadruple() -> None:
    result = brute_force_partition(ModelConfig(mode="two_step_1dim", d=2, q=2))
    short = result.model_copy(update={"total": result.total - 1})
    assert result.verdict
    assert not short.verdict
    assert short.to_json()["verdict"] is False


@pytest.mark.slow
def test_partition_d2_q3_hyperplane() -> None:
    result = brute_force_partition(ModelConfig(mode="hyperplane_dual", d=2, q=3))
    assert result.total == 64
    assert sorted(b.size for b in result.buckets) == [16, 48]
    assert result.verdict


@pytest.mark.slow
def test_partition_d3_q3_two_step() -> None:
    result = brute_force_partition(ModelConfig(mode="two_step_1dim", d=3, q=3))
    assert result.total == 16224
    assert sorted(b.size for b in result.buckets) == [1248, 3744, 11232]
    assert all(b.size == b.predicted for b in result.buckets)
    assert result.verdict
