import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from src import dual_pairs
from src.dual_pairs import (
    construct_probability_uniform_parseval,
    frame_with_operator_and_norms,
    global_pair_optimum,
    majorization_check,
    pair_verdict,
    unique_pair_check_tight,
)
from src.erasure_model import measure_all, weights_from_probabilities
from src.errors import MajorizationFailed, NotDual, NotSorted, NotTight
from src.frame_core import canonical_dual, dual_from_params, dual_space, frame_operator
from src.models import Frame, MajorizationInstance


def _verdict_triple(verdict):
    return verdict.is_pod_pair, verdict.is_psod_pair, verdict.is_pasod_pair


def test_split_axis_pair_is_optimal(split_axis):
    F, M = split_axis
    assert _verdict_triple(pair_verdict(F, canonical_dual(F), M)) == (True, True, True)


def test_normalized_diagonal_pair_is_only_psod(normalized_diagonal):
    F, M = normalized_diagonal
    verdict = pair_verdict(F, canonical_dual(F), M)
    assert _verdict_triple(verdict) == (False, True, False)
    np.testing.assert_allclose(np.abs(verdict.inner_residuals), 0, atol=1e-12)


def test_mercedes_canonical_pair_satisfies_pair_conditions(mercedes):
    F, M = mercedes
    verdict = pair_verdict(F, canonical_dual(F), M)
    # <f_i, S^-1 f_i> = 2/3 = 1/q_i
    assert _verdict_triple(verdict) == (True, True, True)


def test_mercedes_frame_is_not_its_own_dual(mercedes):
    F, M = mercedes
    with pytest.raises(NotDual):
        pair_verdict(F, F, M)


def test_pair_verdict_serializes(split_axis):
    F, M = split_axis
    data = pair_verdict(F, canonical_dual(F), M).to_dict()
    assert data["is_POD_pair"] and data["is_PSOD_pair"] and data["is_PASOD_pair"]
    assert len(data["inner_residuals"]) == 3
    assert len(data["inner_residuals"][0]) == 2


def test_pod_pair_implies_other_pairs(rng):
    for _ in range(100):
        p = rng.dirichlet(np.ones(4))
        M = weights_from_probabilities(p, 2)
        F = construct_probability_uniform_parseval(M, 2)
        P = dual_space(F)
        scale = rng.choice([0.0, 1e-3, 1.0])
        G = dual_from_params(P, scale * rng.standard_normal(P.d))
        verdict = pair_verdict(F, G, M)
        if verdict.is_pod_pair:
            assert verdict.is_psod_pair and verdict.is_pasod_pair


def test_global_pair_optimum_attained_by_parseval_construction():
    assert global_pair_optimum() == 1
    M = weights_from_probabilities([0, 1 / 2, 1 / 2], 2)
    F = construct_probability_uniform_parseval(M, 2)
    reports = measure_all(F, canonical_dual(F), M, 1)
    for report in reports.values():
        assert report.value == pytest.approx(1, abs=1e-9)


def test_random_dual_pairs_stay_above_global_optimum(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        N = int(rng.integers(n + 1, n + 4))
        F = Frame.random(n, N, rng)
        P = dual_space(F)
        G = dual_from_params(P, rng.standard_normal(P.d) + 1j * rng.standard_normal(P.d))
        M = weights_from_probabilities(rng.dirichlet(np.ones(N)), n)
        for report in measure_all(F, G, M, 1).values():
            assert report.value >= 1 - 1e-9


@pytest.mark.parametrize(
    "spectrum, squared, expected",
    [
        ((1, 1), (2 / 3, 2 / 3, 2 / 3), True),
        ((1, 1), (1.5, 0.25, 0.25), False),
        ((2, 1), (1, 1, 1), True),
        ((1, 1), (0.5, 0.5, 0.5), False),
    ],
)
def test_majorization_check(spectrum, squared, expected):
    inst = MajorizationInstance.from_squared_norms(spectrum, squared)
    assert majorization_check(inst) is expected


def test_majorization_requires_sorted_input():
    with pytest.raises(NotSorted):
        majorization_check(MajorizationInstance.from_squared_norms((1, 2), (1, 1, 1)))
    with pytest.raises(NotSorted):
        majorization_check(MajorizationInstance.from_squared_norms((2, 1), (0.5, 1, 1.5)))


@given(
    raw=arrays(np.float64, st.integers(3, 9), elements=st.floats(0.01, 1.0)),
    n=st.integers(1, 2),
)
def test_inverse_weights_are_majorized(raw, n):
    p = raw / raw.sum()
    M = weights_from_probabilities(p, n)
    squared = np.sort(1 / M.q)[::-1]
    assert majorization_check(MajorizationInstance.from_squared_norms(np.ones(n), squared))


def test_construct_uniform_mercedes_case():
    M = weights_from_probabilities([1 / 3, 1 / 3, 1 / 3], 2)
    F = construct_probability_uniform_parseval(M, 2)
    np.testing.assert_allclose(frame_operator(F).matrix, np.eye(2), atol=1e-9)
    np.testing.assert_allclose(F.norms(), np.sqrt(2 / 3), atol=1e-9)


def test_construct_keeps_original_order():
    M = weights_from_probabilities([0, 1 / 2, 1 / 2], 2)
    F = construct_probability_uniform_parseval(M, 2)
    np.testing.assert_allclose(F.norms(), [1, 1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-9)
    np.testing.assert_allclose(frame_operator(F).matrix, np.eye(2), atol=1e-9)


def test_construct_fails_when_weights_below_one():
    M = weights_from_probabilities([0, 1 / 2, 1 / 2], 3)
    with pytest.raises(MajorizationFailed):
        construct_probability_uniform_parseval(M, 3)


def test_constructor_postconditions(rng):
    for trial in range(500):
        n = int(rng.integers(1, 6))
        N = int(rng.integers(n + 1, 2 * n + 4))
        M = weights_from_probabilities(rng.dirichlet(np.ones(N)), n)
        F = construct_probability_uniform_parseval(M, n)
        assert np.max(np.abs(frame_operator(F).matrix - np.eye(n))) <= 1e-9
        assert np.max(np.abs(F.norms() ** 2 - 1 / M.q)) <= 1e-9
        if trial < 50:
            G = canonical_dual(F)
            assert _verdict_triple(pair_verdict(F, G, M)) == (True, True, True)
            for report in measure_all(F, G, M, 1).values():
                assert report.value == pytest.approx(1, abs=1e-9)


def test_frame_with_operator_and_norms_orthonormal_basis():
    F = frame_with_operator_and_norms([1, 1], [1, 1])
    np.testing.assert_allclose(F.synthesis.conj().T @ F.synthesis, np.eye(2), atol=1e-12)


def test_frame_with_operator_and_norms_general_spectrum():
    F = frame_with_operator_and_norms([2, 1], [1, 1, 1])
    np.testing.assert_allclose(np.sort(frame_operator(F).eigenvalues()), [1, 2], atol=1e-9)
    np.testing.assert_allclose(F.norms(), 1, atol=1e-9)


def test_frame_with_operator_and_norms_unsorted_norms():
    F = frame_with_operator_and_norms([1, 1], [0.5, 1, np.sqrt(0.75)])
    np.testing.assert_allclose(F.norms(), [0.5, 1, np.sqrt(0.75)], atol=1e-9)
    np.testing.assert_allclose(frame_operator(F).matrix, np.eye(2), atol=1e-9)


def test_frame_with_operator_and_norms_rejects_unmajorized():
    with pytest.raises(MajorizationFailed):
        frame_with_operator_and_norms([1, 1], np.sqrt([1.5, 0.25, 0.25]))


def test_rotation_chain_fixes_one_coordinate_per_rotation(rng, monkeypatch):
    calls = []
    rotation_angle = dual_pairs._rotation_angle

    def counting(*args):
        calls.append(args)
        return rotation_angle(*args)

    monkeypatch.setattr(dual_pairs, "_rotation_angle", counting)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        N = int(rng.integers(n + 1, 2 * n + 5))
        spectrum = np.sort(rng.uniform(0.5, 3.0, n))[::-1]
        # rows of a unistochastic matrix mix the padded spectrum into majorized norms
        Q, _ = np.linalg.qr(rng.standard_normal((N, N)))
        squared = (Q**2) @ np.concatenate([spectrum, np.zeros(N - n)])

        calls.clear()
        F = frame_with_operator_and_norms(spectrum, np.sqrt(squared))
        assert len(calls) <= N - 1
        np.testing.assert_allclose(np.sort(frame_operator(F).eigenvalues())[::-1], spectrum, atol=1e-8)
        np.testing.assert_allclose(F.norms() ** 2, squared, atol=1e-8)


def test_unique_pair_tight(mercedes):
    F, M = mercedes
    report = unique_pair_check_tight(F, M)
    assert report
    assert report.c == pytest.approx(1.5)
    assert report.frame_bound == pytest.approx(1.5)
    assert report.pair_consistent is True

    uneven = weights_from_probabilities([1 / 2, 1 / 4, 1 / 4], 2)
    report = unique_pair_check_tight(F, uneven)
    assert not report
    assert report.c is None
    assert report.pair_consistent is None
    assert report.to_dict()["unique"] is False


def test_unique_pair_tight_for_parseval_construction():
    M = weights_from_probabilities([0.1, 0.2, 0.3, 0.4], 2)
    report = unique_pair_check_tight(construct_probability_uniform_parseval(M, 2), M)
    assert report.unique
    assert report.c == pytest.approx(1)
    assert report.pair_consistent is True


def test_unique_pair_requires_tight_frame(normalized_diagonal):
    F, M = normalized_diagonal
    with pytest.raises(NotTight):
        unique_pair_check_tight(F, M)
