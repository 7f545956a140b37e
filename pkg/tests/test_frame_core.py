import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.errors import DimensionMismatch, NotDual, NotUnitary, RankDeficient
from src.frame_core import (
    apply_unitary,
    canonical_dual,
    dual_from_params,
    dual_space,
    frame_bounds,
    frame_operator,
    is_dual,
    is_tight,
    project_dual,
    random_unitary,
)
from src.models import Frame

SQRT2 = np.sqrt(2)


def test_frame_operator_of_diagonal_frame(normalized_diagonal):
    F, _ = normalized_diagonal
    np.testing.assert_allclose(frame_operator(F).matrix, [[1.5, 0.5], [0.5, 1.5]], atol=1e-12)


def test_frame_operator_of_orthonormal_basis():
    F = Frame.from_vectors([(1, 0), (0, 1)])
    np.testing.assert_allclose(frame_operator(F).matrix, np.eye(2), atol=1e-15)


def test_frame_operator_of_unnormalized_diagonal(unnormalized_diagonal):
    F, _ = unnormalized_diagonal
    np.testing.assert_allclose(frame_operator(F).matrix, [[2, 1], [1, 2]], atol=1e-12)


def test_frame_operator_is_hermitian(rng):
    F = Frame.random(3, 7, rng)
    S = frame_operator(F).matrix
    assert np.max(np.abs(S - S.conj().T)) <= 1e-14


def test_rank_deficient_frame_is_rejected():
    F = Frame.from_vectors([(1, 0), (2, 0), (-1, 0)])
    with pytest.raises(RankDeficient):
        frame_operator(F)
    with pytest.raises(RankDeficient):
        canonical_dual(Frame.from_vectors([(1, 0)]))


@pytest.mark.parametrize(
    "name, bounds",
    [("split_axis", (0.5, 1.0)), ("unnormalized_diagonal", (1.0, 3.0)), ("mercedes", (1.5, 1.5))],
)
def test_frame_bounds(request, name, bounds):
    F, _ = request.getfixturevalue(name)
    np.testing.assert_allclose(frame_bounds(F), bounds, atol=1e-12)


def test_parseval_frame_bounds_are_one(mercedes):
    F, _ = mercedes
    parseval = Frame(F.synthesis * np.sqrt(2 / 3))
    np.testing.assert_allclose(frame_bounds(parseval), (1, 1), atol=1e-12)
    assert is_tight(parseval)


def test_frame_inequality_holds_for_random_signals(rng):
    F = Frame.random(3, 6, rng)
    A, B = frame_bounds(F)
    for _ in range(1000):
        f = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        f /= np.linalg.norm(f)
        energy = np.sum(np.abs(F.synthesis.conj().T @ f) ** 2)
        assert A * (1 - 1e-9) <= energy <= B * (1 + 1e-9)


def test_canonical_dual_of_normalized_diagonal(normalized_diagonal):
    F, _ = normalized_diagonal
    c = 1 / (2 * SQRT2)
    expected = Frame.from_vectors([(0.75, -0.25), (-0.25, 0.75), (c, c)])
    np.testing.assert_allclose(canonical_dual(F).synthesis, expected.synthesis, atol=1e-12)


def test_canonical_dual_of_unnormalized_diagonal(unnormalized_diagonal):
    F, _ = unnormalized_diagonal
    expected = Frame.from_vectors([(2, -1), (-1, 2), (1, 1)]).synthesis / 3
    np.testing.assert_allclose(canonical_dual(F).synthesis, expected, atol=1e-12)


def test_canonical_dual_of_tight_frame_is_scaled_frame(mercedes):
    F, _ = mercedes
    np.testing.assert_allclose(canonical_dual(F).synthesis, F.synthesis / 1.5, atol=1e-12)


def test_canonical_dual_reconstructs(rng):
    for _ in range(20):
        F = Frame.random(4, 9, rng)
        G = canonical_dual(F)
        R = G.synthesis @ F.synthesis.conj().T
        assert np.max(np.abs(R - np.eye(4))) <= 1e-10
        assert abs(np.trace(R) - 4) <= 1e-9


def test_split_axis_dual_family(split_axis):
    F, _ = split_axis
    alpha = beta = 0.3
    family = Frame.from_vectors([(1, 0), (alpha, 1 + beta), (-alpha, 1 - beta)])
    assert is_dual(F, family)
    assert is_dual(F, canonical_dual(F))
    assert not is_dual(F, F)


def test_is_dual_shape_mismatch(split_axis):
    F, _ = split_axis
    with pytest.raises(DimensionMismatch):
        is_dual(F, Frame.from_vectors([(1, 0), (0, 1)]))


def test_is_dual_holds_trace_to_the_same_tolerance(unnormalized_diagonal):
    F, _ = unnormalized_diagonal
    G = canonical_dual(F).synthesis
    # each diagonal entry of T_G T_F^* off by 0.6 tol
    same_sign = Frame(np.diag([1 + 6e-7, 1 + 6e-7]) @ G)
    opposite = Frame(np.diag([1 + 6e-7, 1 - 6e-7]) @ G)
    assert not is_dual(F, same_sign, tol=1e-6)
    assert is_dual(F, opposite, tol=1e-6)
    assert is_dual(F, same_sign, tol=2e-6)


def test_dual_space_dimensions(split_axis, unnormalized_diagonal):
    for F, _ in (split_axis, unnormalized_diagonal):
        P = dual_space(F)
        assert P.d == 2
        assert P.rank == 2
    basis = Frame.from_vectors([(1, 1j), (0, 2)])
    assert dual_space(basis).d == 0


def test_dual_space_perturbations_are_annihilated(rng):
    F = Frame.random(3, 7, rng)
    P = dual_space(F)
    assert P.d == 3 * 4
    for k in range(P.d):
        product = F.synthesis @ P.perturbation(k).synthesis.conj().T
        assert np.max(np.abs(product)) <= 1e-10
    flat = P.basis.reshape(P.d, -1)
    assert np.linalg.matrix_rank(flat) == P.d


def test_split_axis_perturbation_family(split_axis):
    F, _ = split_axis
    P = dual_space(F)
    for k in range(P.d):
        U = P.perturbation(k).synthesis
        # (0, 0), (a, b), (-a, -b) pattern
        np.testing.assert_allclose(U[:, 0], 0, atol=1e-12)
        np.testing.assert_allclose(U[:, 1], -U[:, 2], atol=1e-12)


def test_dual_from_zero_params_is_canonical(unnormalized_diagonal):
    F, _ = unnormalized_diagonal
    P = dual_space(F)
    np.testing.assert_allclose(
        dual_from_params(P, np.zeros(P.d)).synthesis, canonical_dual(F).synthesis
    )


def test_shifted_unnormalized_diagonal_dual_round_trips(unnormalized_diagonal):
    F, _ = unnormalized_diagonal
    P = dual_space(F)
    shifted = Frame.from_vectors([(0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)])
    c = project_dual(P, shifted)
    np.testing.assert_allclose(dual_from_params(P, c).synthesis, shifted.synthesis, atol=1e-12)


def test_dual_from_params_wrong_length(split_axis):
    F, _ = split_axis
    with pytest.raises(DimensionMismatch):
        dual_from_params(dual_space(F), [1.0])


def test_random_params_give_duals_and_project_back(rng):
    for _ in range(25):
        F = Frame.random(2, 5, rng)
        P = dual_space(F)
        c = rng.standard_normal(P.d) + 1j * rng.standard_normal(P.d)
        G = dual_from_params(P, c)
        assert is_dual(F, G)
        np.testing.assert_allclose(project_dual(P, G), c, atol=1e-9)


def test_project_rejects_non_dual(split_axis):
    F, _ = split_axis
    with pytest.raises(NotDual):
        project_dual(dual_space(F), F)


def test_apply_identity_keeps_frame(split_axis):
    F, _ = split_axis
    np.testing.assert_allclose(apply_unitary(np.eye(2), F).synthesis, F.synthesis)


def test_rotation_keeps_bounds(split_axis):
    F, _ = split_axis
    rotation = np.array([[0, -1], [1, 0]])
    rotated = apply_unitary(rotation, F)
    np.testing.assert_allclose(rotated.vector(0), [0, 1], atol=1e-15)
    np.testing.assert_allclose(frame_bounds(rotated), (0.5, 1.0), atol=1e-12)


def test_apply_non_unitary_raises(split_axis):
    F, _ = split_axis
    with pytest.raises(NotUnitary):
        apply_unitary(2 * np.eye(2), F)
    with pytest.raises(NotUnitary):
        apply_unitary(np.eye(3), F)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1), perturbed=st.booleans())
def test_unitary_transport_preserves_duality(seed, perturbed):
    rng = np.random.default_rng(seed)
    F = Frame.random(3, 5, rng)
    G = canonical_dual(F)
    if perturbed:
        G = Frame(G.synthesis + 0.1 * rng.standard_normal(G.synthesis.shape))
    U = random_unitary(3, rng)
    assert is_dual(F, G) == is_dual(apply_unitary(U, F), apply_unitary(U, G))
