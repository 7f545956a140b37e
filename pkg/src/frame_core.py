"""
Dense linear algebra for finite frames in C^n.

Inner products are linear in the first argument: <x, y> = y^* x.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
import scipy.linalg

from .config import RANK_FACTOR, TOL_CHECK, TOL_DUAL, TOL_SYM
from .errors import DimensionMismatch, NotDual, NotTight, NotUnitary, RankDeficient
from .models import DualParameterization, Frame, FrameOperator

logger = logging.getLogger(__name__)


def rank_threshold(
    matrix: np.ndarray, singular_values: np.ndarray, factor: float = RANK_FACTOR
) -> float:
    """Singular values at or below this are treated as zero"""
    if singular_values.size == 0:
        return 0.0
    return max(matrix.shape) * float(singular_values[0]) * factor


def numerical_rank(matrix: np.ndarray, factor: float = RANK_FACTOR) -> int:
    """Rank of a (possibly empty) matrix with the shared threshold"""
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rank_threshold(matrix, s, factor)))


def _require_frame(F: Frame) -> None:
    T = F.synthesis
    n, N = T.shape
    if N < n:
        raise RankDeficient(f"{N} vectors cannot span C^{n}")
    s = np.linalg.svd(T, compute_uv=False)
    if s[0] == 0 or s[-1] <= rank_threshold(T, s):
        raise RankDeficient(
            f"vectors do not span C^{n} (smallest singular value {s[-1]:.3e})"
        )


def frame_operator(F: Frame) -> FrameOperator:
    """
    Compute the frame operator S_F = sum_i f_i f_i^*.

    Raises:
        RankDeficient: If the vectors do not span the space
    """
    _require_frame(F)
    T = F.synthesis
    S = T @ T.conj().T
    return FrameOperator((S + S.conj().T) / 2)


def frame_bounds(F: Frame) -> tuple:
    """Optimal frame bounds (A, B): extreme eigenvalues of S_F"""
    eigenvalues = frame_operator(F).eigenvalues()
    return float(eigenvalues[0]), float(eigenvalues[-1])


def is_tight(F: Frame, tol: float = TOL_CHECK) -> bool:
    A, B = frame_bounds(F)
    return B - A <= tol * B


def require_tight(F: Frame, tol: float = TOL_CHECK) -> tuple:
    """Frame bounds of a tight frame; raises NotTight otherwise"""
    A, B = frame_bounds(F)
    if B - A > tol * B:
        raise NotTight(f"frame bounds differ: A={A:.12g}, B={B:.12g}")
    return A, B


def is_constant(values: np.ndarray, tol: float = TOL_CHECK) -> bool:
    """All entries equal to relative tol"""
    values = np.asarray(values, dtype=float)
    return float(np.max(values) - np.min(values)) <= tol * float(np.max(np.abs(values)))


def canonical_dual(F: Frame) -> Frame:
    """Canonical dual {S_F^-1 f_i}, by a Cholesky solve against all columns"""
    S = frame_operator(F)
    return Frame(scipy.linalg.solve(S.matrix, F.synthesis, assume_a="pos"))


def _require_same_shape(F: Frame, G: Frame) -> None:
    if F.synthesis.shape != G.synthesis.shape:
        raise DimensionMismatch(
            f"frames have shapes {F.synthesis.shape} and {G.synthesis.shape}"
        )


def is_dual(F: Frame, G: Frame, tol: float = TOL_DUAL) -> bool:
    """
    Check the reconstruction identity f = sum_i <f, f_i> g_i.

    In matrix form T_G T_F^* = I with max-norm error at most tol. The trace
    identity sum_i <g_i, f_i> = n is held to the same absolute tol, so small
    diagonal errors of one sign cannot add up.
    """
    _require_same_shape(F, G)
    n = F.dimension
    R = G.synthesis @ F.synthesis.conj().T
    if np.max(np.abs(R - np.eye(n))) > tol:
        return False
    return abs(np.trace(R) - n) <= tol


def dual_space(F: Frame, rank_factor: float = RANK_FACTOR) -> DualParameterization:
    """
    Parameterize all duals of F as canonical dual + null-space perturbations.

    The null space of the synthesis matrix is computed by SVD; perturbation
    U^(j,m) = e_j k_m^* for j < n and m < N - n, ordered j-major.
    """
    _require_frame(F)
    T = F.synthesis
    n, N = T.shape
    base = canonical_dual(F)

    K = scipy.linalg.null_space(T, rcond=max(n, N) * rank_factor)
    rank = N - K.shape[1]

    basis = np.zeros((n * K.shape[1], n, N), dtype=np.complex128)
    for j in range(n):
        for m in range(K.shape[1]):
            basis[j * K.shape[1] + m, j, :] = K[:, m].conj()

    logger.debug("dual space of %dx%d frame: d=%d", n, N, basis.shape[0])
    return DualParameterization(frame=F, base=base, basis=basis, null_space=K, rank=rank)


def dual_from_params(P: DualParameterization, c: Sequence[complex]) -> Frame:
    """Dual frame base + sum_k c_k U^(k)"""
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    if c.size != P.d:
        raise DimensionMismatch(f"expected {P.d} coefficients, got {c.size}")
    if P.d == 0:
        return Frame(P.base.synthesis.copy())
    return Frame(P.base.synthesis + np.tensordot(c, P.basis, axes=1))


def project_dual(P: DualParameterization, G: Frame, tol: float = TOL_DUAL) -> np.ndarray:
    """
    Coefficients of a dual G in the parameterization P.

    Raises:
        NotDual: If G is not a dual of the parameterized frame
    """
    if not is_dual(P.frame, G, tol):
        raise NotDual("frame is not a dual of the parameterized frame")
    difference = G.synthesis - P.base.synthesis
    # row j of the difference is sum_m c_{jm} k_m^*
    return (difference @ P.null_space).reshape(-1)


def apply_unitary(U: np.ndarray, F: Frame, tol: float = TOL_SYM) -> Frame:
    """
    Transport a frame by a unitary matrix: {U f_i}.

    Raises:
        NotUnitary: If U^* U differs from I by more than tol
    """
    U = np.asarray(U, dtype=np.complex128)
    n = F.dimension
    if U.shape != (n, n):
        raise NotUnitary(f"expected a {n}x{n} matrix, got shape {U.shape}")
    if np.max(np.abs(U.conj().T @ U - np.eye(n))) > tol:
        raise NotUnitary("U^* U is not the identity")
    return Frame(U @ F.synthesis)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix"""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases
