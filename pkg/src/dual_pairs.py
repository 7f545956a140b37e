"""
Joint (frame, dual) optimality for one erasure and construction of
probability uniform Parseval frames.

A pair (F, G) reaches the global optimum 1 exactly when its per-index
quantities match 1/q_i; probability uniform Parseval frames
(||f_i||^2 = 1/q_i) with their canonical duals are such pairs, and they are
built from a majorization certificate by plane rotations.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from .config import TOL_CHECK, TOL_DUAL, TOL_MAJORIZATION
from .errors import DimensionMismatch, MajorizationFailed, NotDual, NotSorted
from .frame_core import canonical_dual, is_constant, is_dual, require_tight
from .models import Frame, MajorizationInstance, ProbabilityModel, PairVerdict, TightPairReport

logger = logging.getLogger(__name__)

GLOBAL_PAIR_OPTIMUM = 1.0


def pair_verdict(
    F: Frame, G: Frame, M: ProbabilityModel, tol: float = TOL_CHECK, dual_tol: float = TOL_DUAL
) -> PairVerdict:
    """
    Classify a dual pair.

    PSOD pair: <f_i, g_i> = 1/q_i. POD pair: <f_i, g_i> = ||f_i|| ||g_i||
    = 1/q_i. PASOD pair: |<f_i, g_i>| = ||f_i|| ||g_i|| = 1/q_i.

    Raises:
        NotDual: If G is not a dual of F
    """
    if not is_dual(F, G, dual_tol):
        raise NotDual("pair verdicts require G to be a dual of F")

    target = 1 / M.q
    inner = np.sum(F.synthesis * G.synthesis.conj(), axis=0)
    norms = F.norms() * G.norms()

    inner_residuals = inner - target
    modulus_residuals = np.abs(inner) - target
    norm_residuals = norms - target

    inner_ok = bool(np.all(np.abs(inner_residuals) <= tol))
    modulus_ok = bool(np.all(np.abs(modulus_residuals) <= tol))
    norm_ok = bool(np.all(np.abs(norm_residuals) <= tol))

    return PairVerdict(
        is_pod_pair=inner_ok and norm_ok,
        is_psod_pair=inner_ok,
        is_pasod_pair=modulus_ok and norm_ok,
        modulus_residuals=modulus_residuals,
        inner_residuals=inner_residuals,
        norm_residuals=norm_residuals,
    )


def global_pair_optimum() -> float:
    """Smallest single-erasure O, r and A value over all dual pairs"""
    return GLOBAL_PAIR_OPTIMUM


def _require_nonincreasing(values: np.ndarray, name: str) -> None:
    if np.any(np.diff(values) > 0):
        raise NotSorted(f"{name} must be sorted nonincreasing: {values.tolist()}")


def majorization_check(inst: MajorizationInstance, tol: float = TOL_MAJORIZATION) -> bool:
    """
    Partial sums of a_i^2 stay below those of the spectrum and totals agree.

    Raises:
        NotSorted: If either sequence is not nonincreasing
    """
    spectrum, norms = inst.spectrum, inst.norms
    _require_nonincreasing(spectrum, "spectrum")
    _require_nonincreasing(norms, "norms")
    if norms.size < spectrum.size:
        raise DimensionMismatch(
            f"{norms.size} norms cannot carry a spectrum of length {spectrum.size}"
        )

    squared = np.cumsum(norms**2)
    budget = np.cumsum(spectrum)
    scale = max(1.0, float(budget[-1]))
    k = spectrum.size
    if np.any(squared[:k] > budget + tol * scale):
        return False
    return bool(abs(squared[-1] - budget[-1]) <= tol * scale)


def _rotation_angle(alpha: float, gamma: float, beta: float, target: float) -> float:
    """
    Angle t with cos^2 alpha + sin^2 gamma + 2 sin cos beta = target.

    Requires target between the eigenvalues of [[alpha, beta], [beta, gamma]].
    """
    mid = (alpha + gamma) / 2
    half = (alpha - gamma) / 2
    radius = np.hypot(half, beta)
    if radius == 0:
        return 0.0
    phase = np.arctan2(beta, half)
    return (phase + np.arccos(np.clip((target - mid) / radius, -1.0, 1.0))) / 2


def _schur_horn(
    spectrum: np.ndarray, squared_norms: np.ndarray, tol: float = TOL_MAJORIZATION
) -> np.ndarray:
    """
    Rows n of an orthogonal N x N matrix Q with diag(Q^T D Q) = squared_norms.

    D = diag(spectrum, 0, ..., 0). Both inputs are sorted nonincreasing and
    majorized.

    Each rotation is a T-transform on a pair (j, k): j is the last diagonal
    entry above its target and k the first entry below target after j. Every
    entry strictly between them is already on target, so the rotation only
    trades mass between j and k. It puts one of the two on target and moves
    the other toward its own, which leaves the remaining diagonal majorizing
    the remaining targets, so a valid (j, k) pair exists again at the next
    step. A coordinate placed on target is never paired again, so the chain
    ends after at most N - 1 rotations.
    """
    n, N = spectrum.size, squared_norms.size
    diagonal = np.concatenate([spectrum, np.zeros(N - n)])
    M = np.diag(diagonal)
    Q = np.eye(N)
    scale = max(1.0, float(np.sum(spectrum)))

    for _ in range(N):
        gaps = np.diag(M) - squared_norms
        above = np.flatnonzero(gaps > tol * scale)
        if above.size == 0:
            break
        j = int(above[-1])
        below = np.flatnonzero(gaps[j + 1:] < -tol * scale)
        if below.size == 0:
            raise MajorizationFailed("no coordinate below target after an above-target one")
        k = j + 1 + int(below[0])

        alpha, gamma, beta = M[j, j], M[k, k], M[j, k]
        if gaps[j] <= -gaps[k]:
            target = squared_norms[j]
        else:
            target = alpha + gamma - squared_norms[k]
        t = _rotation_angle(alpha, gamma, beta, target)

        c, s = np.cos(t), np.sin(t)
        rotation = np.eye(N)
        rotation[[j, k, j, k], [j, j, k, k]] = [c, s, -s, c]
        M = rotation.T @ M @ rotation
        Q = Q @ rotation

    if np.max(np.abs(np.diag(M) - squared_norms)) > 1e-9 * scale:
        raise MajorizationFailed("rotation chain did not reach the prescribed diagonal")
    return Q[:n, :]


def frame_with_operator_and_norms(
    spectrum: Sequence[float], norms: Sequence[float], tol: float = TOL_MAJORIZATION
) -> Frame:
    """
    Frame whose frame operator is diag(spectrum) and with ||f_i|| = norms[i].

    Inputs may be in any order; the result keeps the order of norms.

    Raises:
        MajorizationFailed: If the squared norms are not majorized by the spectrum
    """
    spectrum = np.sort(np.asarray(spectrum, dtype=float))[::-1]
    norms = np.asarray(norms, dtype=float)
    if np.any(spectrum <= 0):
        raise MajorizationFailed("spectrum must be positive")
    if norms.size < spectrum.size:
        raise DimensionMismatch(
            f"{norms.size} vectors cannot span a space of dimension {spectrum.size}"
        )

    order = np.argsort(-norms, kind="stable")
    instance = MajorizationInstance(spectrum, norms[order])
    if not majorization_check(instance, tol):
        raise MajorizationFailed(
            f"squared norms {np.round(norms**2, 12).tolist()} are not majorized "
            f"by spectrum {spectrum.tolist()}"
        )

    rows = _schur_horn(spectrum, instance.norms**2, tol)
    synthesis = np.sqrt(spectrum)[:, None] * rows
    unsorted = np.empty_like(synthesis)
    unsorted[:, order] = synthesis
    return Frame(unsorted)


def construct_probability_uniform_parseval(
    M: ProbabilityModel, n: int, tol: float = TOL_MAJORIZATION
) -> Frame:
    """
    Parseval frame with ||f_i|| = 1/sqrt(q_i) in the original index order.

    Raises:
        MajorizationFailed: If some q_i < 1 (possible only when N = n)
    """
    if M.dimension != n:
        raise DimensionMismatch(f"weights were derived for dimension {M.dimension}, not {n}")
    return frame_with_operator_and_norms(np.ones(n), 1 / np.sqrt(M.q), tol)


def unique_pair_check_tight(
    F: Frame, M: ProbabilityModel, tol: float = TOL_CHECK
) -> TightPairReport:
    """
    For a tight frame: (F, canonical) is the unique optimal pair iff
    q_i ||f_i||^2 is constant.

    The report is truthy exactly when the pair is unique. For a unique pair
    it also records whether the pair verdict of (F, canonical) agrees with
    c == A, the condition the pair identities impose on the constant c.
    """
    A, _ = require_tight(F, tol)
    weighted = M.q * F.norms() ** 2
    if not is_constant(weighted, tol):
        return TightPairReport(unique=False, frame_bound=A)

    c = float(np.mean(weighted))
    verdict = pair_verdict(F, canonical_dual(F), M, tol=tol)
    consistent = verdict.is_pod_pair == (abs(c - A) <= tol * A)
    if not consistent:
        logger.error("pair verdict disagrees with c = %.12g, A = %.12g", c, A)
    return TightPairReport(unique=True, frame_bound=A, c=c, pair_consistent=consistent)
