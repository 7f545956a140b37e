"""
Erasure probabilities, weight numbers, error operators and the worst-case
erasure measures O (operator norm), r (spectral radius) and A (their mean).
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .config import TOL_NORMALIZED, TOL_TIE
from .errors import (
    BadMultiplicity,
    DegenerateProbability,
    DimensionMismatch,
    NotNormalized,
)
from .models import (
    ErasurePattern,
    ErrorOperator,
    Frame,
    MeasureKind,
    MeasureReport,
    PatternValue,
    ProbabilityModel,
)

logger = logging.getLogger(__name__)


def weights_from_probabilities(p: Sequence[float], n: int) -> ProbabilityModel:
    """
    Derive weight numbers q_i = (sum p / (sum p - p_i)) * (N - 1) / n.

    Args:
        p: Erasure probabilities, one per frame vector, summing to 1
        n: Dimension of the space

    Returns:
        ProbabilityModel; below_unity is set (and a warning logged) when some
        q_i < 1, which happens only when N = n

    Raises:
        NotNormalized: Entries outside [0, 1] or sum differing from 1
        DegenerateProbability: Some p_i equals 1
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    N = p.size
    if n < 1:
        raise DimensionMismatch(f"dimension must be positive, got {n}")
    if N < n:
        raise DimensionMismatch(f"{N} probabilities for a frame in C^{n}")
    if np.any(~np.isfinite(p)) or np.any(p < 0) or np.any(p > 1):
        raise NotNormalized(f"probabilities must lie in [0, 1], got {p.tolist()}")

    total = float(np.sum(p))
    if abs(total - 1) > TOL_NORMALIZED:
        raise NotNormalized(f"probabilities sum to {total!r}, not 1")
    if np.any(p >= 1):
        raise DegenerateProbability(
            f"erasure probability 1 at index {int(np.argmax(p)) + 1}"
        )

    q = (total / (total - p)) * (N - 1) / n

    below_unity = bool(np.any(q < 1))
    if below_unity:
        logger.warning(
            "weight numbers below 1 (N = n = %d): %s", n, np.round(q, 6).tolist()
        )
    return ProbabilityModel(p=p, q=q, dimension=n, below_unity=below_unity)


def iter_patterns(N: int, m: int) -> Iterator[ErasurePattern]:
    """All size-m patterns of {0..N-1} in lexicographic order"""
    for indices in combinations(range(N), m):
        yield ErasurePattern(indices)


def _require_pair(F: Frame, G: Frame, M: ProbabilityModel) -> None:
    if F.synthesis.shape != G.synthesis.shape:
        raise DimensionMismatch(
            f"frames have shapes {F.synthesis.shape} and {G.synthesis.shape}"
        )
    if M.size != F.size:
        raise DimensionMismatch(f"{M.size} weights for {F.size} vectors")


def _operator(F: Frame, G: Frame, weights: np.ndarray, indices: tuple) -> np.ndarray:
    idx = list(indices)
    return (G.synthesis[:, idx] * weights[idx]) @ F.synthesis[:, idx].conj().T


def error_operator(
    F: Frame, G: Frame, pattern: ErasurePattern, M: ProbabilityModel
) -> ErrorOperator:
    """Weighted error operator E f = sum over the pattern of q_i <f, f_i> g_i"""
    _require_pair(F, G, M)
    pattern.validate(F.size)
    if pattern.m == 0:
        n = F.dimension
        return ErrorOperator(np.zeros((n, n), dtype=np.complex128), pattern)
    return ErrorOperator(_operator(F, G, M.q, pattern.indices), pattern)


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value"""
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, 2))


def spectral_radius(matrix: np.ndarray) -> float:
    """Largest eigenvalue modulus over C"""
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def check_multiplicity(m: int, N: int) -> None:
    if not 1 <= m <= N:
        raise BadMultiplicity(f"erasure multiplicity must be in 1..{N}, got {m}")


def _pattern_table(F: Frame, G: Frame, weights: np.ndarray, m: int) -> list:
    table = []
    for pattern in iter_patterns(F.size, m):
        E = _operator(F, G, weights, pattern.indices)
        table.append(PatternValue(pattern, operator_norm(E), spectral_radius(E)))
    return table


def _report(table: list, kind: MeasureKind, m: int, tie: float = TOL_TIE) -> MeasureReport:
    values = np.array([row.value(kind) for row in table])
    best = float(np.max(values))
    cutoff = best - tie * abs(best)
    argmax = [row.pattern for row, v in zip(table, values) if v >= cutoff]
    return MeasureReport(measure=kind, m=m, value=best, argmax=argmax, per_pattern=table)


def measure(
    F: Frame, G: Frame, M: ProbabilityModel, m: int, kind: MeasureKind, tie: float = TOL_TIE
) -> MeasureReport:
    """Worst case of one measure over all C(N, m) erasure patterns; ties are relative to tie"""
    _require_pair(F, G, M)
    check_multiplicity(m, F.size)
    return _report(_pattern_table(F, G, M.q, m), MeasureKind(kind), m, tie)


def measure_O(F: Frame, G: Frame, M: ProbabilityModel, m: int) -> MeasureReport:
    return measure(F, G, M, m, MeasureKind.O)


def measure_r(F: Frame, G: Frame, M: ProbabilityModel, m: int) -> MeasureReport:
    return measure(F, G, M, m, MeasureKind.R)


def measure_A(F: Frame, G: Frame, M: ProbabilityModel, m: int) -> MeasureReport:
    return measure(F, G, M, m, MeasureKind.A)


def measure_all(F: Frame, G: Frame, M: ProbabilityModel, m: int, tie: float = TOL_TIE) -> dict:
    """All three measures from a single enumeration, keyed by MeasureKind"""
    _require_pair(F, G, M)
    check_multiplicity(m, F.size)
    table = _pattern_table(F, G, M.q, m)
    return {kind: _report(table, kind, m, tie) for kind in MeasureKind}


def raw_measure_O(F: Frame, G: Frame, m: int) -> float:
    """Worst operator norm of the unweighted partial reconstruction map"""
    if F.synthesis.shape != G.synthesis.shape:
        raise DimensionMismatch(
            f"frames have shapes {F.synthesis.shape} and {G.synthesis.shape}"
        )
    check_multiplicity(m, F.size)
    ones = np.ones(F.size)
    return max(row.norm for row in _pattern_table(F, G, ones, m))


def one_erasure_terms(F: Frame, G: Frame, q: np.ndarray) -> tuple:
    """
    Per-index terms of the single-erasure measures.

    Returns:
        (rho, norm): rho_i = q_i |<f_i, g_i>|, norm_i = q_i ||f_i|| ||g_i||
    """
    inner = np.sum(F.synthesis * G.synthesis.conj(), axis=0)
    norms = np.linalg.norm(F.synthesis, axis=0) * np.linalg.norm(G.synthesis, axis=0)
    return q * np.abs(inner), q * norms


def one_erasure_closed_form(
    F: Frame, G: Frame, M: ProbabilityModel, tie: float = TOL_TIE
) -> MeasureReport:
    """
    Single-erasure A-measure without eigenvalue computations.

    Each E_i = q_i g_i f_i^* has rank one, so its norm is q_i ||f_i|| ||g_i||
    and its spectral radius q_i |<f_i, g_i>|.
    """
    _require_pair(F, G, M)
    rho, norm = one_erasure_terms(F, G, M.q)
    table = [
        PatternValue(ErasurePattern((i,)), float(norm[i]), float(rho[i]))
        for i in range(F.size)
    ]
    return _report(table, MeasureKind.A, 1, tie)
