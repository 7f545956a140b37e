"""
Monte Carlo erasure channel.

Each trial erases m coefficients drawn by sequential weighted sampling
without replacement and reconstructs unit random signals from the remaining
ones. Trials run in fixed-size blocks; block b draws from its own PCG64
stream seeded by (seed, b), so a report depends only on the configuration.
"""

from __future__ import annotations

import logging

import numpy as np

from .config import TOL_DUAL
from .erasure_model import check_multiplicity, measure_O, raw_measure_O
from .errors import DimensionMismatch, NotDual
from .frame_core import is_dual
from .models import ErasurePattern, Frame, ProbabilityModel, SimConfig, SimReport, WeightingMode

logger = logging.getLogger(__name__)

RNG_ALGORITHM = "PCG64 via SeedSequence([seed, block])"
BLOCK_ENTRIES = 1 << 16  # trials * signals per block


def block_size(cfg: SimConfig) -> int:
    return max(1, BLOCK_ENTRIES // cfg.signals)


def sample_patterns(p: np.ndarray, m: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """
    Erasure patterns, one sorted row of m indices per trial.

    Exponential race: index i finishes at E_i / p_i and the first m
    finishers are erased, which matches drawing proportionally to p and
    renormalizing after each draw. Zero-probability indices never finish and
    are ordered uniformly among themselves.
    """
    N = p.size
    with np.errstate(divide="ignore"):
        arrival = rng.standard_exponential((trials, N)) / p
    tiebreak = rng.random((trials, N))
    order = np.lexsort((tiebreak, arrival), axis=-1)
    return np.sort(order[:, :m], axis=1)


def random_signals(n: int, count: tuple, rng: np.random.Generator) -> np.ndarray:
    """Unit vectors from normalized standard complex Gaussians"""
    z = rng.standard_normal(count + (n,)) + 1j * rng.standard_normal(count + (n,))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def simulate(
    F: Frame, G: Frame, M: ProbabilityModel, cfg: SimConfig, tol: float = TOL_DUAL
) -> SimReport:
    """
    Simulate the erasure channel and compare with the worst-case bound.

    Weighted mode records ||E f|| with the weight numbers and compares with
    measure_O; raw mode records ||sum over erased i of <f, f_i> g_i|| and
    compares with the unweighted maximum.

    Raises:
        NotDual: If G is not a dual of F
    """
    if M.size != F.size:
        raise DimensionMismatch(f"{M.size} probabilities for {F.size} vectors")
    if not is_dual(F, G, tol):
        raise NotDual("simulation requires G to be a dual of F")
    check_multiplicity(cfg.m, F.size)

    if cfg.mode == WeightingMode.WEIGHTED:
        weights = M.q
        bound = measure_O(F, G, M, cfg.m).value
    else:
        weights = np.ones(F.size)
        bound = raw_measure_O(F, G, cfg.m)

    n, N = F.synthesis.shape
    size = block_size(cfg)
    analysis = F.synthesis.conj()      # <f, f_i> = sum_k f_k conj(F_ki)
    synthesis = G.synthesis.T

    worst, total, hits = 0.0, 0.0, {}
    for block, start in enumerate(range(0, cfg.trials, size)):
        count = min(size, cfg.trials - start)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, block])))
        patterns = sample_patterns(M.p, cfg.m, count, rng)
        signals = random_signals(n, (count, cfg.signals), rng)

        mask = np.zeros((count, N))
        np.put_along_axis(mask, patterns, weights[patterns], axis=1)
        coefficients = (signals @ analysis) * mask[:, None, :]
        errors = np.linalg.norm(coefficients @ synthesis, axis=-1)

        worst = max(worst, float(errors.max()))
        total += float(errors.sum())
        rows, counts = np.unique(patterns, axis=0, return_counts=True)
        for row, c in zip(rows, counts):
            key = ErasurePattern(tuple(row))
            hits[key] = hits.get(key, 0) + int(c)

    if worst > bound + 1e-9 * max(1.0, bound):
        logger.warning("empirical error %.17g exceeds bound %.17g", worst, bound)

    return SimReport(
        config=cfg,
        empirical_max=worst,
        empirical_mean=total / (cfg.trials * cfg.signals),
        bound=float(bound),
        pattern_hits=dict(sorted(hits.items(), key=lambda item: item[0].indices)),
        rng_algorithm=RNG_ALGORITHM,
        block_size=size,
    )
