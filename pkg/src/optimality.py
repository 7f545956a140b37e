"""
Optimal duals for one erasure.

The search minimizes a max-of-convex-terms objective over the affine space of
duals by subgradient descent with several restarts. Each restart runs in
epochs of diminishing steps sigma / sqrt(j); every epoch begins again at the
best point found so far with sigma halved. The checkers evaluate the rank
and constancy conditions under which the canonical dual is (uniquely)
optimal.
"""

from __future__ import annotations

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from .config import RANK_FACTOR, TOL_CHECK, TOL_SYM, TOL_TIE, TOL_UNITARY_EQUAL, Tolerances
from .erasure_model import one_erasure_closed_form, one_erasure_terms
from .frame_core import (
    apply_unitary,
    canonical_dual,
    dual_from_params,
    dual_space,
    is_constant,
    is_tight,
    numerical_rank,
    require_tight,
)
from .models import (
    CertificateKind,
    DualParameterization,
    Frame,
    MeasureKind,
    OptimalityCertificate,
    ProbabilityModel,
    SearchConfig,
    SearchResult,
    TightEquivalenceReport,
)

logger = logging.getLogger(__name__)

# Search value below the canonical value by more than this (relative) means
# the canonical dual is not optimal.
MEMBERSHIP_TOL = 1e-7

# Step scale factor between epochs, and the number of consecutive epochs
# without improvement after which a restart settles.
STEP_DECAY = 0.5
QUIET_EPOCHS = 3

WITNESS_EPSILON = 1e-2
WITNESS_HALVINGS = 60


class DualObjective:
    """
    Single-erasure objective over real coordinates of the dual space.

    A point x has 2d real entries: the real parts of the d complex
    coefficients followed by their imaginary parts. Methods accept a single
    point of shape (2d,) or a batch of shape (R, 2d).
    """

    def __init__(
        self,
        P: DualParameterization,
        M: ProbabilityModel,
        objective: MeasureKind = MeasureKind.A,
    ):
        self.objective = MeasureKind(objective)
        self.P = P
        self.F = P.frame.synthesis
        self.q = M.q
        self.base = P.base.synthesis
        self.basis = P.basis
        self.d = P.d
        self.frame_norms = np.linalg.norm(self.F, axis=0)
        # derivative of <f_i, g_i> along the real part of coefficient k
        self.inner_slopes = np.einsum("jn,kjn->kn", self.F, self.basis.conj())

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x[..., : self.d] + 1j * x[..., self.d:]

    def duals(self, x: np.ndarray) -> np.ndarray:
        C = np.atleast_2d(self.coefficients(x))
        return self.base[None] + np.einsum("rk,kjn->rjn", C, self.basis)

    def _terms(self, G: np.ndarray) -> tuple:
        inner = np.einsum("jn,rjn->rn", self.F, G.conj())
        dual_norms = np.linalg.norm(G, axis=1)
        rho = self.q * np.abs(inner)
        norm = self.q * self.frame_norms * dual_norms
        if self.objective == MeasureKind.O:
            terms = norm
        elif self.objective == MeasureKind.R:
            terms = rho
        else:
            terms = (rho + norm) / 2
        return terms, inner, dual_norms

    def value(self, x: np.ndarray) -> np.ndarray:
        terms, _, _ = self._terms(self.duals(x))
        values = terms.max(axis=1)
        return values if np.ndim(x) > 1 else values[0]

    def evaluate(self, x: np.ndarray) -> tuple:
        """Objective values and one subgradient per point"""
        batch = np.ndim(x) > 1
        G = self.duals(x)
        terms, inner, dual_norms = self._terms(G)
        values = terms.max(axis=1)
        active = terms.argmax(axis=1)  # first maximal term
        rows = np.arange(G.shape[0])

        q = self.q[active]
        s = inner[rows, active]
        slopes = self.inner_slopes[:, active].T                    # (R, d)
        g = G[rows, :, active]                                     # (R, n)
        h = np.einsum("rj,kjr->rk", g.conj(), self.basis[:, :, active])

        modulus = np.abs(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(modulus > 0, s.conj() / modulus, 0)[:, None] * slopes
            grad_rho = q[:, None] * np.concatenate([w.real, w.imag], axis=1)

            gn = dual_norms[rows, active]
            v = np.where(gn > 0, 1 / gn, 0)[:, None] * h
            grad_norm = (q * self.frame_norms[active])[:, None] * np.concatenate(
                [v.real, -v.imag], axis=1
            )

        if self.objective == MeasureKind.O:
            grad = grad_norm
        elif self.objective == MeasureKind.R:
            grad = grad_rho
        else:
            grad = (grad_rho + grad_norm) / 2

        if batch:
            return values, grad
        return values[0], grad[0]


def objective_value(
    F: Frame, M: ProbabilityModel, x, objective: MeasureKind = MeasureKind.A
) -> float:
    """Objective at real coordinates x (length 2d)"""
    return float(DualObjective(dual_space(F), M, objective).value(np.asarray(x, dtype=float)))


def subgradient_of_objective(
    F: Frame, M: ProbabilityModel, x, objective: MeasureKind = MeasureKind.A
) -> np.ndarray:
    """
    A subgradient of the objective at real coordinates x (length 2d).

    Uses the gradient of the maximal term (lowest index on ties); the modulus
    term contributes zero where <f_i, g_i> = 0. Empty when the dual is unique.
    """
    P = dual_space(F)
    if P.d == 0:
        return np.zeros(0)
    _, grad = DualObjective(P, M, objective).evaluate(np.asarray(x, dtype=float))
    return grad


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, restart])))


def pasod_search(
    F: Frame,
    M: ProbabilityModel,
    cfg: Optional[SearchConfig] = None,
    objective: MeasureKind = MeasureKind.A,
    rank_factor: float = RANK_FACTOR,
) -> SearchResult:
    """
    Search the dual space for a dual minimizing the single-erasure objective.

    Restart 0 starts at the canonical dual, so the returned value never
    exceeds the canonical value. Restart k >= 1 starts at Gaussian
    coefficients from its own PCG64 stream (seed, k).

    Each restart runs epochs of cfg.patience iterations with steps
    sigma / sqrt(j), j counting from 1 within the epoch. An epoch ends by
    jumping back to the best point and halving sigma. A restart settles after
    QUIET_EPOCHS consecutive epochs that improve its best value by at most
    cfg.tolerance (relative), or at a zero subgradient. Once sigma is below
    the objective resolution no epoch can improve, so the default settings
    always settle. The result is flagged non-converged only when a restart is
    still improving when cfg.max_iterations runs out.

    Args:
        F: Frame to find a dual for
        M: Erasure probability model
        cfg: Search settings
        objective: A (averaged), O (operator norm) or r (spectral radius)
        rank_factor: Rank threshold factor for the null space of the synthesis

    Returns:
        SearchResult with the best dual over all restarts
    """
    cfg = cfg or SearchConfig()
    objective = MeasureKind(objective)
    P = dual_space(F, rank_factor)

    if P.d == 0:
        dual = P.base
        value = float(DualObjective(P, M, objective).value(np.zeros(0)))
        return SearchResult(
            dual=dual, value=value, objective=objective,
            coefficients=np.zeros(0, dtype=np.complex128),
            restart_values=[value], restart_iterations=[0],
        )

    f = DualObjective(P, M, objective)
    R, dim = cfg.restarts, 2 * P.d
    scale = float(np.max(np.linalg.norm(P.base.synthesis, axis=0)))

    x = np.zeros((R, dim))
    for k in range(1, R):
        x[k] = _restart_rng(cfg.seed, k).standard_normal(dim) * scale

    best_x = x.copy()
    best_v = np.full(R, np.inf)
    sigma = np.full(R, cfg.step_size)
    epoch_start = np.zeros(R, dtype=int)
    epoch_anchor = np.full(R, np.inf)
    quiet = np.zeros(R, dtype=int)
    iterations = np.zeros(R, dtype=int)
    active = np.ones(R, dtype=bool)

    for k in range(1, cfg.max_iterations + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break

        values, grad = f.evaluate(x[idx])
        iterations[idx] = k

        better = values < best_v[idx]
        best_v[idx[better]] = values[better]
        best_x[idx[better]] = x[idx[better]]

        lengths = np.linalg.norm(grad, axis=1)
        stationary = lengths == 0
        active[idx[stationary]] = False

        # epoch boundary: restart from the best point with a smaller step scale
        ends = ~stationary & (k - epoch_start[idx] >= cfg.patience)
        if ends.any():
            e = idx[ends]
            gained = best_v[e] < epoch_anchor[e] - cfg.tolerance * np.maximum(1.0, np.abs(best_v[e]))
            quiet[e] = np.where(gained, 0, quiet[e] + 1)
            epoch_anchor[e] = best_v[e]
            epoch_start[e] = k
            sigma[e] *= STEP_DECAY
            x[e] = best_x[e]
            active[e[quiet[e] >= QUIET_EPOCHS]] = False

        moving = ~stationary & ~ends
        if moving.any():
            m = idx[moving]
            step = sigma[m] / np.sqrt(k - epoch_start[m])
            x[m] -= (step / lengths[moving])[:, None] * grad[moving]

    converged = not active.any()
    if not converged:
        logger.warning(
            "search did not settle within %d iterations for restarts %s",
            cfg.max_iterations, np.flatnonzero(active).tolist(),
        )

    winner = 0
    for r in range(1, R):
        if best_v[r] < best_v[winner] - cfg.tolerance * max(1.0, abs(best_v[winner])):
            winner = r

    coefficients = f.coefficients(best_x[winner])
    dual = dual_from_params(P, coefficients)
    logger.debug(
        "%s search: value %.12g from restart %d (%s)",
        objective.value, best_v[winner], winner, best_v.tolist(),
    )
    return SearchResult(
        dual=dual,
        value=float(best_v[winner]),
        objective=objective,
        coefficients=coefficients,
        restart=winner,
        converged=converged,
        restart_values=[float(v) for v in best_v],
        restart_iterations=[int(i) for i in iterations],
    )


def _split(values: np.ndarray, tie: float = TOL_TIE) -> tuple:
    """Indices attaining the maximum (relative tie) and the rest"""
    top = float(np.max(values))
    hits = values >= top - tie * abs(top)
    return tuple(np.flatnonzero(hits).tolist()), tuple(np.flatnonzero(~hits).tolist())


def _spans_intersect_trivially(
    T: np.ndarray, first: tuple, second: tuple, rank_factor: float = RANK_FACTOR
) -> tuple:
    r1 = numerical_rank(T[:, list(first)], rank_factor)
    r2 = numerical_rank(T[:, list(second)], rank_factor)
    joint = numerical_rank(T[:, list(first) + list(second)], rank_factor)
    return joint == r1 + r2, r1, r2


def check_unique_pod(
    F: Frame,
    M: ProbabilityModel,
    tol: float = TOL_CHECK,
    tie: float = TOL_TIE,
    rank_factor: float = RANK_FACTOR,
) -> OptimalityCertificate:
    """
    Is the canonical dual the unique single-erasure POD?

    Tight frames: iff q_i ||f_i||^2 is constant. Otherwise with
    c_i = q_i ||S^-1 f_i|| ||f_i||, eta1 = argmax and eta2 the rest: iff the
    spans of the two groups meet only in 0 and {f_i : i in eta2} is linearly
    independent.
    """
    T = F.synthesis
    S_inv_F = canonical_dual(F).synthesis
    frame_norms = np.linalg.norm(T, axis=0)

    if is_tight(F, tol):
        weighted = M.q * frame_norms**2
        unique = is_constant(weighted, tol)
        return OptimalityCertificate(
            kind=CertificateKind.UNIQUE_POD if unique else CertificateKind.NOT_UNIQUE,
            holds=unique,
            details={"tight": True, "weighted_norms": weighted},
        )

    c = M.q * np.linalg.norm(S_inv_F, axis=0) * frame_norms
    eta1, eta2 = _split(c, tie)
    trivial, r1, r2 = _spans_intersect_trivially(T, eta1, eta2, rank_factor)
    independent = r2 == len(eta2)
    unique = trivial and independent
    return OptimalityCertificate(
        kind=CertificateKind.UNIQUE_POD if unique else CertificateKind.NOT_UNIQUE,
        holds=unique,
        partitions={"eta1": eta1, "eta2": eta2},
        details={
            "tight": False,
            "c": float(np.max(c)),
            "per_index": c,
            "intersection_trivial": trivial,
            "eta2_independent": independent,
            "rank_F1": r1,
            "rank_F2": r2,
        },
    )


def _witness(
    F: Frame,
    M: ProbabilityModel,
    canonical: np.ndarray,
    lambda1: tuple,
    lambda2: tuple,
    level: float,
    rank_factor: float = RANK_FACTOR,
) -> Optional[Frame]:
    """Second optimal dual: canonical + eps * u with u supported on lambda2"""
    T = F.synthesis
    n, N = T.shape
    selector = np.zeros((len(lambda1), N))
    selector[np.arange(len(lambda1)), list(lambda1)] = 1
    K = scipy.linalg.null_space(np.vstack([T, selector]), rcond=max(n, N) * rank_factor)
    if K.shape[1] == 0:
        return None

    u = np.zeros((n, N), dtype=np.complex128)
    u[0, :] = K[:, 0].conj()
    rest = list(lambda2)

    eps = WITNESS_EPSILON
    for _ in range(WITNESS_HALVINGS):
        candidate = Frame(canonical + eps * u)
        rho, norm = one_erasure_terms(F, candidate, M.q)
        if np.all((rho + norm)[rest] < level):
            return candidate
        eps /= 2
    logger.info("no witness below level %.12g after %d halvings", level, WITNESS_HALVINGS)
    return None


def check_canonical_pasod_sufficient(
    F: Frame, M: ProbabilityModel, tie: float = TOL_TIE, rank_factor: float = RANK_FACTOR
) -> OptimalityCertificate:
    """
    Sufficient condition for the canonical dual to be a single-erasure PASOD.

    With l_i = q_i (||S^-1/2 f_i||^2 + ||f_i|| ||S^-1 f_i||), Lambda1 =
    argmax l and Lambda2 the rest, the canonical dual is optimal when the
    spans H1, H2 of the two groups meet only in 0 and {f_i : i in Lambda1}
    is linearly independent. For N > n a second optimal dual is then built
    by perturbing the canonical dual along a null direction supported on
    Lambda2.
    """
    T = F.synthesis
    n, N = T.shape
    canonical = canonical_dual(F).synthesis

    # ||S^-1/2 f||^2 = <S^-1 f, f>
    quadratic = np.real(np.sum(canonical * T.conj(), axis=0))
    l_terms = M.q * (quadratic + np.linalg.norm(T, axis=0) * np.linalg.norm(canonical, axis=0))
    level = float(np.max(l_terms))
    lambda1, lambda2 = _split(l_terms, tie)

    trivial, r1, r2 = _spans_intersect_trivially(T, lambda1, lambda2, rank_factor)
    independent = r1 == len(lambda1)
    details = {
        "l": level,
        "per_index": l_terms,
        "intersection_trivial": trivial,
        "lambda1_independent": independent,
        "rank_H1": r1,
        "rank_H2": r2,
    }
    partitions = {"lambda1": lambda1, "lambda2": lambda2}

    if not (trivial and independent):
        return OptimalityCertificate(
            kind=CertificateKind.INCONCLUSIVE, holds=False,
            partitions=partitions, details=details,
        )

    witness = (
        _witness(F, M, canonical, lambda1, lambda2, level, rank_factor) if N > n else None
    )
    # a witness is a second optimal dual, so sufficiency holds without uniqueness
    details["unique"] = None if N > n and witness is None else N == n
    return OptimalityCertificate(
        kind=CertificateKind.CANONICAL_PASOD_SUFFICIENT,
        holds=True,
        partitions=partitions,
        details=details,
        witness=witness,
    )


def check_unique_pasod_tight(
    F: Frame, M: ProbabilityModel, tol: float = TOL_CHECK
) -> OptimalityCertificate:
    """For tight frames the canonical dual is the unique PASOD iff q_i ||f_i||^2 = c"""
    A, _ = require_tight(F, tol)
    weighted = M.q * F.norms() ** 2
    unique = is_constant(weighted, tol)
    return OptimalityCertificate(
        kind=CertificateKind.UNIQUE_PASOD if unique else CertificateKind.NOT_UNIQUE,
        holds=unique,
        details={
            "c": float(np.mean(weighted)) if unique else None,
            "weighted_norms": weighted,
            "frame_bound": A,
        },
    )


def canonical_certificates(
    F: Frame, M: ProbabilityModel, tols: Optional[Tolerances] = None
) -> dict:
    """Canonical-dual certificates that apply to F, keyed by name"""
    tols = tols or Tolerances()
    certificates = {
        "unique_pod": check_unique_pod(F, M, tols.check, tols.tie, tols.rank_factor),
        "canonical_pasod_sufficient": check_canonical_pasod_sufficient(
            F, M, tols.tie, tols.rank_factor
        ),
    }
    if is_tight(F, tols.check):
        certificates["unique_pasod_tight"] = check_unique_pasod_tight(F, M, tols.check)
    return certificates


def tight_equivalences(
    F: Frame, M: ProbabilityModel, cfg: Optional[SearchConfig] = None
) -> TightEquivalenceReport:
    """
    Canonical-dual optimality under O, r and A for a tight frame.

    Each membership compares the canonical value with a search under the
    corresponding objective; for tight frames the three must agree.
    """
    require_tight(F)
    P = dual_space(F)
    canonical_values, search_values, member = {}, {}, {}
    for kind in (MeasureKind.O, MeasureKind.R, MeasureKind.A):
        canonical_value = float(DualObjective(P, M, kind).value(np.zeros(2 * P.d)))
        result = pasod_search(F, M, cfg, objective=kind)
        canonical_values[kind.value] = canonical_value
        search_values[kind.value] = result.value
        member[kind] = result.value >= canonical_value - MEMBERSHIP_TOL * max(1.0, canonical_value)

    report = TightEquivalenceReport(
        pod=member[MeasureKind.O],
        psod=member[MeasureKind.R],
        pasod=member[MeasureKind.A],
        canonical_values=canonical_values,
        search_values=search_values,
    )
    if not report.consistent:
        logger.warning("tight frame memberships disagree: %s", report.to_dict())
    return report


def unitary_invariance_check(
    F: Frame,
    G: Frame,
    U: np.ndarray,
    M: ProbabilityModel,
    tol: float = TOL_UNITARY_EQUAL,
    unitary_tol: float = TOL_SYM,
) -> bool:
    """A-measure of (UF, UG) equals that of (F, G) to relative tol"""
    before = one_erasure_closed_form(F, G, M).value
    after = one_erasure_closed_form(
        apply_unitary(U, F, unitary_tol), apply_unitary(U, G, unitary_tol), M
    ).value
    equal = abs(after - before) <= tol * max(1.0, abs(before))
    if not equal:
        logger.warning("unitary transport changed the measure: %.17g -> %.17g", before, after)
    return equal
