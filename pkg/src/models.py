"""
Data models for frame analysis.
Every result type serializes with to_dict() so reports are both
human-readable and agent-parseable. Index sets are 0-based in memory and
1-based in serialized form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Sequence

import numpy as np

from .errors import BadMultiplicity, DimensionMismatch, SchemaError


class MeasureKind(str, Enum):
    """Worst-case erasure error measures"""
    O = "O"  # operator norm
    R = "r"  # spectral radius
    A = "A"  # average of the two


class CertificateKind(str, Enum):
    """Outcome of an optimality or uniqueness check"""
    CANONICAL_PASOD_SUFFICIENT = "canonical-is-PASOD-sufficient"
    UNIQUE_POD = "unique-POD"
    UNIQUE_PASOD = "unique-PASOD"
    NOT_UNIQUE = "not-unique"
    INCONCLUSIVE = "inconclusive"


class WeightingMode(str, Enum):
    """Error recorded by the erasure simulator"""
    RAW = "raw"            # sum over lost coefficients, unweighted
    WEIGHTED = "weighted"  # error operator with weight numbers


# Complex encoding

def encode_complex(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def decode_complex(value: Any) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
            return complex(re, im)
    raise SchemaError(f"complex numbers are [re, im] pairs, got {value!r}")


def encode_vectors(synthesis: np.ndarray) -> list:
    """Columns of a synthesis matrix as lists of [re, im] pairs"""
    return [[encode_complex(z) for z in column] for column in synthesis.T]


def decode_vectors(vectors: Any, dimension: Optional[int] = None) -> np.ndarray:
    """Inverse of encode_vectors; returns the n x N synthesis matrix"""
    if not isinstance(vectors, list) or not vectors:
        raise SchemaError("'vectors' must be a non-empty list")
    columns = []
    for k, vector in enumerate(vectors):
        if not isinstance(vector, list):
            raise SchemaError(f"vector {k + 1} must be a list")
        if dimension is not None and len(vector) != dimension:
            raise SchemaError(
                f"vector {k + 1} has {len(vector)} entries, expected {dimension}"
            )
        columns.append([decode_complex(z) for z in vector])
    if len({len(c) for c in columns}) != 1:
        raise SchemaError("all vectors must have the same length")
    return np.array(columns, dtype=np.complex128).T


@dataclass
class Frame:
    """
    Ordered list of N vectors in C^n, stored as its n x N synthesis matrix.

    Column i is f_i. Spanning is not enforced here; frame_core raises
    RankDeficient where a spanning set is required.
    """
    synthesis: np.ndarray

    def __post_init__(self):
        synthesis = np.array(self.synthesis, dtype=np.complex128)
        if synthesis.ndim != 2 or synthesis.shape[0] == 0 or synthesis.shape[1] == 0:
            raise DimensionMismatch(
                f"synthesis must be a non-empty n x N matrix, got shape {synthesis.shape}"
            )
        self.synthesis = synthesis

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[complex]]) -> "Frame":
        """Build from a list of N vectors of length n"""
        return cls(np.array(vectors, dtype=np.complex128).T)

    @classmethod
    def random(cls, n: int, N: int, rng: np.random.Generator) -> "Frame":
        """Standard complex Gaussian frame (spanning almost surely when N >= n)"""
        real = rng.standard_normal((n, N))
        imag = rng.standard_normal((n, N))
        return cls((real + 1j * imag) / np.sqrt(2))

    @property
    def dimension(self) -> int:
        return self.synthesis.shape[0]

    @property
    def size(self) -> int:
        return self.synthesis.shape[1]

    def __len__(self) -> int:
        return self.size

    @property
    def vectors(self) -> list:
        return [self.synthesis[:, i].copy() for i in range(self.size)]

    def vector(self, i: int) -> np.ndarray:
        return self.synthesis[:, i]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.synthesis, axis=0)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "vectors": encode_vectors(self.synthesis),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Frame":
        dimension = data.get("dimension")
        if dimension is not None and (not isinstance(dimension, int) or dimension < 1):
            raise SchemaError("'dimension' must be a positive integer")
        return cls(decode_vectors(data.get("vectors"), dimension))


@dataclass
class FrameOperator:
    """S_F = T T*, Hermitian positive definite"""
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass
class DualParameterization:
    """
    Affine coordinates for all duals of a frame.

    Every dual equals base + sum_k c_k U^(k) for complex c. basis has shape
    (d, n, N); basis[j * K + m] = e_j k_m^* where k_m are the orthonormal
    null-space vectors of the synthesis matrix (K = N - rank).
    """
    frame: Frame
    base: Frame
    basis: np.ndarray
    null_space: np.ndarray  # N x K, orthonormal columns
    rank: int

    @property
    def d(self) -> int:
        return self.basis.shape[0]

    def perturbation(self, k: int) -> Frame:
        return Frame(self.basis[k])


@dataclass
class ProbabilityModel:
    """Erasure probabilities p and derived weight numbers q"""
    p: np.ndarray
    q: np.ndarray
    dimension: int
    below_unity: bool = False  # some q_i < 1, only possible when N = n

    @property
    def size(self) -> int:
        return len(self.p)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "probabilities": [float(x) for x in self.p],
            "weights": [float(x) for x in self.q],
            "below_unity": self.below_unity,
        }


@dataclass(frozen=True)
class ErasurePattern:
    """Sorted set of erased indices (0-based)"""
    indices: tuple

    def __post_init__(self):
        indices = tuple(sorted(int(i) for i in self.indices))
        if len(set(indices)) != len(indices):
            raise BadMultiplicity(f"repeated indices in erasure pattern {indices}")
        object.__setattr__(self, "indices", indices)

    @property
    def m(self) -> int:
        return len(self.indices)

    def validate(self, N: int) -> "ErasurePattern":
        if any(i < 0 or i >= N for i in self.indices):
            raise DimensionMismatch(
                f"erasure pattern {self.one_based()} outside 1..{N}"
            )
        return self

    def one_based(self) -> list:
        return [i + 1 for i in self.indices]


@dataclass
class ErrorOperator:
    """E = sum over the pattern of q_i g_i f_i^*"""
    matrix: np.ndarray
    pattern: ErasurePattern


@dataclass
class PatternValue:
    """Operator norm and spectral radius of one error operator"""
    pattern: ErasurePattern
    norm: float
    rho: float

    def value(self, kind: MeasureKind) -> float:
        if kind == MeasureKind.O:
            return self.norm
        if kind == MeasureKind.R:
            return self.rho
        return (self.norm + self.rho) / 2

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern.one_based(),
            "norm": self.norm,
            "rho": self.rho,
        }


@dataclass
class MeasureReport:
    """Worst-case measure over all erasure patterns of size m"""
    measure: MeasureKind
    m: int
    value: float
    argmax: list = field(default_factory=list)       # List[ErasurePattern]
    per_pattern: list = field(default_factory=list)  # List[PatternValue]

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "m": self.m,
            "value": self.value,
            "argmax": [p.one_based() for p in self.argmax],
            "per_pattern": [v.to_dict() for v in self.per_pattern],
        }


@dataclass
class SearchConfig:
    """Settings for the projected subgradient search"""
    max_iterations: int = 200000
    step_size: float = 0.5        # initial sigma in the step rule sigma / sqrt(j)
    restarts: int = 8
    seed: int = 0
    tolerance: float = 1e-9       # relative objective improvement
    patience: int = 2000          # iterations per epoch; sigma halves between epochs

    def __post_init__(self):
        if self.max_iterations < 1 or self.restarts < 1 or self.patience < 1:
            raise ValueError("iteration counts must be positive")
        if not self.step_size > 0 or not self.tolerance > 0:
            raise ValueError("step size and tolerance must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return {
            "max_iterations": self.max_iterations,
            "step_size": self.step_size,
            "step_rule": "sigma/sqrt(j), sigma halved per epoch",
            "restarts": self.restarts,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "patience": self.patience,
        }


@dataclass
class SearchResult:
    """Best dual found by the search"""
    dual: Frame
    value: float
    objective: MeasureKind
    coefficients: np.ndarray
    restart: int = 0
    converged: bool = True
    restart_values: list = field(default_factory=list)
    restart_iterations: list = field(default_factory=list)

    @property
    def non_converged(self) -> bool:
        return not self.converged

    def to_dict(self) -> dict:
        return {
            "objective": self.objective.value,
            "value": self.value,
            "dual": encode_vectors(self.dual.synthesis),
            "coefficients": [encode_complex(c) for c in self.coefficients],
            "restart": self.restart,
            "converged": self.converged,
            "restart_values": list(self.restart_values),
            "restart_iterations": list(self.restart_iterations),
        }


@dataclass
class OptimalityCertificate:
    """Verdict of a canonical-dual optimality or uniqueness check"""
    kind: CertificateKind
    holds: bool
    partitions: dict = field(default_factory=dict)  # name -> tuple of 0-based indices
    details: dict = field(default_factory=dict)
    witness: Optional[Frame] = None

    def to_dict(self) -> dict:
        details = {}
        for key, value in self.details.items():
            if isinstance(value, np.ndarray):
                value = value.tolist()
            details[key] = value
        return {
            "kind": self.kind.value,
            "holds": self.holds,
            "partitions": {
                name: [i + 1 for i in indices] for name, indices in self.partitions.items()
            },
            "details": details,
            "witness": encode_vectors(self.witness.synthesis) if self.witness else None,
        }


@dataclass
class TightEquivalenceReport:
    """Canonical-dual membership under the three objectives for a tight frame"""
    pod: bool
    psod: bool
    pasod: bool
    canonical_values: dict = field(default_factory=dict)  # kind -> value
    search_values: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.pod == self.psod == self.pasod

    @property
    def verdict(self) -> Optional[bool]:
        return self.pasod if self.consistent else None

    def to_dict(self) -> dict:
        return {
            "pod": self.pod,
            "psod": self.psod,
            "pasod": self.pasod,
            "consistent": self.consistent,
            "verdict": self.verdict,
            "canonical_values": dict(self.canonical_values),
            "search_values": dict(self.search_values),
        }


@dataclass
class PairVerdict:
    """Dual-pair optimality for one erasure"""
    is_pod_pair: bool
    is_psod_pair: bool
    is_pasod_pair: bool
    modulus_residuals: np.ndarray  # |<f_i,g_i>| - 1/q_i
    inner_residuals: np.ndarray    # <f_i,g_i> - 1/q_i (complex)
    norm_residuals: np.ndarray     # ||f_i|| ||g_i|| - 1/q_i

    def to_dict(self) -> dict:
        return {
            "is_POD_pair": self.is_pod_pair,
            "is_PSOD_pair": self.is_psod_pair,
            "is_PASOD_pair": self.is_pasod_pair,
            "modulus_residuals": [float(x) for x in self.modulus_residuals],
            "inner_residuals": [encode_complex(z) for z in self.inner_residuals],
            "norm_residuals": [float(x) for x in self.norm_residuals],
        }


@dataclass
class TightPairReport:
    """Whether (F, canonical dual) is the unique optimal pair of a tight frame"""
    unique: bool
    frame_bound: float
    c: Optional[float] = None                # common value of q_i ||f_i||^2 when unique
    pair_consistent: Optional[bool] = None   # pair verdict agrees with c == frame bound

    def __bool__(self) -> bool:
        return self.unique

    def to_dict(self) -> dict:
        return {
            "unique": self.unique,
            "frame_bound": self.frame_bound,
            "c": self.c,
            "pair_consistent": self.pair_consistent,
        }


@dataclass
class MajorizationInstance:
    """Spectrum lambda (length n) and vector norms a (length N)"""
    spectrum: np.ndarray
    norms: np.ndarray

    def __post_init__(self):
        self.spectrum = np.asarray(self.spectrum, dtype=float)
        self.norms = np.asarray(self.norms, dtype=float)

    @classmethod
    def from_squared_norms(cls, spectrum, squared_norms) -> "MajorizationInstance":
        return cls(spectrum, np.sqrt(np.asarray(squared_norms, dtype=float)))

    def to_dict(self) -> dict:
        return {
            "spectrum": [float(x) for x in self.spectrum],
            "norms": [float(x) for x in self.norms],
        }


@dataclass
class SimConfig:
    """Monte Carlo erasure channel settings"""
    trials: int = 10000
    signals: int = 1              # unit signals per trial
    m: int = 1
    seed: int = 0
    mode: WeightingMode = WeightingMode.WEIGHTED

    def __post_init__(self):
        self.mode = WeightingMode(self.mode)
        if self.trials < 1 or self.signals < 1:
            raise ValueError("trials and signals must be positive")
        if self.m < 1:
            raise BadMultiplicity(f"erasure multiplicity must be at least 1, got {self.m}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "signals": self.signals,
            "m": self.m,
            "seed": self.seed,
            "mode": self.mode.value,
        }


@dataclass
class SimReport:
    """Empirical erasure errors against the theoretical bound"""
    config: SimConfig
    empirical_max: float
    empirical_mean: float
    bound: float
    pattern_hits: dict = field(default_factory=dict)  # ErasurePattern -> count
    rng_algorithm: str = ""
    block_size: int = 0

    @property
    def attainment_ratio(self) -> float:
        return self.empirical_max / self.bound if self.bound > 0 else 0.0

    def pattern_frequencies(self) -> dict:
        total = sum(self.pattern_hits.values())
        return {pattern: count / total for pattern, count in self.pattern_hits.items()}

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "empirical_max": self.empirical_max,
            "empirical_mean": self.empirical_mean,
            "bound": self.bound,
            "attainment_ratio": self.attainment_ratio,
            "pattern_hits": [
                {"pattern": pattern.one_based(), "count": count}
                for pattern, count in self.pattern_hits.items()
            ],
            "rng_algorithm": self.rng_algorithm,
            "block_size": self.block_size,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


@dataclass
class FrameFile:
    """Frame, erasure probabilities and optional dual as read from JSON"""
    frame: Frame
    probabilities: list
    dual: Optional[Frame] = None

    def to_dict(self) -> dict:
        data = self.frame.to_dict()
        data["probabilities"] = [float(p) for p in self.probabilities]
        if self.dual is not None:
            data["dual"] = encode_vectors(self.dual.synthesis)
        return data

    @classmethod
    def from_dict(cls, data: Any) -> "FrameFile":
        if not isinstance(data, dict):
            raise SchemaError("frame file must be a JSON object")
        for key in ("dimension", "vectors", "probabilities"):
            if key not in data:
                raise SchemaError(f"missing key '{key}'")
        frame = Frame.from_dict(data)

        probabilities = data["probabilities"]
        if not isinstance(probabilities, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in probabilities
        ):
            raise SchemaError("'probabilities' must be a list of numbers")
        if len(probabilities) != frame.size:
            raise SchemaError(
                f"{len(probabilities)} probabilities for {frame.size} vectors"
            )

        dual = None
        if data.get("dual") is not None:
            dual = Frame(decode_vectors(data["dual"], frame.dimension))
            if dual.size != frame.size:
                raise SchemaError(f"dual has {dual.size} vectors, frame has {frame.size}")

        return cls(frame=frame, probabilities=[float(p) for p in probabilities], dual=dual)

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)
