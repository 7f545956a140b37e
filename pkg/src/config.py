"""
Numerical tolerances and their configuration.

Defaults live here as module constants. FRAMEOPT_TOL overrides the absolute
duality tolerance; a command-line flag overrides the environment. The
symmetry and unitary-equality tolerances guard unitary transport only and
are keyword defaults of the library.
"""

import os
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from .errors import ConfigError


ENV_TOLERANCE = "FRAMEOPT_TOL"

TOL_SYM = 1e-10          # Hermitian / unitary checks, matrix max-norm
TOL_DUAL = 1e-10         # reconstruction identity, matrix max-norm
RANK_FACTOR = 1e-12      # singular values below max(n, N) * sigma_max * factor are zero
TOL_TIE = 1e-9           # relative, argmax tie sets
TOL_CHECK = 1e-9         # certificates and pair verdicts
TOL_UNITARY_EQUAL = 1e-12
TOL_MAJORIZATION = 1e-12
TOL_NORMALIZED = 1e-12   # sum of probabilities


@dataclass(frozen=True)
class Tolerances:
    """Resolved tolerance set passed from the CLI/API into the library"""
    dual: float = TOL_DUAL
    rank_factor: float = RANK_FACTOR
    tie: float = TOL_TIE
    check: float = TOL_CHECK
    majorization: float = TOL_MAJORIZATION

    def to_dict(self) -> dict:
        return {
            "dual": self.dual,
            "rank_factor": self.rank_factor,
            "tie": self.tie,
            "check": self.check,
            "majorization": self.majorization,
        }


def _parse_tolerance(raw: str, source: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{source}: not a number: {raw!r}")
    if not value > 0:
        raise ConfigError(f"{source}: tolerance must be positive, got {value}")
    return value


def load_tolerances(
    flag: Optional[float] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> Tolerances:
    """
    Resolve tolerances with precedence flag > FRAMEOPT_TOL > default.

    Args:
        flag: Value given on the command line (or API request), if any
        environ: Environment mapping, defaults to os.environ

    Returns:
        Tolerances with dual overridden when a value was supplied
    """
    environ = os.environ if environ is None else environ
    tolerances = Tolerances()

    if flag is not None:
        value = _parse_tolerance(flag, "--tol")
    elif environ.get(ENV_TOLERANCE):
        value = _parse_tolerance(environ[ENV_TOLERANCE], ENV_TOLERANCE)
    else:
        return tolerances

    return replace(tolerances, dual=value)
