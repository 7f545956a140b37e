"""
FastAPI server for frameopt.
Provides a REST API mirroring the command-line commands.
"""

import logging
from typing import Optional

import numpy as np
import uvicorn
from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from .cli import parse_probabilities
from .config import load_tolerances
from .dual_pairs import construct_probability_uniform_parseval, pair_verdict, unique_pair_check_tight
from .erasure_model import measure_all, one_erasure_closed_form, weights_from_probabilities
from .erasure_sim import simulate
from .errors import ConfigError, FrameOptError, NotDual, SchemaError
from .formatters import MarkdownFormatter, to_plain
from .frame_core import canonical_dual, dual_space, is_dual, is_tight
from .golden import GOLDEN_EXAMPLES, all_passed, verify_examples
from .models import FrameFile, MeasureKind, SearchConfig, SimConfig, WeightingMode
from .optimality import canonical_certificates, objective_value, pasod_search

logger = logging.getLogger(__name__)


# Initialize FastAPI app
app = FastAPI(
    title="frameopt API",
    description="""
    API for optimal dual frames under probabilistic erasures.

    ## Features
    - Worst-case erasure measures (operator norm, spectral radius, average)
    - Optimal dual search for one erasure
    - Probability uniform Parseval frame construction
    - Monte Carlo erasure channel simulation
    """,
    version="1.0.0"
)


# Request models
class FrameRequest(BaseModel):
    dimension: int
    vectors: list
    probabilities: list
    dual: Optional[list] = None
    tol: Optional[float] = None


class AnalyzeRequest(FrameRequest):
    m: int = 1
    use_canonical: bool = Field(False, description="Ignore the supplied dual")


class SearchRequest(FrameRequest):
    objective: str = "A"
    max_iterations: int = 200000
    restarts: int = 8
    seed: int = 0
    step_size: float = 0.5
    patience: int = 2000


class ConstructRequest(BaseModel):
    probabilities: list[str | float]
    dimension: int
    tol: Optional[float] = None


class SimulateRequest(FrameRequest):
    trials: int = 10000
    signals: int = 1
    m: int = 1
    seed: int = 0
    mode: str = WeightingMode.WEIGHTED.value
    use_canonical: bool = False


def _frame_file(request: FrameRequest) -> FrameFile:
    data = request.model_dump(exclude={"tol"})
    return FrameFile.from_dict({k: data[k] for k in ("dimension", "vectors", "probabilities", "dual")})


def _http_error(e: Exception) -> HTTPException:
    if isinstance(e, (SchemaError, ConfigError)):
        return HTTPException(status_code=422, detail=str(e))
    return HTTPException(status_code=400, detail=f"{type(e).__name__}: {e}")


def _dual(frame_file: FrameFile, use_canonical: bool):
    if use_canonical or frame_file.dual is None:
        return canonical_dual(frame_file.frame), "canonical"
    return frame_file.dual, "file"


# API Endpoints

@app.get("/")
async def root():
    """API root - returns basic info"""
    return {
        "name": "frameopt API",
        "version": "1.0.0",
        "endpoints": {
            "POST /analyze": "Erasure measures and pair verdict",
            "POST /search": "Optimal dual search",
            "POST /construct": "Probability uniform Parseval frame",
            "POST /simulate": "Monte Carlo erasure channel",
            "GET /examples": "Worked example verification",
        }
    }


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.post("/analyze")
def analyze(request: AnalyzeRequest):
    """
    Erasure measures of a frame with its dual.

    - **m**: number of erasures
    - **use_canonical**: use the canonical dual even if a dual is supplied
    """
    try:
        tols = load_tolerances(request.tol)
        frame_file = _frame_file(request)
        F = frame_file.frame
        M = weights_from_probabilities(frame_file.probabilities, F.dimension)
        G, source = _dual(frame_file, request.use_canonical)
        if not is_dual(F, G, tols.dual):
            raise NotDual(f"the {source} dual is not a dual of the frame")

        result = {
            "dual_source": source,
            "weights": M,
            "measures": measure_all(F, G, M, request.m, tie=tols.tie),
        }
        if request.m == 1:
            result["closed_form"] = one_erasure_closed_form(F, G, M, tie=tols.tie)
            result["pair_verdict"] = pair_verdict(F, G, M, tol=tols.check, dual_tol=tols.dual)
            result["certificates"] = canonical_certificates(F, M, tols)
            if is_tight(F, tols.check):
                result["tight_pair"] = unique_pair_check_tight(F, M, tols.check)
    except FrameOptError as e:
        raise _http_error(e)
    return to_plain(result)


@app.post("/search")
def search(request: SearchRequest):
    """Search the dual space for a single-erasure optimal dual"""
    try:
        tols = load_tolerances(request.tol)
        frame_file = _frame_file(request)
        F = frame_file.frame
        M = weights_from_probabilities(frame_file.probabilities, F.dimension)
        cfg = SearchConfig(
            max_iterations=request.max_iterations,
            step_size=request.step_size,
            restarts=request.restarts,
            seed=request.seed,
            patience=request.patience,
        )
        objective = MeasureKind(request.objective)
        result = pasod_search(F, M, cfg, objective=objective, rank_factor=tols.rank_factor)
        if not is_dual(F, result.dual, tols.dual):
            logger.warning("search result misses the reconstruction identity at tol %.3g", tols.dual)
        canonical_value = objective_value(
            F, M, np.zeros(2 * dual_space(F, tols.rank_factor).d), objective
        )
    except FrameOptError as e:
        raise _http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))

    output = to_plain(result)
    output["canonical_value"] = canonical_value
    return output


@app.post("/construct")
def construct(request: ConstructRequest):
    """Probability uniform Parseval frame for the given erasure probabilities"""
    try:
        tols = load_tolerances(request.tol)
        p = parse_probabilities([str(x) for x in request.probabilities])
        M = weights_from_probabilities(p, request.dimension)
        F = construct_probability_uniform_parseval(M, request.dimension, tols.majorization)
    except FrameOptError as e:
        raise _http_error(e)
    return to_plain(FrameFile(frame=F, probabilities=p))


@app.post("/simulate")
def simulate_channel(request: SimulateRequest):
    """Monte Carlo erasure channel against the worst-case bound"""
    try:
        tols = load_tolerances(request.tol)
        frame_file = _frame_file(request)
        F = frame_file.frame
        M = weights_from_probabilities(frame_file.probabilities, F.dimension)
        G, _ = _dual(frame_file, request.use_canonical)
        cfg = SimConfig(
            trials=request.trials,
            signals=request.signals,
            m=request.m,
            seed=request.seed,
            mode=request.mode,
        )
        report = simulate(F, G, M, cfg, tol=tols.dual)
    except FrameOptError as e:
        raise _http_error(e)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return to_plain(report)


@app.get("/examples")
def examples(format: str = Query("json", enum=["json", "markdown"])):
    """
    Run the worked example checks.

    - **format**: Output format (json or markdown)
    """
    rows = verify_examples()
    if format == "markdown":
        return {"markdown": MarkdownFormatter().format_verification(rows)}
    return {
        "examples": [
            {"name": ex.name, "title": ex.title, "frame": to_plain(ex.to_frame_file())}
            for ex in GOLDEN_EXAMPLES.values()
        ],
        "passed": all_passed(rows),
        "rows": to_plain(rows),
    }


def start_server(host: str = "0.0.0.0", port: int = 8000):
    """Start the API server"""
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    start_server()
