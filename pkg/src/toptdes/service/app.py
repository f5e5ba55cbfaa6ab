"""FastAPI application exposing the core operations.

The CLI is a thin client of this app (in process by default), so every
behavior lives behind one interface.  Malformed problems and designs
map to 400 with the core's error text; an exhausted solver is not a
client error and returns 200 with status "failed" and the best
uncertified iterate.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..closedform import (
    ClosedFormCase,
    case_problem,
    closed_form_design,
    closed_form_t,
)
from ..criterion import certify, t_value
from ..designs import Design, make_design
from ..errors import (
    CertificateError,
    InvalidDesignError,
    InvalidProblemError,
    SolverError,
    ValidityError,
)
from ..fourier import DiscriminationProblem
from ..reference import efficiency_curves
from ..solver import SolverOptions, scan_regions, solve, trace_designs
from . import schemas

_CLIENT_ERRORS = (
    InvalidProblemError,
    InvalidDesignError,
    ValidityError,
    CertificateError,
)


def _analytic_parts(
    thm: str, b1: float | None, b2: float | None
) -> tuple[ClosedFormCase, object]:
    """Map a theorem tag plus coefficients to a case tag and b payload."""
    if thm == "3.1":
        if b1 is None or b2 is None:
            raise InvalidProblemError("thm 3.1 requires both b1 and b2")
        return ClosedFormCase.THM31, (float(b1), float(b2))
    if thm == "3.2":
        b1_zero = b1 is None or b1 == 0.0
        b2_zero = b2 is None or b2 == 0.0
        if b1_zero == b2_zero:
            raise InvalidProblemError(
                "thm 3.2 requires exactly one of b1, b2 to be zero"
            )
        if b1_zero:
            return ClosedFormCase.COR32_B1_ZERO, float(b2)
        return ClosedFormCase.COR32_B2_ZERO, float(b1)
    if thm == "4.1":
        if b2 is None:
            raise InvalidProblemError("thm 4.1 requires b2")
        if b1 not in (None, 0.0):
            raise InvalidProblemError("thm 4.1 fixes b1 = 0; drop b1")
        case = (
            ClosedFormCase.THM41_NEG if b2 < 0 else ClosedFormCase.THM41_POS
        )
        return case, float(b2)
    if thm == "4.2":
        if b1 is None:
            raise InvalidProblemError("thm 4.2 requires b1")
        if b2 not in (None, 0.0):
            raise InvalidProblemError("thm 4.2 fixes b2 = 0; drop b2")
        case = (
            ClosedFormCase.THM42_NEG if b1 < 0 else ClosedFormCase.THM42_POS
        )
        return case, float(b1)
    if thm == "3.4":
        if b2 is None:
            raise InvalidProblemError("thm 3.4 requires b2")
        if b1 not in (None, 0.0):
            raise InvalidProblemError("thm 3.4 fixes b1 = 0; drop b1")
        return ClosedFormCase.REM34, float(b2)
    raise InvalidProblemError(
        f"unknown theorem tag {thm!r}; expected one of 3.1, 3.2, 3.4, 4.1, 4.2"
    )


def _design_model(design: Design) -> schemas.DesignModel:
    return schemas.DesignModel(
        points=design.points.tolist(), weights=design.weights.tolist()
    )


def _certificate_model(report) -> schemas.CertificateModel:
    return schemas.CertificateModel(**report.to_dict())


def create_app() -> FastAPI:
    app = FastAPI(title="toptdes", version=__version__)

    async def _client_error(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    for cls in _CLIENT_ERRORS:
        app.add_exception_handler(cls, _client_error)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/analytic", response_model=schemas.AnalyticResponse)
    def analytic(req: schemas.AnalyticRequest) -> schemas.AnalyticResponse:
        case, b = _analytic_parts(req.thm, req.b1, req.b2)
        design = closed_form_design(case, req.m, b)
        problem = case_problem(case, req.m, b)
        report = certify(problem, design, tol_rel=req.tol_rel)
        return schemas.AnalyticResponse(
            status="ok",
            case=case.value,
            m=problem.m,
            k1=problem.k1,
            k2=problem.k2,
            b=list(problem.b),
            design=_design_model(design),
            t_value=closed_form_t(case, req.m, b),
            certificate=_certificate_model(report),
        )

    @app.post("/solve", response_model=schemas.SolveResponse)
    def solve_endpoint(req: schemas.SolveRequest) -> schemas.SolveResponse:
        problem = DiscriminationProblem(req.m, req.k1, req.k2, tuple(req.b))
        opts = SolverOptions(**req.options.model_dump())
        try:
            rep = solve(problem, opts)
        except SolverError as err:
            return schemas.SolveResponse(
                status="failed",
                design=(
                    _design_model(err.design) if err.design is not None else None
                ),
                t_value=err.t_value,
                certificate=(
                    _certificate_model(err.certificate)
                    if err.certificate is not None
                    else None
                ),
                error=str(err),
            )
        return schemas.SolveResponse(
            status="certified",
            design=_design_model(rep.design),
            t_value=rep.t_value,
            certificate=_certificate_model(rep.certificate),
            iterations=rep.iterations,
            restarts_used=rep.restarts_used,
        )

    @app.post("/check", response_model=schemas.CheckResponse)
    def check(req: schemas.CheckRequest) -> schemas.CheckResponse:
        problem = DiscriminationProblem(req.m, req.k1, req.k2, tuple(req.b))
        design = make_design(req.design.points, req.design.weights)
        report = certify(problem, design, tol_rel=req.tol_rel)
        return schemas.CheckResponse(
            passed=report.passed,
            t_value=t_value(problem, design).t_value,
            certificate=_certificate_model(report),
        )

    @app.post("/scan-regions", response_model=schemas.TableResponse)
    def scan(req: schemas.ScanRegionsRequest) -> schemas.TableResponse:
        table = scan_regions(
            req.case,
            req.b1_range,
            req.b2_range,
            resolution=req.resolution,
            opts=SolverOptions(**req.options.model_dump()),
            jobs=req.jobs,
        )
        unresolved = [
            [c.b1, c.b2, "UNRESOLVED"]
            for c in table.cells
            if c.status != "ok"
        ]
        return schemas.TableResponse(
            csv=table.to_csv(), n_rows=len(table.cells), failures=unresolved
        )

    @app.post("/trace", response_model=schemas.TableResponse)
    def trace(req: schemas.TraceRequest) -> schemas.TableResponse:
        table = trace_designs(
            req.case,
            req.b2,
            req.b1_range,
            steps=req.steps,
            opts=SolverOptions(**req.options.model_dump()),
            jobs=req.jobs,
        )
        return schemas.TableResponse(
            csv=table.to_csv(),
            n_rows=len(table.rows),
            failures=[[b1, req.b2, "failed"] for b1 in table.failures],
        )

    @app.post("/efficiency", response_model=schemas.TableResponse)
    def efficiency_endpoint(
        req: schemas.EfficiencyRequest,
    ) -> schemas.TableResponse:
        table = efficiency_curves(
            req.b2_values,
            req.b1_range,
            steps=req.steps,
            opts=SolverOptions(**req.options.model_dump()),
            jobs=req.jobs,
        )
        return schemas.TableResponse(
            csv=table.to_csv(),
            n_rows=len(table.rows),
            failures=[list(f) for f in table.failures],
        )

    return app
