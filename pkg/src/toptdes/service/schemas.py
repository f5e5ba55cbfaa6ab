"""Request and response shapes for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class DesignModel(BaseModel):
    points: list[float]
    weights: list[float]


class CertificateModel(BaseModel):
    h: float
    gap: float
    gap_relative: float
    worst_x: float
    support_dev: float
    orth_dev: float
    passed: bool


class SolverOptionsModel(BaseModel):
    """Mirror of the solver's options; validation happens in the core."""

    max_outer_iters: int = 5000
    grid_size: int | None = None
    cluster_delta: float = 1e-3
    stop_gap_rel: float = 1e-6
    polish_iters: int = 200
    restarts: int = 4
    seed: int = 0


class AnalyticRequest(BaseModel):
    thm: str
    m: int
    b1: float | None = None
    b2: float | None = None
    tol_rel: float = 1e-6


class AnalyticResponse(BaseModel):
    status: str
    case: str
    m: int
    k1: int
    k2: int
    b: list[float]
    design: DesignModel
    t_value: float
    certificate: CertificateModel


class SolveRequest(BaseModel):
    m: int
    k1: int
    k2: int
    b: list[float]
    options: SolverOptionsModel = Field(default_factory=SolverOptionsModel)


class SolveResponse(BaseModel):
    status: str  # "certified" or "failed"
    design: DesignModel | None = None
    t_value: float | None = None
    certificate: CertificateModel | None = None
    iterations: int | None = None
    restarts_used: int | None = None
    error: str | None = None


class CheckRequest(BaseModel):
    m: int
    k1: int
    k2: int
    b: list[float]
    design: DesignModel
    tol_rel: float = 1e-6


class CheckResponse(BaseModel):
    passed: bool
    t_value: float
    certificate: CertificateModel


class ScanRegionsRequest(BaseModel):
    case: str
    b1_range: list[float]
    b2_range: list[float]
    resolution: int | None = None
    jobs: int = 1
    options: SolverOptionsModel = Field(default_factory=SolverOptionsModel)


class TraceRequest(BaseModel):
    case: str
    b2: float
    b1_range: list[float]
    steps: int | None = None
    jobs: int = 1
    options: SolverOptionsModel = Field(default_factory=SolverOptionsModel)


class EfficiencyRequest(BaseModel):
    b2_values: list[float]
    b1_range: list[float]
    steps: int | None = None
    jobs: int = 1
    options: SolverOptionsModel = Field(default_factory=SolverOptionsModel)


class TableResponse(BaseModel):
    """CSV payload plus whatever rows could not be resolved."""

    csv: str
    n_rows: int
    failures: list = Field(default_factory=list)


class HealthResponse(BaseModel):
    status: str
    version: str
