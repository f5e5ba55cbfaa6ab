"""Fixed reference designs and their T-efficiency against the optimum.

The two reference designs live on the eight equally spaced points
i*pi/4 and differ only in their weights: uniform 1/8 for the
determinant-optimal design of the extended model, alternating 3/20 and
1/10 for the variant targeting the three highest coefficients.  Both
are stated for the m=3 discrimination family; ``uniform_design`` is the
generalized plumbing for other m.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .closedform import (
    ClosedFormCase,
    closed_form_t,
    design_thm41,
    design_thm42,
    threshold,
)
from .criterion import certify, efficiency
from .designs import Design, make_design
from .errors import InvalidProblemError, SolverError, ValidityError
from .fourier import TWO_PI, DiscriminationProblem
from .solver import SolverOptions, _run_jobs, scan_problem, solve

_EIGHT_POINTS = np.arange(8) * (TWO_PI / 8.0)


def d_optimal_design() -> Design:
    """Eight equally spaced points, equal weights 1/8 (m=3 family)."""
    return make_design(_EIGHT_POINTS, np.full(8, 0.125))


def d3_optimal_design() -> Design:
    """Same eight points, weights alternating 3/20 and 1/10 from x=0."""
    weights = np.tile([3.0 / 20.0, 1.0 / 10.0], 4)
    return make_design(_EIGHT_POINTS, weights)


def uniform_design(m: int) -> Design:
    """Uniform design on 2m+2 equally spaced points; plumbing for any m."""
    if m < 1:
        raise InvalidProblemError(f"m must be a positive integer, got {m!r}")
    n = 2 * m + 2
    return make_design(np.arange(n) * (TWO_PI / n), np.full(n, 1.0 / n))


@dataclass(frozen=True)
class EfficiencyRow:
    b1: float
    b2: float
    eff_D: float
    eff_D3: float
    t_opt: float


@dataclass(frozen=True)
class EfficiencyTable:
    """T-efficiency of the reference designs over a (b1, b2) grid.

    Rows whose optimal value could not be certified are listed in
    ``failures`` as (b1, b2, message) and omitted from the CSV.
    """

    rows: tuple[EfficiencyRow, ...]
    failures: tuple[tuple[float, float, str], ...]

    CSV_HEADER = "b1,b2,eff_D,eff_D3,t_opt"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.b1!r},{r.b2!r},{r.eff_D!r},{r.eff_D3!r},{r.t_opt!r}"
            )
        return "\n".join(lines) + "\n"


def _closed_form_t_opt(
    problem: DiscriminationProblem, b1: float, b2: float
) -> float | None:
    """Certified closed-form optimum on the axes, None off them."""
    try:
        if b1 == 0.0 and abs(b2) >= threshold(3):
            design = design_thm41(3, b2)
            case = (
                ClosedFormCase.THM41_POS if b2 > 0 else ClosedFormCase.THM41_NEG
            )
            t = closed_form_t(case, 3, b2)
        elif b2 == 0.0 and abs(b1) >= threshold(3):
            design = design_thm42(3, b1)
            case = (
                ClosedFormCase.THM42_POS if b1 > 0 else ClosedFormCase.THM42_NEG
            )
            t = closed_form_t(case, 3, b1)
        else:
            return None
    except ValidityError:
        return None
    if certify(problem, design, tol_rel=1e-6).passed:
        return t
    return None


def _efficiency_cell(args: tuple[float, float, dict]):
    b1, b2, opts_dict = args
    problem = scan_problem("m3", b1, b2)
    t_opt = _closed_form_t_opt(problem, b1, b2)
    if t_opt is None:
        try:
            t_opt = solve(problem, SolverOptions(**opts_dict)).t_value
        except SolverError as err:
            return (b1, b2, str(err))
    return EfficiencyRow(
        b1=b1,
        b2=b2,
        eff_D=efficiency(problem, d_optimal_design(), t_opt),
        eff_D3=efficiency(problem, d3_optimal_design(), t_opt),
        t_opt=t_opt,
    )


def efficiency_curves(
    b2_values: Sequence[float],
    b1_range: Sequence[float],
    steps: int | None = None,
    opts: SolverOptions | None = None,
    jobs: int = 1,
) -> EfficiencyTable:
    """Efficiency of both reference designs along b1 sweeps, one per b2.

    The underlying family is the m=3 scan case with the cos(2x)
    coefficient fixed to 1.  Axis cells with a valid closed form skip
    the solver; every optimum, closed-form or solved, is certified.
    """
    b2_arr = np.asarray(b2_values, dtype=float)
    if b2_arr.ndim != 1 or b2_arr.size == 0:
        raise InvalidProblemError("b2_values must be a nonempty 1-d sequence")
    if opts is None:
        opts = SolverOptions()
    b1_arr = np.asarray(b1_range, dtype=float)
    if b1_arr.size == 2 and steps is not None:
        if steps < 2:
            raise InvalidProblemError("steps must be at least 2")
        b1_arr = np.linspace(b1_arr[0], b1_arr[1], steps)
    elif b1_arr.size < 2:
        raise InvalidProblemError("b1_range needs at least two values")
    opts_dict = dataclasses.asdict(opts)
    args = [
        (float(b1), float(b2), opts_dict) for b2 in b2_arr for b1 in b1_arr
    ]
    results = _run_jobs(_efficiency_cell, args, jobs)
    rows = tuple(r for r in results if isinstance(r, EfficiencyRow))
    failures = tuple(r for r in results if not isinstance(r, EfficiencyRow))
    return EfficiencyTable(rows=rows, failures=failures)
