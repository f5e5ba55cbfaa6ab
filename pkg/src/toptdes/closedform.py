"""Closed-form optimal designs and their Chebyshev extremal functions.

Explicit designs exist in two coefficient regimes: both top-frequency
coefficients free (THM31, with the COR32 axis cases), and the mixed
regimes where a frequency-(m-1) coefficient is pinned to 1 and the
remaining free coefficient is large enough in modulus (THM41, THM42,
REM34).  Outside the stated validity regions the optimum has a different
support structure and only the numerical solver applies; constructors
raise ValidityError rather than return a non-optimal design.
"""

from __future__ import annotations

import enum
import math
from typing import Sequence

import numpy as np

from .designs import Design, make_design
from .errors import InvalidProblemError, ValidityError
from .fourier import TWO_PI, DiscriminationProblem, chebyshev_t


class ClosedFormCase(enum.Enum):
    """Tags for the coefficient regimes with known explicit designs."""

    THM31 = "THM31"
    COR32_B1_ZERO = "COR32_B1_ZERO"
    COR32_B2_ZERO = "COR32_B2_ZERO"
    THM41_POS = "THM41_POS"
    THM41_NEG = "THM41_NEG"
    THM42_POS = "THM42_POS"
    THM42_NEG = "THM42_NEG"
    REM34 = "REM34"

    @property
    def has_threshold(self) -> bool:
        """True when validity requires |b| >= threshold(m)."""
        return self not in (
            ClosedFormCase.THM31,
            ClosedFormCase.COR32_B1_ZERO,
            ClosedFormCase.COR32_B2_ZERO,
        )


_SCALAR_CASES = frozenset(
    c for c in ClosedFormCase if c is not ClosedFormCase.THM31
)


def _as_case(case: ClosedFormCase | str) -> ClosedFormCase:
    if isinstance(case, ClosedFormCase):
        return case
    try:
        return ClosedFormCase(str(case).upper())
    except ValueError:
        valid = ", ".join(c.value for c in ClosedFormCase)
        raise InvalidProblemError(
            f"unknown case tag {case!r}; expected one of: {valid}"
        ) from None


def threshold(m: int) -> float:
    """Validity bound (1/(2m)) cot^2(pi/(2m)) on |b| for the pinned cases."""
    if m < 2:
        raise InvalidProblemError(f"threshold requires m >= 2, got m = {m}")
    half = math.pi / (2 * m)
    return (math.cos(half) / math.sin(half)) ** 2 / (2 * m)


def design_thm31(m: int, b1: float, b2: float) -> Design:
    """Equally weighted 2m-point design for the fully free top frequency.

    Points are (1/m) arctan(1/b) + (i-1) pi/m for i = 1..2m with
    b = b2/b1, reduced mod 2pi.  The two-argument arctangent keeps the
    b2 = 0 case (b = 0, phase pi/(2m)) continuous with design_cor32.
    """
    if m < 1:
        raise InvalidProblemError(f"design_thm31 requires m >= 1, got m = {m}")
    if not (math.isfinite(b1) and math.isfinite(b2)):
        raise InvalidProblemError("b1 and b2 must be finite")
    if b1 == 0.0:
        raise ValidityError(
            "design_thm31 requires b1 != 0; for b1 = 0 use design_cor32"
        )
    phase = math.atan2(1.0, b2 / b1) / m
    points = phase + np.arange(2 * m) * (math.pi / m)
    weights = np.full(2 * m, 1.0 / (2 * m))
    return make_design(points, weights)


def design_cor32(m: int, zero_coeff: str) -> Design:
    """Axis cases of the free-top-frequency design.

    zero_coeff names the vanishing coefficient: "b1" gives equal weights
    at i pi/m (i = 0..2m-1), "b2" at (2i-1) pi/(2m) (i = 1..2m).  The
    points do not depend on the magnitude of the remaining coefficient.
    """
    if m < 1:
        raise InvalidProblemError(f"design_cor32 requires m >= 1, got m = {m}")
    if zero_coeff == "b1":
        points = np.arange(2 * m) * (math.pi / m)
    elif zero_coeff == "b2":
        points = (2.0 * np.arange(1, 2 * m + 1) - 1.0) * (math.pi / (2 * m))
    else:
        raise InvalidProblemError(
            f"zero_coeff must be 'b1' or 'b2', got {zero_coeff!r}"
        )
    weights = np.full(2 * m, 1.0 / (2 * m))
    return make_design(points, weights)


def support_weights(m: int, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Half-period support points and weights shared by the pinned cases.

    x*_i = arccos(-(1+c) cos((m-i+1) pi/m) - c) with c = 1/(2m|b|) and
    w*_i = (1/m) cos^2((i-1) pi/(2m)), i = 1..m.  x*_1 = 0 exactly and
    the weights are strictly decreasing with w*_1 = 1/m.
    """
    if m < 2:
        raise InvalidProblemError(f"support_weights requires m >= 2, got m = {m}")
    if not math.isfinite(b) or b == 0.0:
        raise InvalidProblemError("b must be finite and nonzero")
    bound = threshold(m)
    if abs(b) < bound:
        raise ValidityError(
            f"b below closed-form validity threshold: |b| = {abs(b)!r} < "
            f"{bound:.6g} for m = {m}"
        )
    c = 1.0 / (2.0 * m * abs(b))
    i = np.arange(1, m + 1)
    arg = -(1.0 + c) * np.cos((m - i + 1) * math.pi / m) - c
    # |b| >= threshold keeps arg inside [-1, 1]; clip absorbs roundoff at
    # the two algebraic endpoints (i = 1 gives exactly +1, i = m hits -1
    # exactly on the boundary |b| = threshold).
    points = np.arccos(np.clip(arg, -1.0, 1.0))
    points[0] = 0.0
    weights = np.cos((i - 1) * math.pi / (2 * m)) ** 2 / m
    return points, weights


def design_thm41(m: int, b2: float) -> Design:
    """(2m-1)-point design for the pinned case with free cosine coefficient.

    b2 > 0 uses the base half-period points mirrored across 0; b2 < 0
    uses the reflection through pi.  Requires |b2| >= threshold(m).
    """
    if m < 2:
        raise InvalidProblemError(f"design_thm41 requires m >= 2, got m = {m}")
    if not math.isfinite(b2):
        raise InvalidProblemError("b2 must be finite")
    bound = threshold(m)
    if abs(b2) < bound:
        raise ValidityError(
            f"|b2| = {abs(b2)!r} is below validity threshold {bound:.6g} "
            f"for m = {m}: no closed form; use solver"
        )
    x, w = support_weights(m, b2)
    if b2 > 0:
        points = np.concatenate([x, TWO_PI - x[:0:-1]])
        weights = np.concatenate([w, w[:0:-1]])
    else:
        points = np.concatenate([math.pi - x[::-1], math.pi + x[1:]])
        weights = np.concatenate([w[::-1], w[1:]])
    return make_design(points, weights)


def design_thm42(m: int, b1: float) -> Design:
    """Odd-m companion of design_thm41: same weights, points shifted pi/2."""
    if m % 2 == 0:
        raise InvalidProblemError("Theorem 4.2 requires odd m")
    base = design_thm41(m, b1)
    points = np.mod(base.points + math.pi / 2.0, TWO_PI)
    return make_design(points, base.weights)


def design_rem34(m: int, b2: float) -> Design:
    """Even-m companion of design_thm41: points shifted by 3 pi/2.

    The positive-b2 construction is stated directly; the negative case
    is a mirrored conjecture and is returned only when its optimality
    certificate passes.
    """
    if m % 2 == 1:
        raise InvalidProblemError("Remark 3.4 requires even m")
    base = design_thm41(m, b2)
    points = np.mod(base.points + 3.0 * math.pi / 2.0, TWO_PI)
    design = make_design(points, base.weights)
    if b2 < 0:
        from .criterion import certify

        problem = case_problem(ClosedFormCase.REM34, m, b2)
        report = certify(problem, design, tol_rel=1e-7)
        if not report.passed:
            raise ValidityError(
                "negative-b2 mirrored construction failed certification "
                f"(gap_relative = {report.gap_relative:.3g}); use solver"
            )
    return design


def _scalar_b(case: ClosedFormCase, b: float | Sequence[float]) -> float:
    value = float(np.asarray(b).reshape(-1)[0]) if np.ndim(b) else float(b)
    if not math.isfinite(value):
        raise InvalidProblemError(f"{case.value} requires finite b")
    return value


def _pinned_params(
    case: ClosedFormCase, m: int, b: float | Sequence[float]
) -> tuple[float, float]:
    value = _scalar_b(case, b)
    if value == 0.0:
        raise InvalidProblemError(f"{case.value} requires b != 0")
    if case is ClosedFormCase.THM41_POS and value < 0:
        raise InvalidProblemError("THM41_POS requires b > 0")
    if case is ClosedFormCase.THM41_NEG and value > 0:
        raise InvalidProblemError("THM41_NEG requires b < 0")
    if case is ClosedFormCase.THM42_POS and value < 0:
        raise InvalidProblemError("THM42_POS requires b > 0")
    if case is ClosedFormCase.THM42_NEG and value > 0:
        raise InvalidProblemError("THM42_NEG requires b < 0")
    if case in (ClosedFormCase.THM42_POS, ClosedFormCase.THM42_NEG) and m % 2 == 0:
        raise InvalidProblemError("Theorem 4.2 requires odd m")
    if case is ClosedFormCase.REM34 and m % 2 == 1:
        raise InvalidProblemError("Remark 3.4 requires even m")
    bound = threshold(m)
    if abs(value) < bound:
        raise ValidityError(
            f"|b| = {abs(value)!r} is below validity threshold {bound:.6g} "
            f"for m = {m}"
        )
    c = 1.0 / (2.0 * m * abs(value))
    return value, c


def support_amplitude(case: ClosedFormCase | str, m: int, b) -> float:
    """Common |psi*| value at the support points of the case's design."""
    case = _as_case(case)
    if case is ClosedFormCase.THM31:
        b1, b2 = _thm31_pair(b)
        return math.hypot(b1, b2)
    if case in (ClosedFormCase.COR32_B1_ZERO, ClosedFormCase.COR32_B2_ZERO):
        value = _scalar_b(case, b)
        if value == 0.0:
            raise InvalidProblemError(f"{case.value} requires b != 0")
        return abs(value)
    value, c = _pinned_params(case, m, b)
    return abs(value) * (1.0 + c) ** m


def _thm31_pair(b) -> tuple[float, float]:
    arr = np.asarray(b, dtype=float).reshape(-1)
    if arr.size != 2:
        raise InvalidProblemError("THM31 requires b = (b1, b2)")
    b1, b2 = float(arr[0]), float(arr[1])
    if not (math.isfinite(b1) and math.isfinite(b2)):
        raise InvalidProblemError("THM31 requires finite (b1, b2)")
    if b1 == 0.0:
        raise ValidityError(
            "THM31 requires b1 != 0; for b1 = 0 use COR32_B1_ZERO"
        )
    return b1, b2


def extremal_psi(case: ClosedFormCase | str, m: int, b, x):
    """Evaluate the case's extremal residual function at angles x.

    Each function is the Chebyshev-composition form whose modulus is
    maximized, with alternating signs, exactly at the support points of
    the corresponding closed-form design.
    """
    case = _as_case(case)
    x = np.asarray(x, dtype=float)
    if case is ClosedFormCase.THM31:
        b1, b2 = _thm31_pair(b)
        out = b1 * np.sin(m * x) + b2 * np.cos(m * x)
    elif case is ClosedFormCase.COR32_B1_ZERO:
        out = _scalar_b(case, b) * np.cos(m * x)
    elif case is ClosedFormCase.COR32_B2_ZERO:
        out = _scalar_b(case, b) * np.sin(m * x)
    else:
        value, c = _pinned_params(case, m, b)
        scale = abs(value) * (1.0 + c) ** m
        if case is ClosedFormCase.THM41_POS:
            sign = (-1.0) ** m
            arg = (-np.cos(x) - c) / (1.0 + c)
        elif case is ClosedFormCase.THM41_NEG:
            sign = -1.0
            arg = (np.cos(x) - c) / (1.0 + c)
        elif case is ClosedFormCase.THM42_POS:
            sign = (-1.0) ** ((m + 1) // 2)
            arg = (-np.sin(x) - c) / (1.0 + c)
        elif case is ClosedFormCase.THM42_NEG:
            sign = (-1.0) ** ((m + 1) // 2)
            arg = (np.sin(x) - c) / (1.0 + c)
        elif value > 0:
            sign = (-1.0) ** (m // 2)
            arg = (-np.sin(x) + c) / (1.0 + c)
        else:
            sign = -((-1.0) ** (m // 2))
            arg = (-np.sin(x) - c) / (1.0 + c)
        out = sign * scale * chebyshev_t(m, arg)
    return out if out.ndim else float(out)


def closed_form_t(case: ClosedFormCase | str, m: int, b) -> float:
    """Optimal criterion value: the squared support amplitude."""
    return support_amplitude(case, m, b) ** 2


def case_problem(case: ClosedFormCase | str, m: int, b) -> DiscriminationProblem:
    """Discrimination problem whose optimum the case's design attains."""
    case = _as_case(case)
    if case is ClosedFormCase.THM31:
        b1, b2 = _thm31_pair(b)
        if m < 1:
            raise InvalidProblemError(f"THM31 requires m >= 1, got m = {m}")
        return DiscriminationProblem(m, m - 1, m - 1, (b1, b2))
    if case in (ClosedFormCase.COR32_B1_ZERO, ClosedFormCase.COR32_B2_ZERO):
        if m < 1:
            raise InvalidProblemError(
                f"{case.value} requires m >= 1, got m = {m}"
            )
        value = _scalar_b(case, b)
        if case is ClosedFormCase.COR32_B1_ZERO:
            return DiscriminationProblem(m, m - 1, m - 1, (0.0, value))
        return DiscriminationProblem(m, m - 1, m - 1, (value, 0.0))
    if m < 2:
        raise InvalidProblemError(f"{case.value} requires m >= 2, got m = {m}")
    value = _scalar_b(case, b)
    if case in (ClosedFormCase.THM41_POS, ClosedFormCase.THM41_NEG):
        return DiscriminationProblem(m, m - 1, m - 2, (0.0, 1.0, value))
    if case in (ClosedFormCase.THM42_POS, ClosedFormCase.THM42_NEG):
        return DiscriminationProblem(m, m - 1, m - 2, (value, 1.0, 0.0))
    return DiscriminationProblem(m, m - 2, m - 1, (1.0, 0.0, value))


def closed_form_design(case: ClosedFormCase | str, m: int, b) -> Design:
    """Dispatch to the constructor owning the case tag."""
    case = _as_case(case)
    if case is ClosedFormCase.THM31:
        b1, b2 = _thm31_pair(b)
        return design_thm31(m, b1, b2)
    if case is ClosedFormCase.COR32_B1_ZERO:
        return design_cor32(m, "b1")
    if case is ClosedFormCase.COR32_B2_ZERO:
        return design_cor32(m, "b2")
    value = _scalar_b(case, b)
    if case in (ClosedFormCase.THM41_POS, ClosedFormCase.THM41_NEG):
        _pinned_params(case, m, value)
        return design_thm41(m, value)
    if case in (ClosedFormCase.THM42_POS, ClosedFormCase.THM42_NEG):
        _pinned_params(case, m, value)
        return design_thm42(m, value)
    return design_rem34(m, value)
