import math

import numpy as np
import pytest

from toptdes.closedform import (
    ClosedFormCase,
    case_problem,
    closed_form_design,
    closed_form_t,
    design_cor32,
    design_rem34,
    design_thm31,
    design_thm41,
    design_thm42,
    extremal_psi,
    support_amplitude,
    support_weights,
    threshold,
)
from toptdes.criterion import certify, t_value
from toptdes.designs import make_design, support_distance, weight_distance
from toptdes.errors import InvalidProblemError, ValidityError
from toptdes.fourier import TWO_PI


def test_thm31_m3_reference_values():
    design = design_thm31(3, 1.0, 1.0)
    expected = np.pi * np.array([1, 5, 9, 13, 17, 21]) / 12.0
    assert design.points == pytest.approx(expected, abs=1e-12)
    assert design.weights == pytest.approx(np.full(6, 1.0 / 6.0), abs=1e-15)
    assert closed_form_t("THM31", 3, (1.0, 1.0)) == pytest.approx(2.0, abs=1e-12)


def test_threshold_values():
    assert threshold(2) == pytest.approx(0.25, abs=1e-14)
    assert threshold(3) == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(InvalidProblemError):
        threshold(1)


def test_support_weights_structure():
    for m in range(2, 7):
        x, w = support_weights(m, 2.0)
        assert x.shape == (m,) and w.shape == (m,)
        assert x[0] == 0.0
        assert np.all(np.diff(x) > 0)
        assert np.all(x <= np.pi + 1e-12)
        assert w[0] == pytest.approx(1.0 / m, abs=1e-15)
        assert np.all(np.diff(w) < 0)
    with pytest.raises(ValidityError, match="below closed-form validity"):
        support_weights(3, 0.3)


def test_design_point_counts():
    assert design_thm31(4, 1.0, -0.5).points.size == 8
    assert design_cor32(4, "b1").points.size == 8
    assert design_cor32(4, "b2").points.size == 8
    assert design_thm41(4, 1.0).points.size == 7
    assert design_thm42(5, 1.0).points.size == 9
    assert design_rem34(4, 1.0).points.size == 7


def test_validity_messages():
    with pytest.raises(ValidityError, match="below validity threshold"):
        design_thm41(2, 0.1)
    with pytest.raises(InvalidProblemError, match="Theorem 4.2 requires odd m"):
        design_thm42(2, 1.0)
    with pytest.raises(InvalidProblemError, match="Remark 3.4 requires even m"):
        design_rem34(3, 1.0)
    with pytest.raises(ValidityError, match="b1 != 0"):
        design_thm31(2, 0.0, 1.0)
    with pytest.raises(InvalidProblemError, match="unknown case tag"):
        closed_form_design("THM99", 2, 1.0)


_CASES = [
    (ClosedFormCase.THM31, 2, (1.5, -0.7)),
    (ClosedFormCase.THM31, 5, (1.0, 1.0)),
    (ClosedFormCase.COR32_B1_ZERO, 3, 0.8),
    (ClosedFormCase.COR32_B2_ZERO, 3, -1.2),
    (ClosedFormCase.THM41_POS, 2, 0.5),
    (ClosedFormCase.THM41_NEG, 3, -0.9),
    (ClosedFormCase.THM42_POS, 5, 1.1),
    (ClosedFormCase.THM42_NEG, 3, -0.7),
    (ClosedFormCase.REM34, 2, 0.4),
    (ClosedFormCase.REM34, 4, -1.0),
]


@pytest.mark.parametrize("case,m,b", _CASES)
def test_extremal_psi_invariants(case, m, b):
    design = closed_form_design(case, m, b)
    amp = support_amplitude(case, m, b)
    vals = extremal_psi(case, m, b, design.points)
    assert np.abs(vals) == pytest.approx(np.full(vals.size, amp), rel=1e-9)
    signs = np.sign(vals)
    flips = int(np.sum(signs != np.roll(signs, 1)))
    if case in (
        ClosedFormCase.THM31,
        ClosedFormCase.COR32_B1_ZERO,
        ClosedFormCase.COR32_B2_ZERO,
    ):
        assert flips == 2 * m
    else:
        assert flips == 2 * m - 2
    grid = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
    assert np.abs(extremal_psi(case, m, b, grid)).max() <= amp * (1 + 1e-9)


@pytest.mark.parametrize("case,m,b", _CASES)
def test_closed_form_t_matches_criterion(case, m, b):
    problem = case_problem(case, m, b)
    design = closed_form_design(case, m, b)
    t_ref = closed_form_t(case, m, b)
    assert t_value(problem, design).t_value == pytest.approx(t_ref, rel=1e-10)


@pytest.mark.parametrize("case,m,b", _CASES)
def test_closed_forms_certify(case, m, b):
    problem = case_problem(case, m, b)
    report = certify(problem, closed_form_design(case, m, b), tol_rel=1e-6)
    assert report.passed, f"{case} m={m} b={b}: gap_rel={report.gap_relative:.3g}"


def test_explicit_t_formulas():
    b1, b2 = 1.3, -0.4
    assert closed_form_t("THM31", 4, (b1, b2)) == pytest.approx(
        b1**2 + b2**2, rel=1e-14
    )
    m, b = 3, 0.9
    c = 1.0 / (2 * m * abs(b))
    assert closed_form_t("THM41_POS", m, b) == pytest.approx(
        b**2 * (1.0 + c) ** (2 * m), rel=1e-14
    )


def test_shift_covariance():
    m, b = 5, 1.2
    base = design_thm41(m, b)
    shifted = make_design(np.mod(base.points + np.pi / 2, TWO_PI), base.weights)
    quarter = design_thm42(m, b)
    assert support_distance(quarter, shifted) < 1e-12
    assert weight_distance(quarter, shifted) < 1e-12

    m = 4
    base = design_thm41(m, b)
    shifted = make_design(
        np.mod(base.points + 3 * np.pi / 2, TWO_PI), base.weights
    )
    rem = design_rem34(m, b)
    assert support_distance(rem, shifted) < 1e-12
    assert weight_distance(rem, shifted) < 1e-12


def test_string_tags_accepted():
    a = closed_form_design("thm31", 2, (1.0, 0.5))
    b = closed_form_design(ClosedFormCase.THM31, 2, (1.0, 0.5))
    assert support_distance(a, b) == 0.0


def test_cor32_matches_thm31_limit():
    # b2 = 0 keeps the atan2 phase at pi/(2m), the same grid as the axis case
    free = design_thm31(3, 2.0, 0.0)
    axis = design_cor32(3, "b2")
    assert support_distance(free, axis) < 1e-12


def test_threshold_formula():
    for m in range(2, 9):
        half = math.pi / (2 * m)
        expected = (math.cos(half) / math.sin(half)) ** 2 / (2 * m)
        assert threshold(m) == pytest.approx(expected, rel=1e-15)
