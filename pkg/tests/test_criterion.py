import numpy as np
import pytest

from toptdes.closedform import case_problem, closed_form_design
from toptdes.criterion import certify, efficiency, residual, t_value
from toptdes.designs import convex_combine, make_design
from toptdes.errors import CertificateError, InvalidProblemError
from toptdes.fourier import TWO_PI, DiscriminationProblem, nuisance_basis
from toptdes.reference import d_optimal_design

import oracles


def _random_instance(rng):
    m, k1, k2 = oracles.random_problem_dims(rng)
    b = oracles.random_b(rng, m, k1, k2)
    prob = DiscriminationProblem(m, k1, k2, b)
    pts, w = oracles.random_design_arrays(rng, prob.n_nuisance + 1, prob.n_nuisance + 2 * m)
    return prob, make_design(pts, w)


def test_t_value_matches_lstsq_oracle(rng):
    for _ in range(100):
        prob, design = _random_instance(rng)
        res = t_value(prob, design)
        expected = oracles.t_oracle(
            prob.m, prob.k1, prob.k2, prob.b, design.points, design.weights
        )
        assert res.t_value == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_normal_equations_hold_at_optimum(rng):
    for _ in range(100):
        prob, design = _random_instance(rng)
        res = t_value(prob, design)
        psi = residual(prob, res.q_hat, design.points)
        orth = nuisance_basis(prob, design.points).T @ (design.weights * psi)
        scale = max(1.0, float(np.abs(prob.b).max()) ** 2)
        assert np.abs(orth).max() < 1e-9 * scale


def test_t_concave_in_the_design(rng):
    for _ in range(100):
        m, k1, k2 = oracles.random_problem_dims(rng)
        b = oracles.random_b(rng, m, k1, k2)
        prob = DiscriminationProblem(m, k1, k2, b)
        p1, w1 = oracles.random_design_arrays(rng, 2, 6)
        p2, w2 = oracles.random_design_arrays(rng, 2, 6)
        d1, d2 = make_design(p1, w1), make_design(p2, w2)
        alpha = float(rng.uniform(0.1, 0.9))
        mix = convex_combine(d1, d2, alpha)
        t_mix = t_value(prob, mix).t_value
        bound = (1 - alpha) * t_value(prob, d1).t_value + alpha * t_value(
            prob, d2
        ).t_value
        assert t_mix >= bound - 1e-9 * max(1.0, abs(bound))


def test_quadratic_scaling_in_b(rng):
    for _ in range(100):
        prob, design = _random_instance(rng)
        c = float(rng.uniform(0.5, 3.0))
        scaled = DiscriminationProblem(prob.m, prob.k1, prob.k2, c * prob.b)
        t1 = t_value(prob, design).t_value
        t2 = t_value(scaled, design).t_value
        assert t2 == pytest.approx(c**2 * t1, rel=1e-9, abs=1e-12)


def test_certify_accepts_closed_forms():
    for case, m, b in [
        ("THM31", 3, (1.0, 1.0)),
        ("THM41_POS", 2, 0.5),
        ("THM42_POS", 3, 1.0),
    ]:
        prob = case_problem(case, m, b)
        report = certify(prob, closed_form_design(case, m, b), tol_rel=1e-6)
        assert report.passed
        assert report.gap_relative <= 1e-7
        assert report.h == pytest.approx(np.sqrt(report.h**2))


def test_certify_rejects_non_optimal_design():
    prob = DiscriminationProblem(3, 2, 1, (1.0, 1.0, 1.0))
    report = certify(prob, d_optimal_design(), tol_rel=1e-6)
    assert not report.passed
    assert report.gap_relative > 0.1


def test_certify_rejects_a_shifted_optimum():
    case, m, b = "THM41_POS", 3, 1.0
    prob = case_problem(case, m, b)
    good = closed_form_design(case, m, b)
    shifted = make_design(np.mod(good.points + 0.05, TWO_PI), good.weights)
    report = certify(prob, shifted, tol_rel=1e-6)
    assert not report.passed


def test_certificate_undefined_when_design_annihilates():
    prob = DiscriminationProblem(1, 0, 0, (1.0, 0.0))  # difference = sin x
    dead = make_design([0.0, np.pi], [0.5, 0.5])
    assert t_value(prob, dead).t_value == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(CertificateError):
        certify(prob, dead)


def test_efficiency_bounds_and_validation():
    case, m, b = "THM31", 2, (1.0, 1.0)
    prob = case_problem(case, m, b)
    opt = closed_form_design(case, m, b)
    assert efficiency(prob, opt, 2.0) == pytest.approx(1.0, abs=1e-9)
    assert 0.0 <= efficiency(prob, d_optimal_design_m2(), 2.0) < 1.0
    with pytest.raises(InvalidProblemError):
        efficiency(prob, opt, 0.0)
    with pytest.raises(InvalidProblemError):
        efficiency(prob, opt, float("nan"))


def d_optimal_design_m2():
    # any clearly sub-optimal comparison design for the m=2 problem
    pts = np.arange(6) * (TWO_PI / 6)
    return make_design(pts, np.full(6, 1.0 / 6.0))


def test_gram_rank_reported():
    prob = DiscriminationProblem(2, 1, 0, (0.0, 1.0, 0.1))
    aligned = make_design([0.0, np.pi], [0.5, 0.5])  # sin x agrees on both
    res = t_value(prob, aligned)
    assert res.gram_rank < prob.n_nuisance
    generic = make_design([0.3, 1.8, 4.0], [0.4, 0.3, 0.3])
    assert t_value(prob, generic).gram_rank == prob.n_nuisance
