"""T-optimality criterion and equivalence-theorem certificates.

For a design xi the criterion value is

    t_value(xi) = min_q sum_i w_i * difference(x_i, q)^2,

the weighted least-squares distance between the larger model's extra part
and the smaller model's span on the support.  A design is T-optimal iff the
minimizing residual psi satisfies |psi| <= h everywhere, |psi| = h on the
support, and the weighted normal equations hold; :func:`certify` checks
these conditions numerically.

The inner minimizer is unique only when the weighted Gram matrix has full
rank.  At rank-deficient designs (which do occur at optimality, e.g. when
the support size does not exceed the nuisance dimension) the certificate is
existential: some minimizer must satisfy the bound.  All minimizers agree
on the support, so :func:`certify` searches the Gram null space for the
coefficient vector with the smallest global maximum before measuring the
gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .designs import Design
from .errors import CertificateError, InvalidProblemError
from .fourier import (
    TWO_PI,
    DiscriminationProblem,
    difference,
    extra_basis,
    nuisance_basis,
    trig_coefficients,
    trig_derivative,
    trig_eval,
)

# Relative eigenvalue cutoff for the rank decision / pseudo-inverse.  The
# maximin optimum can sit exactly on support configurations whose Gram is
# rank deficient (the criterion is discontinuous transversally to that
# manifold), so the solver ascends the same regularized objective that the
# certificate checks; the cutoff is wide enough that a support merged from
# tight, nearly aligned clusters is classified as degenerate rather than as
# an ill-conditioned full-rank fit with a spuriously tiny criterion value.
_EIG_CUTOFF = 1e-9
# below this the design annihilates the difference and certificates are undefined
_T_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class TResult:
    """Criterion value with the minimum-norm inner solution."""

    t_value: float
    q_hat: np.ndarray = field(repr=False)
    gram_rank: int


@dataclass(frozen=True)
class CertificateReport:
    """Equivalence-theorem check for a candidate design.

    ``gap`` is max_x psi(x)^2 - t_value (nonnegative up to grid noise),
    ``support_dev`` the worst deviation of psi^2 from t_value on the
    support, ``orth_dev`` the worst violated normal equation.
    """

    h: float
    gap: float
    gap_relative: float
    worst_x: float
    support_dev: float
    orth_dev: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "gap": self.gap,
            "gap_relative": self.gap_relative,
            "worst_x": self.worst_x,
            "support_dev": self.support_dev,
            "orth_dev": self.orth_dev,
            "passed": self.passed,
        }


@dataclass(frozen=True, eq=False)
class _LsSolution:
    t: float
    q: np.ndarray
    rank: int
    null: np.ndarray  # (p, d) basis of the Gram null space, d possibly 0


def _least_squares(problem: DiscriminationProblem, points, weights) -> _LsSolution:
    """Weighted LS fit of the extra part by the nuisance span on a support.

    Minimum-norm solution via symmetric eigendecomposition with a relative
    eigenvalue cutoff; also returns the numerical null space.
    """
    A = nuisance_basis(problem, points)
    g = extra_basis(problem, points) @ problem.b
    w = np.asarray(weights, dtype=float)
    Aw = A * w[:, None]
    G = Aw.T @ A
    c = -(Aw.T @ g)
    lam, V = np.linalg.eigh(G)
    cutoff = _EIG_CUTOFF * lam[-1]
    live = lam > cutoff
    coeff = np.where(live, V.T @ c / np.where(live, lam, 1.0), 0.0)
    q = V @ coeff
    resid = g + A @ q
    t = float(max(w @ resid**2, 0.0))
    return _LsSolution(t=t, q=q, rank=int(live.sum()), null=V[:, ~live])


def t_value(problem: DiscriminationProblem, design: Design) -> TResult:
    """Criterion value of a design, with q_hat and the Gram rank."""
    ls = _least_squares(problem, design.points, design.weights)
    return TResult(t_value=ls.t, q_hat=ls.q, gram_rank=ls.rank)


def residual(problem: DiscriminationProblem, q, x):
    """The fitted difference function; shared by certificates and plots."""
    return difference(problem, q, x)


def _circle_grid(n: int) -> np.ndarray:
    return np.arange(n) * (TWO_PI / n)


def _minimize_max_abs(base: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """argmin_tau of max_i |base_i + cols_i @ tau| for a small tau dimension.

    Exact enough ternary search for one column; an LP (HiGHS) otherwise.
    """
    d = cols.shape[1]
    if d == 1:
        phi = cols[:, 0]
        scale = np.abs(phi).max()
        if scale <= 0.0:
            return np.zeros(1)
        radius = 2.0 * np.abs(base).max() / scale + 1.0
        lo, hi = -radius, radius

        def f(tau):
            return np.abs(base + tau * phi).max()

        for _ in range(200):
            third = (hi - lo) / 3.0
            m1, m2 = lo + third, hi - third
            if f(m1) <= f(m2):
                hi = m2
            else:
                lo = m1
            if hi - lo < 1e-14 * (1.0 + abs(lo) + abs(hi)):
                break
        return np.array([0.5 * (lo + hi)])
    from scipy.optimize import linprog

    n = base.size
    ones = np.ones((n, 1))
    A_ub = np.vstack([np.hstack([cols, -ones]), np.hstack([-cols, -ones])])
    b_ub = np.concatenate([-base, base])
    cost = np.zeros(d + 1)
    cost[-1] = 1.0
    res = linprog(
        cost,
        A_ub=A_ub,
        b_ub=b_ub,
        bounds=[(None, None)] * d + [(0, None)],
        method="highs",
    )
    if not res.success:
        return np.zeros(d)
    return res.x[:d]


def _local_maxima(
    problem: DiscriminationProblem, q, grid: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """All local maxima of psi^2 on the circle: dense grid + Newton polish.

    Returns ``(locations, psi^2 values)`` with locations in [0, 2*pi).
    """
    c0, a, d = trig_coefficients(problem, q)
    c0p, ap, dp = trig_derivative(c0, a, d)
    c0pp, app, dpp = trig_derivative(c0p, ap, dp)
    vals = trig_eval(c0, a, d, grid) ** 2
    up = np.roll(vals, -1)
    down = np.roll(vals, 1)
    cand = np.nonzero((vals >= down) & (vals >= up))[0]
    if cand.size == 0:
        cand = np.array([int(np.argmax(vals))])
    x = grid[cand].copy()
    step_cap = TWO_PI / grid.size
    x0 = x.copy()
    for _ in range(40):
        psi = trig_eval(c0, a, d, x)
        dpsi = trig_eval(c0p, ap, dp, x)
        ddpsi = trig_eval(c0pp, app, dpp, x)
        f = 2.0 * psi * dpsi
        fp = 2.0 * (dpsi**2 + psi * ddpsi)
        delta = np.where(np.abs(fp) > 1e-300, -f / fp, 0.0)
        delta = np.clip(delta, -step_cap, step_cap)
        x = np.clip(x + delta, x0 - step_cap, x0 + step_cap)
        if np.all(np.abs(delta) < 1e-15):
            break
    refined = trig_eval(c0, a, d, x) ** 2
    grid_vals = vals[cand]
    best = np.where(refined >= grid_vals, refined, grid_vals)
    best_x = np.where(refined >= grid_vals, np.mod(x, TWO_PI), grid[cand])
    return best_x, best


def _max_psi2(
    problem: DiscriminationProblem, q, grid: np.ndarray
) -> tuple[float, float]:
    """Global maximum of psi^2; deterministic (first index wins ties)."""
    xs, vals = _local_maxima(problem, q, grid)
    k = int(np.argmax(vals))
    return float(xs[k]), float(vals[k])


def _certificate_q(
    problem: DiscriminationProblem, ls: _LsSolution, grid: np.ndarray
) -> np.ndarray:
    """Pick the normal-equation solution minimizing the global max |psi|.

    All solutions q_hat + null @ tau coincide on the support (null
    directions annihilate the nuisance basis there), so this only sharpens
    the off-support bound of the certificate.  A short exchange loop keeps
    adding the Newton-refined peak locations to the grid constraints so the
    discretization does not limit the achievable bound.
    """
    if ls.null.shape[1] == 0:
        return ls.q
    d = ls.null.shape[1]
    null_coeffs = [
        trig_coefficients(problem, ls.null[:, j], include_fixed=False)
        for j in range(d)
    ]
    base_coeffs = trig_coefficients(problem, ls.q)

    def eval_at(x):
        base = trig_eval(*base_coeffs, x)
        cols = np.stack([trig_eval(*cf, x) for cf in null_coeffs], axis=-1)
        return base, cols

    base, cols = eval_at(grid)
    q_cur = ls.q
    for _ in range(6):
        tau = _minimize_max_abs(base, cols)
        q_cur = ls.q + ls.null @ tau
        f_con = float(np.abs(base + cols @ tau).max())
        xs, vals = _local_maxima(problem, q_cur, grid)
        f_true = float(np.sqrt(vals.max()))
        if f_true <= f_con * (1.0 + 1e-13):
            break
        extra_base, extra_cols = eval_at(xs)
        base = np.concatenate([base, extra_base])
        cols = np.vstack([cols, extra_cols])
    return q_cur


def certify(
    problem: DiscriminationProblem, design: Design, tol_rel: float = 1e-6
) -> CertificateReport:
    """Check the T-optimality equivalence conditions for ``design``.

    Passes iff the relative gap max psi^2 / t - 1 and the relative support
    deviation both stay within ``tol_rel``.
    """
    if not (np.isfinite(tol_rel) and tol_rel > 0.0):
        raise InvalidProblemError(f"tol_rel must be positive, got {tol_rel!r}")
    ls = _least_squares(problem, design.points, design.weights)
    if ls.t <= _T_FLOOR:
        raise CertificateError(
            "design annihilates the difference; certificate undefined"
        )
    grid = _circle_grid(max(4096, 512 * problem.m))
    q = _certificate_q(problem, ls, grid)
    worst_x, peak = _max_psi2(problem, q, grid)
    gap = peak - ls.t
    psi_supp = difference(problem, q, design.points)
    support_dev = float(np.abs(psi_supp**2 - ls.t).max())
    orth = nuisance_basis(problem, design.points).T @ (design.weights * psi_supp)
    orth_dev = float(np.abs(orth).max())
    gap_relative = gap / ls.t
    passed = bool(gap_relative <= tol_rel and support_dev <= tol_rel * ls.t)
    return CertificateReport(
        h=float(np.sqrt(ls.t)),
        gap=float(gap),
        gap_relative=float(gap_relative),
        worst_x=float(worst_x),
        support_dev=support_dev,
        orth_dev=orth_dev,
        passed=passed,
    )


def efficiency(problem: DiscriminationProblem, design: Design, t_opt: float) -> float:
    """T-efficiency of a design relative to the optimal value ``t_opt``."""
    if not (np.isfinite(t_opt) and t_opt > 0.0):
        raise InvalidProblemError(f"t_opt must be positive, got {t_opt!r}")
    eff = t_value(problem, design).t_value / t_opt
    return float(min(max(eff, 0.0), 1.0 + 1e-9))
