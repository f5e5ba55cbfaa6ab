"""Numerical maximin solver with certificate-based stopping.

The criterion t(xi) is concave in the design (a pointwise minimum of
linear functionals), so a vertex-direction exchange converges globally:
each outer iteration moves mass toward the current worst point of the
fitted difference function.  Periodic maintenance merges clusters,
prunes dust and polishes points and weights; every maintenance stage is
gated so the criterion value never decreases.  A run stops as soon as an
independently computed certificate passes, which proves global
optimality up to the stop tolerance regardless of the iterate path.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .criterion import (
    CertificateReport,
    _circle_grid,
    _least_squares,
    _local_maxima,
    certify,
)
from .designs import Design, _wrap, make_design, merge_close
from .errors import CertificateError, InvalidProblemError, SolverError
from .fourier import (
    TWO_PI,
    DiscriminationProblem,
    difference,
    trig_coefficients,
    trig_derivative,
    trig_eval,
)

# cadence of the merge/prune/polish maintenance phase, in outer iterations
_MAINTAIN_EVERY = 25
_PRUNE_FLOOR = 1e-6
# slack for the "criterion never decreases" gates
_GATE_SLACK = 1e-12


@dataclass(frozen=True)
class SolverOptions:
    """Tuning knobs; the defaults certify all regimes used in the tests.

    grid_size = None selects 512 * m.  Restart r draws its random
    rotation from seed + r, so runs are reproducible point for point.
    """

    max_outer_iters: int = 5000
    grid_size: int | None = None
    cluster_delta: float = 1e-3
    stop_gap_rel: float = 1e-6
    polish_iters: int = 200
    restarts: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_outer_iters < 1:
            raise InvalidProblemError("max_outer_iters must be positive")
        if self.grid_size is not None and self.grid_size < 8:
            raise InvalidProblemError("grid_size must be at least 8")
        if not (0.0 < self.cluster_delta < math.pi):
            raise InvalidProblemError("cluster_delta must lie in (0, pi)")
        if not (0.0 < self.stop_gap_rel < 1.0):
            raise InvalidProblemError("stop_gap_rel must lie in (0, 1)")
        if self.polish_iters < 0:
            raise InvalidProblemError("polish_iters must be nonnegative")
        if self.restarts < 1:
            raise InvalidProblemError("restarts must be positive")


@dataclass(frozen=True)
class SolveReport:
    """Certified solve outcome."""

    design: Design
    t_value: float
    certificate: CertificateReport
    iterations: int
    restarts_used: int


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    mask = u - css / idx > 0.0
    rho = idx[mask][-1]
    theta = css[mask][-1] / rho
    return np.maximum(v - theta, 0.0)


def _psi_at(problem: DiscriminationProblem, q: np.ndarray, x: np.ndarray):
    return difference(problem, q, x)


def _psi_prime_coeffs(problem: DiscriminationProblem, q: np.ndarray):
    return trig_derivative(*trig_coefficients(problem, q))


def _polish(
    problem: DiscriminationProblem,
    points: np.ndarray,
    weights: np.ndarray,
    iters: int,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Ascent on weights (projected supergradient) and points (backtracked).

    Skipped for iterations where the Gram is rank deficient: the
    supergradient is not unique there and the step direction is
    unreliable.  Returns the improved triple; never decreases t.
    """
    p = problem.n_nuisance
    pts = points.copy()
    w = weights.copy()
    ls = _least_squares(problem, pts, w)
    t = ls.t
    step_w = 1.0
    step_x = 0.1
    for _ in range(iters):
        if ls.rank < p:
            break
        improved = False

        psi_s = _psi_at(problem, ls.q, pts)
        grad_w = psi_s**2
        spread = grad_w.max() - grad_w.min()
        if spread > 0.0:
            scale = step_w / spread
            for _ in range(14):
                trial_w = _project_simplex(w + scale * grad_w)
                trial = _least_squares(problem, pts, trial_w)
                if trial.t > t + _GATE_SLACK * max(t, 1.0):
                    w, t, ls = trial_w, trial.t, trial
                    step_w = min(step_w * 1.5, 1e3)
                    improved = True
                    break
                scale *= 0.5
            else:
                step_w = max(step_w * 0.5, 1e-12)

        if ls.rank < p:
            break
        psi_s = _psi_at(problem, ls.q, pts)
        dcoef = _psi_prime_coeffs(problem, ls.q)
        grad_x = w * 2.0 * psi_s * trig_eval(*dcoef, pts)
        gmax = np.abs(grad_x).max()
        if gmax > 0.0:
            scale = step_x / gmax
            for _ in range(14):
                trial_pts = np.mod(pts + scale * grad_x, TWO_PI)
                trial = _least_squares(problem, trial_pts, w)
                if trial.t > t + _GATE_SLACK * max(t, 1.0):
                    pts, t, ls = trial_pts, trial.t, trial
                    step_x = min(step_x * 1.5, 1.0)
                    improved = True
                    break
                scale *= 0.5
            else:
                step_x = max(step_x * 0.5, 1e-14)

        if not improved:
            break
    return pts, w, t


def _optimal_weights(
    problem: DiscriminationProblem,
    points: np.ndarray,
    weights: np.ndarray,
    iters: int = 60,
) -> tuple[np.ndarray, float]:
    """Multiplicative reweighting toward equalized psi^2 on the support.

    w <- w * psi^2 / t is a fixed-point iteration whose equilibrium is the
    equal-modulus condition of the certificate.  psi at positively
    weighted support points is the same for every normal-equation
    solution, so this is well defined even at rank-deficient iterates.
    Returns the best iterate; never worse than the input.
    """
    best_w = weights
    best_t = _least_squares(problem, points, weights).t
    cur = weights
    for _ in range(iters):
        ls = _least_squares(problem, points, cur)
        psi2 = _psi_at(problem, ls.q, points) ** 2
        tot = float(cur @ psi2)
        if tot <= 0.0:
            break
        nxt = cur * psi2 / tot
        s = nxt.sum()
        if s <= 0.0:
            break
        cur = nxt / s
        t = _least_squares(problem, points, cur).t
        if t > best_t:
            best_w, best_t = cur, t
    return best_w, best_t


def _snap_points(
    problem: DiscriminationProblem,
    points: np.ndarray,
    weights: np.ndarray,
    grid: np.ndarray,
) -> np.ndarray:
    """Move support points onto the nearest local maxima of psi^2.

    The optimal support sits exactly on such maxima, so near convergence
    this is a Remez-style exchange with superlinear tail behavior.  Only
    applied at full Gram rank; heavier points claim peaks first and each
    peak is used once.
    """
    ls = _least_squares(problem, points, weights)
    if ls.rank < problem.n_nuisance:
        return points
    xs, _ = _local_maxima(problem, ls.q, grid)
    cap = min(0.35, math.pi / (2.0 * problem.m))
    new_pts = points.copy()
    taken: set[int] = set()
    for i in np.argsort(-weights):
        d = np.abs(np.mod(xs - points[i] + math.pi, TWO_PI) - math.pi)
        j = int(np.argmin(d))
        if j in taken or d[j] > cap:
            continue
        new_pts[i] = xs[j]
        taken.add(j)
    return np.mod(new_pts, TWO_PI)


def _nuisance_deriv(problem: DiscriminationProblem, x: np.ndarray) -> np.ndarray:
    """d/dx of the nuisance basis rows [1, sin(ix).., cos(ix)..]."""
    x = np.asarray(x, dtype=float)
    cols = [np.zeros_like(x)]
    for i in range(1, problem.k1 + 1):
        cols.append(i * np.cos(i * x))
    for i in range(1, problem.k2 + 1):
        cols.append(-i * np.sin(i * x))
    return np.stack(cols, axis=-1)


def _newton_finish(
    problem: DiscriminationProblem,
    points: np.ndarray,
    weights: np.ndarray,
    grid: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, float] | None:
    """Solve the equioscillation system exactly by damped Newton.

    Unknowns (q, w, x, h); equations: weighted normal equations,
    psi(x_i)^2 = h, psi(x_i) psi'(x_i) = 0, sum w = 1.  The system is
    square and, at an optimum, nonsingular even when the Gram matrix is
    rank deficient (the degenerate supports with s <= p points), so this
    one finisher serves both regimes.  Quadratic local convergence turns
    a 1e-4-equalized iterate into a machine-precision certificate.
    Returns None when the system is singular, an iterate leaves the
    feasible region, or the residual stalls - the caller then keeps its
    gated first-order path.
    """
    from .criterion import _certificate_q, _minimize_max_abs
    from .fourier import extra_basis, nuisance_basis

    p = problem.n_nuisance
    s = points.size
    if s < 2 or s > 3 * problem.m + 4:
        return None
    ls0 = _least_squares(problem, points, weights)
    if ls0.null.shape[1]:
        # aligned rank-deficient candidate: the minimax refinement over
        # the null space is the extremal solution on this support
        q = _certificate_q(problem, ls0, grid).copy()
        h = float(ls0.t)
    else:
        # by duality the global Chebyshev approximation of the extra
        # part by the nuisance span is the extremal psi at the optimum
        # and its squared sup-norm is the optimal criterion value; this
        # start stays accurate when the candidate Gram matrix is ill
        # conditioned and the least-squares coefficients explode
        A_g = nuisance_basis(problem, grid)
        e_g = extra_basis(problem, grid) @ problem.b
        q = _minimize_max_abs(e_g, A_g)
        h = float(np.abs(e_g + A_g @ q).max()) ** 2
    x = points.copy()
    w = weights.copy()

    def residual_parts(q, w, x):
        A = nuisance_basis(problem, x)
        Ad = _nuisance_deriv(problem, x)
        e = extra_basis(problem, x) @ problem.b
        coef = trig_coefficients(problem, q)
        dcoef = trig_derivative(*coef)
        ddcoef = trig_derivative(*dcoef)
        psi = A @ q + e
        dpsi = trig_eval(*dcoef, x)
        ddpsi = trig_eval(*ddcoef, x)
        return A, Ad, psi, dpsi, ddpsi

    def assemble(q, w, x, h):
        A, Ad, psi, dpsi, ddpsi = residual_parts(q, w, x)
        F = np.concatenate(
            [
                A.T @ (w * psi),
                psi**2 - h,
                psi * dpsi,
                [w.sum() - 1.0],
            ]
        )
        n = p + 2 * s + 1
        J = np.zeros((n, n))
        # column blocks: q (p), w (s), x (s), h (1)
        J[:p, :p] = (A * w[:, None]).T @ A
        J[:p, p : p + s] = (A * psi[:, None]).T
        J[:p, p + s : p + 2 * s] = (
            (Ad * psi[:, None] + A * dpsi[:, None]) * w[:, None]
        ).T
        J[p : p + s, :p] = 2.0 * psi[:, None] * A
        J[p : p + s, p + s : p + 2 * s] = np.diag(2.0 * psi * dpsi)
        J[p : p + s, -1] = -1.0
        J[p + s : p + 2 * s, :p] = dpsi[:, None] * A + psi[:, None] * Ad
        J[p + s : p + 2 * s, p + s : p + 2 * s] = np.diag(dpsi**2 + psi * ddpsi)
        J[-1, p : p + s] = 1.0
        return F, J

    converged = False
    for _ in range(40):
        F, J = assemble(q, w, x, h)
        fnorm = float(np.abs(F).max())
        if fnorm <= 1e-14 * max(1.0, h):
            converged = True
            break
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        dx = delta[p + s : p + 2 * s]
        cap = np.abs(dx).max()
        if cap > 0.1:
            delta = delta * (0.1 / cap)
        # backtrack on the residual norm; the basin can be much narrower
        # than the step cap when the extra coefficients are large
        step = 1.0
        accepted = False
        for _ in range(12):
            q_n = q + step * delta[:p]
            w_n = w + step * delta[p : p + s]
            x_n = x + step * delta[p + s : p + 2 * s]
            h_n = h + step * delta[-1]
            if np.all(w_n > 0.0) and np.isfinite(h_n) and h_n > 0.0:
                F_n, _ = assemble(q_n, w_n, x_n, h_n)
                f_n = float(np.abs(F_n).max())
                if np.isfinite(f_n) and (f_n < fnorm or f_n <= 1e-13):
                    q, w, x, h = q_n, w_n, x_n, h_n
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            return None
    if not converged:
        F, _ = assemble(q, w, x, h)
        if float(np.abs(F).max()) > 1e-9 * max(1.0, h):
            return None
    x = _wrap(x)
    if np.unique(np.round(x, 9)).size < s:
        return None
    t = _least_squares(problem, x, w).t
    return x, w, t


def _prune(points: np.ndarray, weights: np.ndarray):
    keep = weights >= _PRUNE_FLOOR
    if keep.all() or not keep.any():
        return points, weights
    w = weights[keep]
    return points[keep], w / w.sum()


def _peak_candidate(
    problem: DiscriminationProblem,
    points: np.ndarray,
    weights: np.ndarray,
    grid: np.ndarray,
) -> tuple[np.ndarray, np.ndarray] | None:
    """Restructure the support onto the residual's peak set.

    Near-optimal first-order iterates misrepresent the support in both
    directions: a collapsed pair leaves the iterate one point short
    (its midpoint sits in a valley Newton cannot leave), and a smeared
    cluster carries several points where one belongs.  The peak
    locations of the current residual encode the intended structure, so
    hand the finisher that set directly, each peak inheriting the
    weight of its nearest support point (a collapsed pair claims its
    midpoint from both sides, restoring the two separate masses).
    """
    from .criterion import _certificate_q
    from .fourier import extra_basis, nuisance_basis

    ls = _least_squares(problem, points, weights)
    q = _certificate_q(problem, ls, grid) if ls.null.shape[1] else ls.q
    psi_sup = extra_basis(problem, points) @ problem.b + nuisance_basis(
        problem, points
    ) @ q
    h_sup = float(np.max(psi_sup**2))
    if h_sup <= 0.0:
        return None
    xs, vals = _local_maxima(problem, q, grid)
    if float(vals.max()) <= h_sup * (1.0 + 1e-8):
        return None
    keep = vals >= 0.5 * h_sup
    xs = np.sort(xs[keep])
    if not (2 <= xs.size <= 3 * problem.m + 4):
        return None
    gaps = np.diff(np.concatenate([xs, [xs[0] + TWO_PI]]))
    if float(gaps.min()) <= 1e-4:
        return None
    diff_mat = np.abs(xs[:, None] - points[None, :])
    diff_mat = np.minimum(diff_mat, TWO_PI - diff_mat)
    nearest = np.argmin(diff_mat, axis=1)
    claims = np.bincount(nearest, minlength=points.size).astype(float)
    aug_w = weights[nearest] / claims[nearest]
    total = aug_w.sum()
    if total <= 0.0:
        return None
    return xs, aug_w / total


def _maintain(
    problem: DiscriminationProblem,
    points: np.ndarray,
    weights: np.ndarray,
    t_now: float,
    opts: SolverOptions,
    grid: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Merge, prune, polish, equalize/snap; stages revert if they lower t."""
    pts, w, t = points, weights, t_now

    design = make_design(pts, w)
    merged = merge_close(design, opts.cluster_delta)
    if merged.support_size < design.support_size:
        trial = _least_squares(problem, merged.points, merged.weights)
        if trial.t >= t - _GATE_SLACK * max(t, 1.0):
            pts, w, t = merged.points.copy(), merged.weights.copy(), trial.t

    trial_pts, trial_w = _prune(pts, w)
    if trial_pts.size < pts.size:
        trial = _least_squares(problem, trial_pts, trial_w)
        if trial.t >= t - _GATE_SLACK * max(t, 1.0):
            pts, w, t = trial_pts, trial_w, trial.t

    if opts.polish_iters > 0:
        trial_pts, trial_w, trial_t = _polish(problem, pts, w, opts.polish_iters)
        if trial_t >= t - _GATE_SLACK * max(t, 1.0):
            pts, w, t = trial_pts, trial_w, trial_t

    # the gradient phase converges only linearly near the optimum; the
    # equalize/snap rounds close in at Remez speed and the Newton finish
    # drives the certificate conditions to machine precision
    before = t
    for _ in range(3):
        new_w, _ = _optimal_weights(problem, pts, w)
        new_pts = _snap_points(problem, pts, new_w, grid)
        t_new = _least_squares(problem, new_pts, new_w).t
        if t_new >= t - _GATE_SLACK * max(t, 1.0):
            pts, w, t = new_pts, new_w, t_new
        if t_new <= before + _GATE_SLACK * max(before, 1.0):
            break
        before = t_new

    # Newton candidates: the heavyweight support as-is, then merged at
    # the cluster radius, then at a coarse radius.  Merging is not gated
    # here; a bad merge just fails the t gate on the Newton output.
    # Degenerate optima (s <= p support points, rank-deficient Gram
    # matrix) are reachable only through the merged candidates, because
    # first-order merges toward them crash the regularized criterion.
    hefty = w > 1e-4
    if hefty.any():
        base_pts = pts[hefty]
        base_w = w[hefty] / w[hefty].sum()
        candidates = [(base_pts, base_w)]
        seen = {base_pts.size}
        coarse = min(0.3, 0.45 * math.pi / problem.m)
        for delta in (opts.cluster_delta, coarse):
            try:
                merged_c = merge_close(make_design(base_pts, base_w), delta)
            except Exception:
                continue
            if merged_c.support_size not in seen:
                seen.add(merged_c.support_size)
                candidates.append((merged_c.points, merged_c.weights))
        # tried first: a design finished on the residual's peak set
        # beats every stationary design on a wrong support, so the t
        # gate orders the outcomes correctly
        peak = _peak_candidate(problem, base_pts, base_w, grid)
        if peak is not None:
            candidates.insert(0, peak)
        for c_pts, c_w in candidates:
            if c_pts.size > 1:
                ordered = np.sort(c_pts)
                gap_min = min(
                    np.diff(ordered).min(), TWO_PI - (ordered[-1] - ordered[0])
                )
                if gap_min < 1e-4:
                    continue
            finished = _newton_finish(problem, c_pts, c_w, grid)
            if finished is not None and finished[2] >= t - _GATE_SLACK * max(t, 1.0):
                pts, w, t = finished
                break

    if t < t_now - _GATE_SLACK * max(t_now, 1.0):
        return points, weights, t_now
    return pts, w, t


def _candidate_design(points: np.ndarray, weights: np.ndarray) -> Design | None:
    keep = weights > 0.0
    if keep.sum() == 0:
        return None
    pts, w = _prune(points[keep], weights[keep])
    try:
        return make_design(pts, w / w.sum())
    except Exception:
        return None


def _try_certificate(
    problem: DiscriminationProblem,
    points: np.ndarray,
    weights: np.ndarray,
    tol_rel: float,
) -> tuple[Design, CertificateReport] | None:
    design = _candidate_design(points, weights)
    if design is None:
        return None
    try:
        report = certify(problem, design, tol_rel=tol_rel)
    except CertificateError:
        return None
    if report.passed:
        return design, report
    return None


@dataclass
class _RestartResult:
    certified: bool
    design: Design | None
    report: CertificateReport | None
    t: float
    iterations: int


def _run_restart(
    problem: DiscriminationProblem,
    opts: SolverOptions,
    grid: np.ndarray,
    A_grid: np.ndarray,
    e_grid: np.ndarray,
    seed: int,
) -> _RestartResult:
    rng = np.random.default_rng(seed)
    m = problem.m
    n0 = 2 * m + 1
    pts = np.mod(
        np.arange(n0) * (TWO_PI / n0) + rng.uniform(0.0, TWO_PI), TWO_PI
    )
    w = np.full(n0, 1.0 / n0)
    t = 0.0
    last_attempt = -10
    for k in range(opts.max_outer_iters):
        ls = _least_squares(problem, pts, w)
        t = ls.t
        q_eff = ls.q
        if ls.null.shape[1] == 1:
            # all normal-equation solutions agree on the support; pick the
            # one with the smallest global peak so the gap test is fair
            from .criterion import _minimize_max_abs

            col = A_grid @ ls.null[:, 0]
            tau = _minimize_max_abs(A_grid @ ls.q + e_grid, col[:, None])
            q_eff = ls.q + ls.null @ tau

        xs, vals = _local_maxima(problem, q_eff, grid)
        j = int(np.argmax(vals))
        x_plus, peak = float(xs[j]), float(vals[j])
        gap_rel = (peak - t) / max(t, 1e-14)

        if gap_rel <= opts.stop_gap_rel and k - last_attempt >= 5:
            last_attempt = k
            hit = _try_certificate(problem, pts, w, opts.stop_gap_rel)
            if hit is not None:
                return _RestartResult(True, hit[0], hit[1], t, k + 1)

        alpha = 1.0 / (k + 2.0)
        w = w * (1.0 - alpha)
        pts = np.append(pts, x_plus)
        w = np.append(w, alpha)

        if (k + 1) % _MAINTAIN_EVERY == 0:
            pts, w, t = _maintain(
                problem, pts, w, _least_squares(problem, pts, w).t, opts, grid
            )
            if k - last_attempt >= 5:
                last_attempt = k
                hit = _try_certificate(problem, pts, w, opts.stop_gap_rel)
                if hit is not None:
                    return _RestartResult(True, hit[0], hit[1], t, k + 1)

    pts, w, t = _maintain(problem, pts, w, _least_squares(problem, pts, w).t, opts, grid)
    hit = _try_certificate(problem, pts, w, opts.stop_gap_rel)
    if hit is not None:
        return _RestartResult(True, hit[0], hit[1], t, opts.max_outer_iters)
    design = _candidate_design(pts, w)
    report = None
    if design is not None:
        try:
            report = certify(problem, design, tol_rel=opts.stop_gap_rel)
        except CertificateError:
            report = None
    return _RestartResult(False, design, report, t, opts.max_outer_iters)


def solve(
    problem: DiscriminationProblem, opts: SolverOptions | None = None
) -> SolveReport:
    """Find and certify a T-optimal design for ``problem``.

    Runs up to ``opts.restarts`` independent exchange runs and returns as
    soon as one produces a passing certificate (the certificate is a
    global optimality proof, so later restarts cannot do better than the
    stop tolerance).  Raises SolverError with the best uncertified design
    attached when no restart certifies.
    """
    if opts is None:
        opts = SolverOptions()
    from .fourier import extra_basis, nuisance_basis

    grid_n = opts.grid_size if opts.grid_size is not None else 512 * problem.m
    grid = _circle_grid(grid_n)
    A_grid = nuisance_basis(problem, grid)
    e_grid = extra_basis(problem, grid) @ problem.b

    total_iters = 0
    best: _RestartResult | None = None
    for r in range(opts.restarts):
        result = _run_restart(problem, opts, grid, A_grid, e_grid, opts.seed + r)
        total_iters += result.iterations
        if result.certified:
            assert result.design is not None and result.report is not None
            return SolveReport(
                design=result.design,
                t_value=result.t,
                certificate=result.report,
                iterations=total_iters,
                restarts_used=r + 1,
            )
        if best is None or result.t > best.t:
            best = result

    assert best is not None
    gap = best.report.gap_relative if best.report is not None else float("inf")
    raise SolverError(
        f"no restart certified within {opts.max_outer_iters} iterations; "
        f"best relative gap {gap:.3g}",
        design=best.design,
        certificate=best.report,
        t_value=best.t,
    )


def count_support(design: Design, weight_floor: float = 1e-4) -> int:
    """Support size after clustering at 1e-3, ignoring dust weights."""
    if not (np.isfinite(weight_floor) and weight_floor >= 0.0):
        raise InvalidProblemError("weight_floor must be nonnegative")
    merged = merge_close(design, 1e-3)
    return int(np.count_nonzero(merged.weights > weight_floor))


# grid scan cases: (m, k1, k2) with the difference fixed to
# b1*sin(mx) + 1*cos((m-1)x) + b2*cos(mx)
_SCAN_CASES: dict[str, tuple[int, int, int]] = {
    "m2": (2, 1, 0),
    "m3": (3, 2, 1),
}


def scan_problem(case: str, b1: float, b2: float) -> DiscriminationProblem:
    """Problem for one scan cell; the cos((m-1)x) coefficient is fixed to 1."""
    try:
        m, k1, k2 = _SCAN_CASES[case]
    except KeyError:
        raise InvalidProblemError(
            f"unknown scan case {case!r}; expected one of: {sorted(_SCAN_CASES)}"
        ) from None
    return DiscriminationProblem(m, k1, k2, (float(b1), 1.0, float(b2)))


@dataclass(frozen=True)
class RegionCell:
    b1: float
    b2: float
    n_support: int
    t_value: float
    gap_rel: float
    status: str  # "ok" or "UNRESOLVED"


@dataclass(frozen=True)
class RegionTable:
    """Support-structure scan over a (b1, b2) grid."""

    case: str
    cells: tuple[RegionCell, ...]

    CSV_HEADER = "b1,b2,n_support,t_value,gap_rel,status"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for c in self.cells:
            lines.append(
                f"{c.b1!r},{c.b2!r},{c.n_support},{c.t_value!r},"
                f"{c.gap_rel!r},{c.status}"
            )
        return "\n".join(lines) + "\n"


def _solve_cell(args: tuple[str, float, float, dict]) -> RegionCell:
    case, b1, b2, opts_dict = args
    problem = scan_problem(case, b1, b2)
    opts = SolverOptions(**opts_dict)
    try:
        rep = solve(problem, opts)
        return RegionCell(
            b1=b1,
            b2=b2,
            n_support=count_support(rep.design),
            t_value=rep.t_value,
            gap_rel=rep.certificate.gap_relative,
            status="ok",
        )
    except SolverError as err:
        n = count_support(err.design) if err.design is not None else 0
        gap = (
            err.certificate.gap_relative
            if err.certificate is not None
            else float("inf")
        )
        t = err.t_value if err.t_value is not None else float("nan")
        return RegionCell(
            b1=b1, b2=b2, n_support=n, t_value=t, gap_rel=gap, status="UNRESOLVED"
        )


def _values(rng: Sequence[float] | np.ndarray, resolution: int | None) -> np.ndarray:
    arr = np.asarray(rng, dtype=float)
    if arr.ndim != 1:
        raise InvalidProblemError("range must be one-dimensional")
    if arr.size == 2 and resolution is not None:
        if resolution < 2:
            raise InvalidProblemError("resolution must be at least 2")
        return np.linspace(arr[0], arr[1], resolution)
    if arr.size < 1:
        raise InvalidProblemError("range needs at least one value")
    return arr


def _run_jobs(worker, arglist: list, jobs: int) -> list:
    if jobs <= 1 or len(arglist) <= 1:
        return [worker(a) for a in arglist]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, arglist, chunksize=max(1, len(arglist) // (8 * jobs))))


def scan_regions(
    case: str,
    b1_range: Sequence[float],
    b2_range: Sequence[float],
    resolution: int | None = None,
    opts: SolverOptions | None = None,
    jobs: int = 1,
) -> RegionTable:
    """Support counts and criterion values over a (b1, b2) grid.

    Ranges are either explicit value arrays or (lo, hi) pairs expanded to
    ``resolution`` points.  Failed cells are recorded as UNRESOLVED with
    the best uncertified values; the scan itself never raises for them.
    """
    if case not in _SCAN_CASES:
        raise InvalidProblemError(
            f"unknown scan case {case!r}; expected one of: {sorted(_SCAN_CASES)}"
        )
    if opts is None:
        opts = SolverOptions()
    b1_values = _values(b1_range, resolution)
    b2_values = _values(b2_range, resolution)
    opts_dict = dataclasses.asdict(opts)
    args = [
        (case, float(b1), float(b2), opts_dict)
        for b1 in b1_values
        for b2 in b2_values
    ]
    cells = _run_jobs(_solve_cell, args, jobs)
    return RegionTable(case=case, cells=tuple(cells))


@dataclass(frozen=True)
class TrajectoryRow:
    b1: float
    point_index: int
    x: float
    weight: float


@dataclass(frozen=True)
class TrajectoryTable:
    """Support trajectories along a b1 sweep at fixed b2.

    point_index labels a continuous trajectory: consecutive sweep rows
    are matched by nearest circular distance, new points get fresh
    indices.  b1 values whose solve failed are listed in ``failures``
    and omitted from the rows.
    """

    case: str
    b2: float
    rows: tuple[TrajectoryRow, ...]
    failures: tuple[float, ...]

    CSV_HEADER = "b1,point_index,x,weight"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(f"{r.b1!r},{r.point_index},{r.x!r},{r.weight!r}")
        return "\n".join(lines) + "\n"


def _trace_cell(args: tuple[str, float, float, dict]):
    case, b1, b2, opts_dict = args
    problem = scan_problem(case, b1, b2)
    try:
        rep = solve(problem, SolverOptions(**opts_dict))
        merged = merge_close(rep.design, 1e-3)
        return (b1, merged.points, merged.weights)
    except SolverError:
        return (b1, None, None)


def _circ_dist(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def trace_designs(
    case: str,
    b2: float,
    b1_range: Sequence[float],
    steps: int | None = None,
    opts: SolverOptions | None = None,
    jobs: int = 1,
) -> TrajectoryTable:
    """Certified designs along a b1 sweep, with matched point indices."""
    if case not in _SCAN_CASES:
        raise InvalidProblemError(
            f"unknown scan case {case!r}; expected one of: {sorted(_SCAN_CASES)}"
        )
    if opts is None:
        opts = SolverOptions()
    b1_values = _values(b1_range, steps)
    opts_dict = dataclasses.asdict(opts)
    args = [(case, float(b1), float(b2), opts_dict) for b1 in b1_values]
    solved = _run_jobs(_trace_cell, args, jobs)

    rows: list[TrajectoryRow] = []
    failures: list[float] = []
    prev: dict[int, float] = {}
    next_index = 0
    for b1, pts, wts in solved:
        if pts is None:
            failures.append(b1)
            continue
        assignment: dict[int, int] = {}
        if prev:
            pairs = sorted(
                (
                    (_circ_dist(x, px), i, idx)
                    for i, x in enumerate(pts)
                    for idx, px in prev.items()
                ),
            )
            used_cur: set[int] = set()
            used_prev: set[int] = set()
            for _, i, idx in pairs:
                if i in used_cur or idx in used_prev:
                    continue
                assignment[i] = idx
                used_cur.add(i)
                used_prev.add(idx)
        for i in range(len(pts)):
            if i not in assignment:
                assignment[i] = next_index
                next_index += 1
        next_index = max(next_index, max(assignment.values()) + 1)
        prev = {assignment[i]: float(pts[i]) for i in range(len(pts))}
        for i in range(len(pts)):
            rows.append(
                TrajectoryRow(
                    b1=b1,
                    point_index=assignment[i],
                    x=float(pts[i]),
                    weight=float(wts[i]),
                )
            )
    return TrajectoryTable(
        case=case, b2=float(b2), rows=tuple(rows), failures=tuple(failures)
    )
