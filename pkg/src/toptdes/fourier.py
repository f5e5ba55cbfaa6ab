"""Trigonometric model pair on the circle and its basis functions.

A discrimination problem compares two Fourier regression models that share
all frequencies up to ``m``.  The difference between them is

    difference(x, q) = q0 + sum_{i<=k1} q_sin_i sin(ix) + sum_{i<=k2} q_cos_i cos(ix)
                       + sum_{i>k1} b_sin_i sin(ix) + sum_{i>k2} b_cos_i cos(ix)

where ``q`` collects the free (nuisance) coefficients of the smaller model
and ``b`` the fixed extra coefficients of the larger one.  ``q`` is ordered
(constant, sines ascending, cosines ascending); ``b`` likewise (extra sines
ascending, then extra cosines ascending).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidProblemError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class DiscriminationProblem:
    """A pair of nested Fourier models to discriminate between.

    Parameters
    ----------
    m : int
        Largest frequency of the extended model, m >= 1.
    k1, k2 : int
        Largest sine / cosine frequency of the smaller model,
        0 <= k1 <= m-1 and 0 <= k2 <= m-1.
    b : array_like
        Extra coefficients of the larger model, length (m-k1) + (m-k2),
        ordered sines first then cosines.  Must not be the zero vector.
    """

    m: int
    k1: int
    k2: int
    b: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 1):
            raise InvalidProblemError(f"m must be a positive integer, got {self.m!r}")
        for name, k in (("k1", self.k1), ("k2", self.k2)):
            if not (isinstance(k, (int, np.integer)) and 0 <= k <= self.m - 1):
                raise InvalidProblemError(
                    f"{name} must satisfy 0 <= {name} <= m-1, got {k!r} for m={self.m}"
                )
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if b.ndim != 1 or b.size != self.n_extra:
            raise InvalidProblemError(
                f"b must have length {self.n_extra} "
                f"(= (m-k1)+(m-k2)), got {b.size}"
            )
        if not np.all(np.isfinite(b)):
            raise InvalidProblemError("b must be finite")
        if np.all(b == 0.0):
            raise InvalidProblemError("b must not be the zero vector")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def n_nuisance(self) -> int:
        return 1 + self.k1 + self.k2

    @property
    def n_extra(self) -> int:
        return 2 * self.m - self.k1 - self.k2


def nuisance_basis(problem: DiscriminationProblem, x) -> np.ndarray:
    """Evaluate the smaller model's basis (1, sin x..sin k1 x, cos x..cos k2 x).

    ``x`` may be a scalar or an array; the basis index runs along the last
    axis of the result.
    """
    x = np.asarray(x, dtype=float)
    i1 = np.arange(1, problem.k1 + 1)
    i2 = np.arange(1, problem.k2 + 1)
    xc = x[..., None]
    return np.concatenate(
        [np.ones(x.shape + (1,)), np.sin(xc * i1), np.cos(xc * i2)], axis=-1
    )


def extra_basis(problem: DiscriminationProblem, x) -> np.ndarray:
    """Evaluate the extra basis (sin (k1+1)x..sin mx, cos (k2+1)x..cos mx)."""
    x = np.asarray(x, dtype=float)
    i1 = np.arange(problem.k1 + 1, problem.m + 1)
    i2 = np.arange(problem.k2 + 1, problem.m + 1)
    xc = x[..., None]
    return np.concatenate([np.sin(xc * i1), np.cos(xc * i2)], axis=-1)


def _check_q(problem: DiscriminationProblem, q) -> np.ndarray:
    q = np.atleast_1d(np.asarray(q, dtype=float))
    if q.ndim != 1 or q.size != problem.n_nuisance:
        raise InvalidProblemError(
            f"q must have length {problem.n_nuisance} (= 1+k1+k2), got {q.size}"
        )
    return q


def difference(problem: DiscriminationProblem, q, x):
    """Difference between the two models at ``x`` for nuisance vector ``q``."""
    q = _check_q(problem, q)
    out = nuisance_basis(problem, x) @ q + extra_basis(problem, x) @ problem.b
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def trig_coefficients(
    problem: DiscriminationProblem, q, include_fixed: bool = True
) -> tuple[float, np.ndarray, np.ndarray]:
    """Collapse a nuisance vector into full trig coefficient arrays.

    Returns ``(c0, a, d)`` with ``a[i-1]``/``d[i-1]`` the coefficient of
    sin(ix)/cos(ix), i = 1..m.  With ``include_fixed`` the extra
    coefficients ``b`` are filled into the high frequencies, so the triple
    represents the difference function itself.
    """
    q = _check_q(problem, q)
    m, k1, k2 = problem.m, problem.k1, problem.k2
    a = np.zeros(m)
    d = np.zeros(m)
    a[:k1] = q[1 : 1 + k1]
    d[:k2] = q[1 + k1 :]
    if include_fixed:
        a[k1:] += problem.b[: m - k1]
        d[k2:] += problem.b[m - k1 :]
    return float(q[0]), a, d


def trig_derivative(c0: float, a: np.ndarray, d: np.ndarray):
    """Coefficients of d/dx applied to c0 + sum a_i sin(ix) + sum d_i cos(ix)."""
    i = np.arange(1, a.size + 1, dtype=float)
    return 0.0, -i * d, i * a


def trig_eval(c0: float, a: np.ndarray, d: np.ndarray, x):
    """Evaluate a trig polynomial given by coefficient arrays at ``x``."""
    x = np.asarray(x, dtype=float)
    i = np.arange(1, a.size + 1)
    xi = x[..., None] * i
    return c0 + np.sin(xi) @ a + np.cos(xi) @ d


def chebyshev_t(n: int, t):
    """Chebyshev polynomial of the first kind, elementwise in ``t``.

    Uses cos(n arccos t) on [-1, 1] and the three-term recurrence outside,
    where the trigonometric form is undefined.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 0):
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    t_arr = np.asarray(t, dtype=float)
    out = np.empty_like(t_arr)
    inside = np.abs(t_arr) <= 1.0
    out[inside] = np.cos(n * np.arccos(t_arr[inside]))
    if not np.all(inside):
        tt = t_arr[~inside]
        prev, cur = np.ones_like(tt), tt.copy()
        if n == 0:
            cur = prev
        else:
            for _ in range(n - 1):
                prev, cur = cur, 2.0 * tt * cur - prev
        out[~inside] = cur
    return float(out) if np.ndim(t) == 0 else out
